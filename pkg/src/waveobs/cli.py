"""Experiment runner: simulate, certify, reconstruct, construct.

Every command embeds its full configuration in the JSON it writes, so a
run is reproducible from its own output; identical configuration and
seed produce byte-identical files.  Structured results are JSON, plot
data is CSV.

Exit codes: 0 success, 2 validation error, 3 singular modes present,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .constructions import construct_rational_gap
from .diophantine import floor_scan_rows
from .exact import ExactReal, ExactRealParseError, parse_exact
from .observability import (ObservationGap, certify_beam, certify_loaded,
                            certify_plate, certify_string, plate_thetas)
from .reconstruction import SnapshotSet, reconstruct, write_report_csv
from .spectral import (WaveSystem, evolve, random_state, read_snapshot,
                       to_modal, write_snapshot)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SINGULAR = 3
EXIT_IO = 4

OUT_DIR_ENV = "WAVEOBS_OUT"


class ValidationError(ValueError):
    pass


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUT_DIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _config_header(args, command: str) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return {
        "format_version": 1,
        "tool": "waveobs",
        "tool_version": __version__,
        "command": command,
        "config": cfg,
    }


def _parse_system(args) -> WaveSystem:
    if args.system == "string":
        return WaveSystem.string(args.q)
    if args.system == "beam":
        return WaveSystem.beam()
    if args.system == "plate":
        if args.plate_a is None or args.plate_b is None:
            raise ValidationError("plate needs --plate-a and --plate-b")
        return WaveSystem.plate(args.plate_a, args.plate_b)
    raise ValidationError(f"unknown system {args.system!r}")


def _parse_modes(text: str, plate: bool):
    if plate:
        parts = text.lower().split("x")
        if len(parts) != 2:
            raise ValidationError("plate truncation must look like MxN")
        return int(parts[0]), int(parts[1])
    return int(text)


def _parse_orders(text: str) -> tuple[float, float]:
    try:
        r, s = (float(p) for p in text.split(","))
    except ValueError as exc:
        raise ValidationError("orders must look like r,s") from exc
    if r < s:
        raise ValidationError("observation order r must be >= data order s")
    return r, s


# ----------------------------------------------------------------------
# commands


def cmd_simulate(args) -> int:
    system = _parse_system(args)
    out = _out_dir(args)
    modes = _parse_modes(args.modes, system.kind == "plate")
    if args.gap is not None:
        xi = parse_exact(args.gap)
        times = [math.pi * float(xi), 0.0]
        gap_syntax = xi.syntax()
    else:
        if not args.times:
            raise ValidationError("need --times or --gap")
        times = [float(t) for t in args.times.split(",")]
        gap_syntax = None
    if args.y0 and args.y1:
        y0, _ = read_snapshot(args.y0)
        y1, _ = read_snapshot(args.y1)
        state = to_modal(y0, y1, args.order)
    else:
        state = random_state(system, modes, order=args.order, seed=args.seed)
    header = _config_header(args, "simulate")
    written = []
    for i, t in enumerate(times):
        for role in args.roles.split(","):
            snap = evolve(state, t, role)
            name = f"snapshot_{i:03d}_{role}.json"
            write_snapshot(snap, out / name, gap_over_pi=gap_syntax, extra=header)
            written.append(name)
    manifest = dict(header)
    manifest["files"] = written
    _write_json(out / "simulate_manifest.json", manifest)
    print(f"wrote {len(written)} snapshot(s) to {out}")
    return EXIT_OK


def cmd_certify(args) -> int:
    out = _out_dir(args)
    r, s = _parse_orders(args.orders)
    header = _config_header(args, "certify")
    csv_rows = None
    if args.system == "plate":
        if args.theta1 is None or args.theta2 is None:
            if args.gap is None or args.plate_a is None or args.plate_b is None:
                raise ValidationError(
                    "plate certification needs --theta1/--theta2, or --gap with "
                    "--plate-a/--plate-b in units of pi")
            xi = parse_exact(args.gap)
            th1, th2 = plate_thetas(xi, parse_exact(args.plate_a_exact or f"float:{args.plate_a}"),
                                    parse_exact(args.plate_b_exact or f"float:{args.plate_b}"))
        else:
            th1, th2 = parse_exact(args.theta1), parse_exact(args.theta2)
        m_max, n_max = _parse_modes(args.box, True)
        cert = certify_plate(th1, th2, (r - s) / 2.0, (m_max, n_max))
    else:
        if args.gap is None:
            raise ValidationError("need --gap")
        xi = parse_exact(args.gap)
        gap = ObservationGap.from_xi(xi)
        if args.system == "beam":
            cert = certify_beam(gap, r - s, args.kmax)
            csv_rows = floor_scan_rows(xi, r - s, args.kmax, index_power=2)
        elif args.q > 0:
            cert = certify_loaded(gap, ExactReal.from_float(args.q) if args.q_exact is None
                                  else parse_exact(args.q_exact), args.kmax)
        else:
            cert = certify_string(gap, r - s, args.kmax)
            csv_rows = floor_scan_rows(xi, r - s, args.kmax)
    payload = dict(header)
    payload["certificate"] = cert.to_dict()
    _write_json(out / "certificate.json", payload)
    if csv_rows is not None:
        with (out / "scan.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "distance", "scaled_floor"])
            for row in csv_rows:
                writer.writerow(row)
    print(f"verdict: {cert.verdict} (observed floor {cert.observed_floor:.6g})")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    out = _out_dir(args)
    paths = args.snapshots.split(",")
    if len(paths) < 2:
        raise ValidationError("need at least two snapshot files")
    snaps = []
    gap_syntaxes = set()
    system = None
    for p in paths:
        v, doc = read_snapshot(p)
        snaps.append(v)
        if "gap_over_pi" in doc:
            gap_syntaxes.add(doc["gap_over_pi"])
        system = v.system if system is None else system
    xi = parse_exact(next(iter(gap_syntaxes))) if len(gap_syntaxes) == 1 else None
    report = reconstruct(SnapshotSet(system, snaps, xi=xi))
    payload = _config_header(args, "reconstruct")
    payload["report"] = report.to_dict()
    _write_json(out / "report.json", payload)
    write_report_csv(report, out / "report.csv")
    if report.has_singular_modes:
        print(f"singular modes skipped: {report.skipped}")
        return EXIT_SINGULAR
    print(f"recovered {len(report.records)} modes, max cond {report.max_cond:.3g}")
    return EXIT_OK


def cmd_construct(args) -> int:
    out = _out_dir(args)
    try:
        q = parse_exact(args.q_exact)
    except ExactRealParseError:
        raise ValidationError(f"bad load literal {args.q_exact!r}")
    cert = construct_rational_gap(args.tau, args.delta, q)
    payload = _config_header(args, "construct")
    payload["certificate"] = cert.to_dict()
    payload["verified"] = cert.verify()
    _write_json(out / "gap_certificate.json", payload)
    print(f"gap {cert.a}/{cert.b} * pi  (branch {cert.branch}, verified {cert.verify()})")
    return EXIT_OK


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waveobs",
        description="Observation-time certification and modal reconstruction "
                    "for strings, beams, and plates.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=None, help=f"output directory (default ${OUT_DIR_ENV} or .)")

    p = sub.add_parser("simulate", help="write snapshot files from initial data")
    common(p)
    p.add_argument("--system", default="string", choices=["string", "beam", "plate"])
    p.add_argument("--q", type=float, default=0.0, help="string load")
    p.add_argument("--plate-a", type=float, default=None)
    p.add_argument("--plate-b", type=float, default=None)
    p.add_argument("--modes", default="8", help="truncation N (or MxN for plates)")
    p.add_argument("--times", default=None, help="comma-separated observation times")
    p.add_argument("--gap", default=None, help="exact gap (t0-t1)/pi; implies times (pi*gap, 0)")
    p.add_argument("--roles", default="position", help="roles written per time")
    p.add_argument("--order", type=float, default=0.0, help="declared data order s")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--y0", default=None, help="position coefficient file")
    p.add_argument("--y1", default=None, help="velocity coefficient file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("certify", help="certify a strategic time pair")
    common(p)
    p.add_argument("--system", default="string", choices=["string", "beam", "plate"])
    p.add_argument("--q", type=float, default=0.0, help="string load (q > 0 certifies the loaded string)")
    p.add_argument("--q-exact", default=None, help="exact load literal, e.g. rat:1/10")
    p.add_argument("--gap", default=None, help="exact gap literal, e.g. quad:(1+1*sqrt(5))/2")
    p.add_argument("--orders", default="1,0", help="observation and data orders r,s")
    p.add_argument("--kmax", type=int, default=10000)
    p.add_argument("--box", default="50x50", help="plate scan box MxN")
    p.add_argument("--theta1", default=None, help="plate: exact m^2-coefficient")
    p.add_argument("--theta2", default=None, help="plate: exact n^2-coefficient")
    p.add_argument("--plate-a", type=float, default=None, help="plate side a in units of pi")
    p.add_argument("--plate-b", type=float, default=None, help="plate side b in units of pi")
    p.add_argument("--plate-a-exact", default=None, help="exact side a/pi literal")
    p.add_argument("--plate-b-exact", default=None, help="exact side b/pi literal")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("reconstruct", help="recover initial data from snapshot files")
    common(p)
    p.add_argument("--snapshots", required=True, help="comma-separated snapshot files")
    p.add_argument("--orders", default="1,0")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("construct", help="build a rational gap avoiding sine zeros")
    common(p)
    p.add_argument("--q-exact", required=True, help="exact load, e.g. rat:5 or quad:(0+1*sqrt(2))/1")
    p.add_argument("--tau", type=float, required=True, help="target gap")
    p.add_argument("--delta", type=float, required=True, help="tolerance, > 0")
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(f"i/o error: bad file: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValidationError, ExactRealParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
