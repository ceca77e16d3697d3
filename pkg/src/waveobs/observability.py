"""Per-mode observation maps and strategic time-pair certification.

A pair of position snapshots observes each mode through a 2x2 complex
map sending the travelling pair (a, b) to the mode's snapshot values.
The map's determinant is 2i*sin(w*delta) in closed form, so a time pair
controls every mode exactly when w*delta stays away from pi*Z, and the
quality of control is a Diophantine property of delta/pi.

Certificates never overstate what a finite computation shows.  The
"certified-all-k" verdict is issued only when the gap is an exact
number whose continued fraction has a certain, finite largest partial
quotient K: then k*||k*xi|| >= 1/(K+2) covers every mode past the scan.
Exact rational gaps are refuted outright with the first resonant index.
Float gaps can only ever be certified up to the scan bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp

from .cf import partial_quotient_sup
from .diophantine import FloorScan, badly_approx_floor, nearest_int_distance
from .exact import ExactReal, work_prec

__all__ = [
    "CERTIFIED_ALL_K",
    "CERTIFIED_UP_TO_SCAN",
    "INCONCLUSIVE_FLOAT",
    "REFUTED",
    "LoadedThreshold",
    "ModeMap",
    "ObservationGap",
    "SingularModeError",
    "SobolevOrderPair",
    "StrategicCertificate",
    "certify_beam",
    "certify_loaded",
    "certify_plate",
    "certify_string",
    "closed_form_inverse_norm",
    "exact_resonant_modes",
    "loaded_q_threshold",
    "mode_map",
    "mode_map_det",
    "mode_map_inverse_norm",
    "multi_time_floor",
    "perturbation_gap",
    "plate_thetas",
]

CERTIFIED_ALL_K = "certified-all-k"
CERTIFIED_UP_TO_SCAN = "certified-up-to-scan"
REFUTED = "refuted"
INCONCLUSIVE_FLOAT = "inconclusive-float"


class SingularModeError(ValueError):
    """An observation map is singular (resonant mode)."""

    def __init__(self, index, omega_delta_over_pi=None):
        self.index = index
        detail = ""
        if omega_delta_over_pi is not None:
            detail = f" (w*delta/pi = {omega_delta_over_pi})"
        super().__init__(f"singular observation map at mode {index}{detail}")


@dataclass(frozen=True)
class SobolevOrderPair:
    """Observation order r and data order s, r >= s."""

    r: float
    s: float

    def __post_init__(self):
        if self.r < self.s:
            raise ValueError("observation order r must be >= data order s")

    @property
    def gap(self) -> float:
        return self.r - self.s


@dataclass(frozen=True)
class ObservationGap:
    """Observation times together with the exact gap (t0 - t1)/pi."""

    xi: ExactReal
    times: tuple[float, ...]

    @staticmethod
    def from_xi(xi: ExactReal, base: float = 0.0) -> "ObservationGap":
        return ObservationGap(xi, (base + math.pi * float(xi), base))

    @staticmethod
    def from_times(t0: float, t1: float, xi: ExactReal | None = None) -> "ObservationGap":
        if xi is None:
            xi = ExactReal.from_float((t0 - t1) / math.pi)
        return ObservationGap(xi, (t0, t1))

    @property
    def delta(self) -> float:
        return self.times[0] - self.times[1]


# ----------------------------------------------------------------------
# mode maps


@dataclass
class ModeMap:
    """Rows of snapshot responses of one mode, columns the (a, b) pair."""

    index: int | tuple[int, int]
    omega: float
    matrix: np.ndarray
    kinds: tuple[str, ...]
    times: tuple[float, ...]


def mode_map(idx, times: Sequence[float], kinds: Sequence[str],
             system) -> ModeMap:
    """Observation map of mode ``idx`` for the given rows.

    A position row at time t is (e^{iwt}, e^{-iwt}); a velocity row is
    (iw e^{iwt}, -iw e^{-iwt}).
    """
    if len(times) != len(kinds):
        raise ValueError("one kind per observation time")
    if len(times) < 2:
        raise ValueError("need at least two observation rows")
    w = system.frequency(idx)
    rows = []
    for t, kind in zip(times, kinds):
        ph = complex(math.cos(w * t), math.sin(w * t))
        if kind == "position":
            rows.append((ph, ph.conjugate()))
        elif kind == "velocity":
            rows.append((1j * w * ph, -1j * w * ph.conjugate()))
        else:
            raise ValueError(f"unknown observation kind {kind!r}")
    return ModeMap(idx, w, np.array(rows, dtype=complex), tuple(kinds), tuple(times))


def mode_map_det(m: ModeMap) -> complex:
    """Closed-form determinant of a square (2x2) mode map.

    position/position: 2i sin(w*delta); position/velocity: -2iw cos(w*delta);
    velocity/position: 2iw cos(w*delta); velocity/velocity: 2i w^2 sin(w*delta),
    with delta = t0 - t1.
    """
    if m.matrix.shape != (2, 2):
        raise ValueError("determinant is defined for square (two-row) maps")
    wd = m.omega * (m.times[0] - m.times[1])
    k0, k1 = m.kinds
    if k0 == "position" and k1 == "position":
        return 2j * math.sin(wd)
    if k0 == "position" and k1 == "velocity":
        return -2j * m.omega * math.cos(wd)
    if k0 == "velocity" and k1 == "position":
        return 2j * m.omega * math.cos(wd)
    return 2j * m.omega ** 2 * math.sin(wd)


def _gram_singular_values(matrix: np.ndarray) -> tuple[float, float]:
    """(sigma_max, sigma_min) from the closed-form 2x2 Gram eigenvalues.

    sigma_max via the Gram trace/discriminant is stable; sigma_min is
    recovered as |det|/sigma_max (or sqrt(det Gram) for tall maps) to
    dodge the cancellation in the small eigenvalue.
    """
    g = matrix.conj().T @ matrix
    tr = g[0, 0].real + g[1, 1].real
    det_g = g[0, 0].real * g[1, 1].real - abs(g[0, 1]) ** 2
    disc = math.sqrt(max(tr * tr - 4.0 * det_g, 0.0))
    hi = math.sqrt(max((tr + disc) / 2.0, 0.0))
    if hi == 0.0:
        return 0.0, 0.0
    if matrix.shape[0] == 2:
        vol = abs(matrix[0, 0] * matrix[1, 1] - matrix[0, 1] * matrix[1, 0])
    else:
        vol = math.sqrt(max(det_g, 0.0))
    return hi, vol / hi


def mode_map_inverse_norm(m: ModeMap) -> float:
    """Operator norm of the (pseudo-)inverse, 1/sigma_min of the map.

    For a position/position pair this equals
    sqrt(1 + |cos(w*delta)|) / (sqrt(2) |sin(w*delta)|).
    """
    hi, lo = _gram_singular_values(m.matrix)
    if lo <= 1e-14 * max(hi, 1.0):
        wd_over_pi = m.omega * (m.times[0] - m.times[1]) / math.pi
        raise SingularModeError(m.index, wd_over_pi)
    return 1.0 / lo


def mode_map_cond(m: ModeMap) -> float:
    hi, lo = _gram_singular_values(m.matrix)
    return math.inf if lo == 0.0 else hi / lo


def closed_form_inverse_norm(omega: float, delta: float) -> float:
    """sqrt(1 + |cos(w d)|) / (sqrt(2) |sin(w d)|) for position/position rows."""
    s = abs(math.sin(omega * delta))
    if s == 0.0:
        return math.inf
    return math.sqrt(1.0 + abs(math.cos(omega * delta))) / (math.sqrt(2.0) * s)


# ----------------------------------------------------------------------
# resonance bookkeeping


def _square_root_multiple(den: int) -> int:
    """Smallest k0 with den | k0^2; k0 = product of p^ceil(e/2)."""
    k0 = 1
    p = 2
    n = den
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            k0 *= p ** ((e + 1) // 2)
        p += 1 if p == 2 else 2
    if n > 1:
        k0 *= n
    return k0


def exact_resonant_modes(xi: ExactReal, system, shape) -> set | None:
    """Indices with w*delta in pi*Z decided exactly, or None when undecidable.

    Exact decisions exist for rational gaps on the unloaded string
    (k*xi integer), the beam (k^2*xi integer) and the loaded string with
    rational load (only integer-valued sqrt(k^2+q) can resonate).
    Quadratic gaps never resonate.
    """
    if xi.is_quadratic:
        return set()
    if not xi.is_rational:
        return None
    den = xi.as_fraction().denominator
    if xi.as_fraction() == 0:
        # zero gap: every mode resonates
        if system.kind == "plate":
            M, N = shape
            return {(m, n) for m in range(1, M + 1) for n in range(1, N + 1)}
        return set(range(1, int(shape) + 1))
    if system.kind == "beam":
        k0 = _square_root_multiple(den)
        return set(range(k0, int(shape) + 1, k0))
    if system.kind == "string":
        if system.q == 0.0:
            return set(range(den, int(shape) + 1, den))
        q_frac = Fraction(system.q).limit_denominator(10**9)
        if float(q_frac) != system.q:
            return None
        hits = _integer_sqrt_modes(q_frac)
        out = set()
        for k, j, d in hits:
            if k <= int(shape) and (xi.as_fraction() * Fraction(j, d)).denominator == 1:
                out.add(k)
        return out
    return None


def _integer_sqrt_modes(q: Fraction) -> list[tuple[int, int, int]]:
    """All k with sqrt(k^2 + q) rational, as (k, j, d) with the root j/d.

    With q = c/d reduced, k^2 + c/d = (x^2 + c*d)/d^2 for x = k*d, and the
    root is rational iff x^2 + c*d is a perfect square j^2.  Then
    (j-x)(j+x) = c*d forces x <= (c*d - 1)/2, a finite search.
    """
    if q <= 0:
        raise ValueError("load must be positive")
    c, d = q.numerator, q.denominator
    cd = c * d
    out = []
    for x in range(d, (cd - 1) // 2 + 1, d):
        j2 = x * x + cd
        j = math.isqrt(j2)
        if j * j == j2:
            out.append((x // d, j, d))
    return out


# ----------------------------------------------------------------------
# certificates


@dataclass
class StrategicCertificate:
    """Outcome of one strategic-pair certification scan."""

    system: str
    exponent: float
    gap_syntax: str | None
    scan_bound: int | tuple[int, int]
    observed_floor: float
    observed_argmin: int | tuple[int, int] | None
    observed_syntax: str | None
    verdict: str
    exact_scan: bool
    theoretical_floor: float | None = None
    theoretical_floor_fraction: str | None = None
    largest_partial_quotient: int | None = None
    quotient_certain: bool = False
    notes: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, tuple):
                return list(v)
            return v

        return {
            "system": self.system,
            "exponent": self.exponent,
            "gap_over_pi": self.gap_syntax,
            "scan_bound": clean(self.scan_bound),
            "observed_floor": self.observed_floor,
            "observed_argmin": clean(self.observed_argmin),
            "observed_floor_syntax": self.observed_syntax,
            "verdict": self.verdict,
            "exact_scan": self.exact_scan,
            "theoretical_floor": self.theoretical_floor,
            "theoretical_floor_fraction": self.theoretical_floor_fraction,
            "largest_partial_quotient": self.largest_partial_quotient,
            "quotient_certain": self.quotient_certain,
            "notes": list(self.notes),
            "details": self.details,
        }


def _quotient_sup(xi: ExactReal) -> tuple[int | None, bool]:
    """Largest partial quotient of the fractional part (K is shift-invariant)."""
    try:
        K, certain = partial_quotient_sup(xi.frac_part())
    except Exception:
        return None, False
    return (K if K >= 1 else None), certain


def _floor_fields(K: int | None, certain: bool) -> tuple[float | None, str | None]:
    if K is None or not certain:
        return None, None
    fr = Fraction(1, K + 2)
    return float(fr), f"{fr.numerator}/{fr.denominator}"


def certify_string(gap: ObservationGap, alpha: float, k_max: int) -> StrategicCertificate:
    """Certify ||k*xi|| >= c/k^alpha over the scan range, and beyond when possible.

    Rational gaps are refuted with the exact first resonant index, even
    past the scan bound.  Exact irrational gaps with a certain largest
    partial quotient K and alpha >= 1 are certified for every k with the
    floor 1/(K+2).  alpha < 1 can never be certified for all k: the
    convergent denominators always dip below any such floor.
    """
    if alpha < 0:
        raise ValueError("exponent must be >= 0")
    xi = gap.xi
    scan = badly_approx_floor(xi, alpha, k_max)
    notes: list[str] = []
    if xi.is_rational:
        zero_at = xi.as_fraction().denominator  # 1 for integer gaps
        verdict = REFUTED
        notes.append(f"rational gap: exact resonance at every multiple of k = {zero_at}")
        observed = 0.0 if zero_at <= k_max else scan.c_star
        return StrategicCertificate(
            "string", float(alpha), xi.syntax(), k_max, observed,
            zero_at if zero_at <= k_max else scan.argmin, scan.c_star_syntax,
            verdict, scan.exact, notes=tuple(notes),
            details={"exact_zero_at": zero_at})
    K, certain = _quotient_sup(xi)
    theo, theo_frac = _floor_fields(K, certain)
    if xi.is_quadratic and certain and alpha >= 1:
        verdict = CERTIFIED_ALL_K
        notes.append("bounded partial quotients extend the floor to every k")
    elif xi.is_float:
        verdict = INCONCLUSIVE_FLOAT if (scan.note and "trust" in scan.note) else CERTIFIED_UP_TO_SCAN
        notes.append("float gap: no statement past the scan bound")
        theo, theo_frac = None, None
    else:
        verdict = CERTIFIED_UP_TO_SCAN
        if alpha < 1:
            notes.append("exponent < 1: infinitely many k satisfy ||k*xi|| < 1/k, "
                         "so no all-k floor exists")
            theo, theo_frac = None, None
    return StrategicCertificate(
        "string", float(alpha), xi.syntax(), k_max, scan.c_star, scan.argmin,
        scan.c_star_syntax, verdict, scan.exact,
        theoretical_floor=theo, theoretical_floor_fraction=theo_frac,
        largest_partial_quotient=K, quotient_certain=certain, notes=tuple(notes))


def certify_beam(gap: ObservationGap, alpha: float, k_max: int) -> StrategicCertificate:
    """Certify ||k^2*xi|| >= c/k^alpha by scanning the squared indices.

    With a certain K and alpha >= 2, k^alpha*||k^2*xi|| >= k^2*||k^2*xi||
    >= 1/(K+2) for every k, by substituting m = k^2 in the string floor.
    """
    if alpha < 0:
        raise ValueError("exponent must be >= 0")
    xi = gap.xi
    scan = badly_approx_floor(xi, alpha, k_max, index_power=2)
    notes: list[str] = []
    if xi.is_rational:
        zero_at = _square_root_multiple(xi.as_fraction().denominator)
        notes.append(f"rational gap: k^2 resonance first at k = {zero_at}")
        observed = 0.0 if zero_at <= k_max else scan.c_star
        return StrategicCertificate(
            "beam", float(alpha), xi.syntax(), k_max, observed,
            zero_at if zero_at <= k_max else scan.argmin, scan.c_star_syntax,
            REFUTED, scan.exact, notes=tuple(notes),
            details={"exact_zero_at": zero_at})
    K, certain = _quotient_sup(xi)
    theo, theo_frac = _floor_fields(K, certain)
    if xi.is_quadratic and certain and alpha >= 2:
        verdict = CERTIFIED_ALL_K
        notes.append("squared-index substitution extends the floor to every k")
    elif xi.is_float:
        verdict = INCONCLUSIVE_FLOAT if (scan.note and "trust" in scan.note) else CERTIFIED_UP_TO_SCAN
        theo, theo_frac = None, None
    else:
        verdict = CERTIFIED_UP_TO_SCAN
        if alpha < 2:
            notes.append("all-k extension needs exponent >= 2 on the squared index")
            theo, theo_frac = None, None
    return StrategicCertificate(
        "beam", float(alpha), xi.syntax(), k_max, scan.c_star, scan.argmin,
        scan.c_star_syntax, verdict, scan.exact,
        theoretical_floor=theo, theoretical_floor_fraction=theo_frac,
        largest_partial_quotient=K, quotient_certain=certain, notes=tuple(notes))


def plate_thetas(xi: ExactReal, a_over_pi: ExactReal, b_over_pi: ExactReal
                 ) -> tuple[ExactReal, ExactReal]:
    """Exact (theta1, theta2) = (xi/(a/pi)^2, xi/(b/pi)^2) for plate sides a, b.

    theta_j is pi*delta/side^2; measuring the sides in units of pi keeps
    the thetas inside exact arithmetic.
    """
    return xi / (a_over_pi * a_over_pi), xi / (b_over_pi * b_over_pi)


def _reduced_plate_scan(theta: ExactReal, N: int, alpha: float, m_max: int,
                        n_max: int, swap: bool) -> FloorScan:
    """Exact scan of (m^2+n^2)^alpha * ||j*theta|| with j = N*m^2+n^2 (or swapped)."""
    int_alpha = float(alpha).is_integer()
    a_int = int(alpha) if int_alpha else None
    best = None
    best_idx = None
    best_float = None
    with mp.workprec(work_prec()):
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                j = (m * m + N * n * n) if swap else (N * m * m + n * n)
                dist = nearest_int_distance(theta * j)
                if dist.sign() == 0:
                    return FloorScan(0.0, (m, n), float(alpha), (m_max, n_max),
                                     True, True, ExactReal.rational(0).syntax())
                w = m * m + n * n
                if int_alpha:
                    value = dist * (w ** a_int)
                    if best is None or value < best:
                        best, best_idx = value, (m, n)
                else:
                    vf = dist.to_mpf() * mpmath.mpf(w) ** float(alpha)
                    if best_float is None or vf < best_float:
                        best_float, best_idx = vf, (m, n)
    if int_alpha:
        return FloorScan(float(best.to_mpf()), best_idx, float(alpha),
                         (m_max, n_max), theta.kind != "float", False, best.syntax())
    return FloorScan(float(best_float), best_idx, float(alpha), (m_max, n_max),
                     False, False)


def _integer_ratio(x: ExactReal, y: ExactReal) -> int | None:
    if x.is_float or y.is_float:
        return None
    ratio = x / y
    if ratio.is_rational and ratio.is_integer():
        n = int(ratio.as_fraction())
        return n if n >= 1 else None
    return None


def certify_plate(theta1: ExactReal, theta2: ExactReal, alpha: float,
                  box: tuple[int, int]) -> StrategicCertificate:
    """Certify ||m^2*theta1 + n^2*theta2|| >= c/(m^2+n^2)^alpha over the box.

    When theta1 = N*theta2 exactly for an integer N (square sides ratio),
    the form collapses to a single-number distance and the bounded-
    quotient floor extends past the box for alpha >= 1.  Otherwise the
    scan is a genuine two-dimensional linear-form floor.
    """
    from .diophantine import linear_form_floor

    if alpha < 0:
        raise ValueError("exponent must be >= 0")
    m_max, n_max = box
    notes: list[str] = []
    details: dict = {"theta1": theta1.syntax(), "theta2": theta2.syntax()}
    N = _integer_ratio(theta1, theta2)
    swap = False
    theta = theta2
    if N is None:
        N = _integer_ratio(theta2, theta1)
        if N is not None:
            swap = True
            theta = theta1
    if N is not None:
        scan = _reduced_plate_scan(theta, N, alpha, m_max, n_max, swap)
        details["reduction"] = {"N": N, "scanned_form":
                                ("m^2 + N*n^2" if swap else "N*m^2 + n^2")}
        if scan.zero_found:
            verdict = REFUTED
            K, certain, theo, theo_frac = None, False, None, None
        elif theta.is_rational:
            den = theta.as_fraction().denominator
            verdict = REFUTED
            K, certain, theo, theo_frac = None, False, None, None
            notes.append(f"rational theta: exact resonance at (m, n) = ({den}, {den})")
            details["exact_zero_at"] = [den, den]
        else:
            K, certain = _quotient_sup(theta)
            if certain and K is not None and alpha >= 1 and not theta.is_float:
                verdict = CERTIFIED_ALL_K
                fr = Fraction(1, N * (K + 2))
                theo, theo_frac = float(fr), f"{fr.numerator}/{fr.denominator}"
                notes.append("reduced form inherits the bounded-quotient floor")
            else:
                verdict = CERTIFIED_UP_TO_SCAN
                theo, theo_frac = None, None
        return StrategicCertificate(
            "plate", float(alpha), None, box, scan.c_star, scan.argmin,
            scan.c_star_syntax, verdict, scan.exact,
            theoretical_floor=theo, theoretical_floor_fraction=theo_frac,
            largest_partial_quotient=K, quotient_certain=certain,
            notes=tuple(notes), details=details)
    scan = linear_form_floor(theta1, theta2, alpha, m_max, n_max)
    if scan.zero_found:
        verdict = REFUTED
    elif theta1.is_rational and theta2.is_rational:
        den = math.lcm(theta1.as_fraction().denominator,
                       theta2.as_fraction().denominator)
        verdict = REFUTED
        notes.append(f"rational thetas: exact resonance at (m, n) = ({den}, {den})")
        details["exact_zero_at"] = [den, den]
    elif scan.approximate:
        verdict = CERTIFIED_UP_TO_SCAN
        notes.append("general linear form scanned in extended precision")
    else:
        verdict = CERTIFIED_UP_TO_SCAN
    return StrategicCertificate(
        "plate", float(alpha), None, box, scan.c_star, scan.argmin,
        scan.c_star_syntax, verdict, scan.exact, notes=tuple(notes),
        details=details)


# ----------------------------------------------------------------------
# loaded string


@dataclass(frozen=True)
class LoadedThreshold:
    """Load sizes under which a sine floor survives the frequency shift."""

    base_floor: float          # c with |sin(k*delta)| >= c/k (sine scale)
    delta: float
    q_max: float               # 2c/|delta|
    refined_q_max: float | None = None  # 4/(|delta| (K+2)) when K is known


def loaded_q_threshold(c: float, delta: float, K: int | None = None) -> LoadedThreshold:
    """q_max = 2c/|delta|, refined to 4/(|delta|(K+2)) when K is supplied."""
    if c <= 0:
        raise ValueError("base floor must be positive")
    if delta == 0:
        raise ValueError("gap must be nonzero")
    refined = 4.0 / (abs(delta) * (K + 2)) if K is not None else None
    return LoadedThreshold(c, delta, 2.0 * c / abs(delta), refined)


def perturbation_gap(k: int, q: float, delta: float) -> tuple[float, float]:
    """(bound, measured) for |sin(sqrt(k^2+q)*delta) - sin(k*delta)|.

    The mean value theorem bounds the difference by |delta|*q/(2k).
    """
    if k < 1:
        raise ValueError("mode number must be >= 1")
    if q < 0:
        raise ValueError("load must be >= 0")
    bound = abs(delta) * q / (2.0 * k)
    measured = abs(math.sin(math.sqrt(k * k + q) * delta) - math.sin(k * delta))
    return bound, measured


def _loaded_sine_scan(delta: float, q: float, k_max: int) -> tuple[float, int]:
    k = np.arange(1, k_max + 1, dtype=float)
    vals = k * np.abs(np.sin(np.sqrt(k * k + q) * delta))
    i = int(np.argmin(vals))
    return float(vals[i]), i + 1


def certify_loaded(gap: ObservationGap, q: ExactReal | float,
                   k_max: int) -> StrategicCertificate:
    """Certify k*|sin(sqrt(k^2+q)*delta)| >= c' for a loaded string, q > 0.

    Two independent routes are recorded.  Route "rational-gap": when
    delta/pi is rational, sin(delta*sqrt(k^2+q)) can only vanish at the
    finitely many k with sqrt(k^2+q) rational, which are enumerated and
    checked exactly for rational q (and excluded wholesale for exactly
    irrational q).  Route "perturbation": a sine floor c/k for the
    unloaded string survives as c' = c - |delta|*q/2 whenever
    q < 2c/|delta|.  Floors here live on the sine scale; nearest-integer
    floors are converted with |sin(pi x)| >= 2*||x||.
    """
    q_exact = q if isinstance(q, ExactReal) else ExactReal.from_float(q)
    q_float = float(q_exact)
    if q_float <= 0:
        raise ValueError("load q must be positive")
    xi = gap.xi
    delta = gap.delta
    observed, argmin = _loaded_sine_scan(delta, q_float, k_max)
    notes: list[str] = []
    details: dict = {"scale": "sine", "q": q_float}

    # route 1: rational gap, exact nonvanishing check
    sh: dict = {"applicable": xi.is_rational}
    if xi.is_rational and xi.sign() != 0:
        xi_frac = xi.as_fraction()
        if q_exact.is_rational:
            hits = _integer_sqrt_modes(q_exact.as_fraction())
            bad = [k for k, j, d in hits
                   if (xi_frac * Fraction(j, d)).denominator == 1]
            sh.update({
                "integer_sqrt_modes": [[k, j, d] for k, j, d in hits],
                "violations": bad,
                "nonvanishing": not bad,
                "checked": "all-k-exact",
            })
            if bad:
                notes.append(f"sine vanishes exactly at modes {bad}")
        elif q_exact.is_quadratic:
            sh.update({
                "integer_sqrt_modes": [],
                "violations": [],
                "nonvanishing": True,
                "checked": "all-k-exact",
                "reason": "irrational load: a rational multiple of sqrt(k^2+q) "
                          "in Z would force q rational",
            })
        else:
            min_sine = float(np.min(np.abs(np.sin(
                np.sqrt(np.arange(1, k_max + 1, dtype=float) ** 2 + q_float) * delta))))
            sh.update({
                "nonvanishing": min_sine > 1e-12,
                "checked": f"numeric-up-to-{k_max}",
                "min_abs_sine": min_sine,
            })
    details["rational_gap_route"] = sh

    # route 2: perturbation off the unloaded string
    base = certify_string(gap, 1.0, k_max)
    pert: dict = {"applicable": base.verdict == CERTIFIED_ALL_K}
    verdict = CERTIFIED_UP_TO_SCAN
    theo = theo_frac = None
    if base.verdict == CERTIFIED_ALL_K and base.theoretical_floor is not None:
        c_sine = 2.0 * base.theoretical_floor
        thr = loaded_q_threshold(c_sine, delta, base.largest_partial_quotient)
        c_prime = c_sine - abs(delta) * q_float / 2.0
        pert.update({
            "base_floor_sine": c_sine,
            "q_max": thr.q_max,
            "refined_q_max": thr.refined_q_max,
            "guaranteed_floor_sine": c_prime,
            "applies": q_float < thr.q_max,
        })
        if q_float < thr.q_max:
            verdict = CERTIFIED_ALL_K
            theo = c_prime
            notes.append("unloaded floor survives the load: c' = c - |delta|*q/2 > 0")
        else:
            notes.append("load exceeds the perturbation threshold; scan verdict only")
    details["perturbation_route"] = pert

    if xi.is_rational:
        if xi.sign() == 0:
            verdict = REFUTED
            notes.append("duplicate observation times")
        elif sh.get("nonvanishing") is False:
            verdict = REFUTED
        elif sh.get("checked") == "all-k-exact":
            verdict = CERTIFIED_UP_TO_SCAN
            notes.append("nonvanishing holds for every k; the floor constant is "
                         "certified only up to the scan bound")
        else:
            verdict = CERTIFIED_UP_TO_SCAN
    if xi.is_float and verdict == CERTIFIED_UP_TO_SCAN:
        notes.append("float gap: no statement past the scan bound")

    return StrategicCertificate(
        "loaded-string", 1.0, xi.syntax(), k_max, observed, argmin, None,
        verdict, False, theoretical_floor=theo,
        theoretical_floor_fraction=theo_frac,
        largest_partial_quotient=base.largest_partial_quotient,
        quotient_certain=base.quotient_certain,
        notes=tuple(notes), details=details)


# ----------------------------------------------------------------------
# several observation times


def multi_time_floor(taus: Sequence[ExactReal], k_max: int) -> FloorScan:
    """min over k <= k_max of k^(1/n) * max_p ||k*tau_p|| for n = len(taus).

    The maximum over several gaps decays no faster than k^(-1/n) for
    suitable algebraic gap tuples, which buys back 1 - 1/n orders of
    regularity compared to a single pair.  With a single exact tau this
    reduces to the plain weighted-distance floor.
    """
    taus = list(taus)
    n = len(taus)
    if n < 1:
        raise ValueError("need at least one gap")
    for i, t in enumerate(taus):
        if t.is_rational and t.as_fraction() == 0:
            raise ValueError("duplicate observation times (zero gap)")
        for u in taus[i + 1:]:
            if not t.is_float and not u.is_float and (t - u).sign() == 0:
                raise ValueError("duplicate observation times")
    if n == 1 and not taus[0].is_float:
        return badly_approx_floor(taus[0], 1, k_max)
    approx = any(t.is_float for t in taus)
    with mp.workprec(work_prec()):
        xs = [t.to_mpf() for t in taus]
        half = mpmath.mpf(1) / 2
        expo = mpmath.mpf(1) / n
        best = None
        best_k = None
        for k in range(1, k_max + 1):
            worst = mpmath.mpf(0)
            for x in xs:
                v = k * x
                f = v - mpmath.floor(v)
                dist = f if f <= half else 1 - f
                if dist > worst:
                    worst = dist
            value = worst * mpmath.mpf(k) ** expo
            if best is None or value < best:
                best, best_k = value, k
        return FloorScan(float(best), best_k, float(expo), k_max, False, False,
                         approximate=approx)
