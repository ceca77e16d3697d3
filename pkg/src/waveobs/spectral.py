"""Sine-basis modal representation of strings, beams, and rectangular plates.

A solution is stored as a pair of travelling-mode coefficient arrays
(a, b): the displacement of mode k at time t is
a_k*exp(i*w_k*t) + b_k*exp(-i*w_k*t), where the frequency law w_k is
owned by the system (sqrt(k^2+q) for a loaded string, k^2 for a beam,
the Laplacian eigenvalue for a plate).  Coefficients are always stored
as complex numbers; real initial data shows up as the checked closure
b_k = conj(a_k), not as a storage optimization.

Truncation is an explicit parameter everywhere, never adaptive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

__all__ = [
    "CoefficientVector",
    "ModalState",
    "WaveSystem",
    "evolve",
    "frequency",
    "from_modal",
    "modal_energy",
    "random_state",
    "read_snapshot",
    "sample_grid",
    "sobolev_norm",
    "to_modal",
    "write_snapshot",
]

FORMAT_VERSION = 1


@dataclass(frozen=True)
class WaveSystem:
    """Frequency law and norm weights for one vibrating system."""

    kind: str                 # "string" | "beam" | "plate"
    q: float = 0.0            # string load, >= 0
    a: float = 0.0            # plate side lengths
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("string", "beam", "plate"):
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.kind == "string" and self.q < 0:
            raise ValueError("string load q must be >= 0")
        if self.kind == "plate" and (self.a <= 0 or self.b <= 0):
            raise ValueError("plate sides must be positive")

    @staticmethod
    def string(q: float = 0.0) -> "WaveSystem":
        return WaveSystem("string", q=q)

    @staticmethod
    def beam() -> "WaveSystem":
        return WaveSystem("beam")

    @staticmethod
    def plate(a: float, b: float) -> "WaveSystem":
        return WaveSystem("plate", a=a, b=b)

    @property
    def velocity_order_shift(self) -> int:
        """Sobolev offset of the velocity component (1 string, 2 beam/plate)."""
        return 1 if self.kind == "string" else 2

    def frequency(self, idx) -> float:
        if self.kind == "string":
            return math.sqrt(idx * idx + self.q)
        if self.kind == "beam":
            return float(idx * idx)
        m, n = idx
        return (m * math.pi / self.a) ** 2 + (n * math.pi / self.b) ** 2

    def frequencies(self, shape) -> np.ndarray:
        """Frequency array for truncation ``shape`` (N, or (M, N) for plates)."""
        if self.kind == "plate":
            M, N = shape
            m = np.arange(1, M + 1)[:, None]
            n = np.arange(1, N + 1)[None, :]
            return (m * np.pi / self.a) ** 2 + (n * np.pi / self.b) ** 2
        k = np.arange(1, int(shape) + 1, dtype=float)
        if self.kind == "string":
            return np.sqrt(k * k + self.q)
        return k * k

    def norm_weights(self, shape) -> np.ndarray:
        """Weight w with mode norm weight w^(2s): k for 1-D systems, sqrt(lambda) for plates."""
        if self.kind == "plate":
            return np.sqrt(self.frequencies(shape))
        return np.arange(1, int(shape) + 1, dtype=float)

    def to_dict(self) -> dict:
        if self.kind == "string":
            return {"type": "string", "q": self.q}
        if self.kind == "beam":
            return {"type": "beam"}
        return {"type": "plate", "a": self.a, "b": self.b}

    @staticmethod
    def from_dict(doc: dict) -> "WaveSystem":
        kind = doc.get("type")
        if kind == "string":
            return WaveSystem.string(float(doc.get("q", 0.0)))
        if kind == "beam":
            return WaveSystem.beam()
        if kind == "plate":
            return WaveSystem.plate(float(doc["a"]), float(doc["b"]))
        raise ValueError(f"unknown system descriptor {doc!r}")


def frequency(system: WaveSystem, idx) -> float:
    """w of mode ``idx``: sqrt(k^2+q), k^2, or the plate eigenvalue."""
    return system.frequency(idx)


@dataclass
class CoefficientVector:
    """Sine-basis coefficients of one snapshot (position or velocity)."""

    system: WaveSystem
    values: np.ndarray
    role: str = "position"
    time: float = 0.0

    def __post_init__(self):
        if self.role not in ("position", "velocity"):
            raise ValueError(f"unknown role {self.role!r}")
        self.values = np.asarray(self.values, dtype=complex)
        if self.system.kind == "plate" and self.values.ndim != 2:
            raise ValueError("plate coefficients must be a 2-D array")
        if self.system.kind != "plate" and self.values.ndim != 1:
            raise ValueError("string/beam coefficients must be a 1-D array")

    @property
    def shape(self):
        return self.values.shape if self.system.kind == "plate" else self.values.shape[0]


@dataclass
class ModalState:
    """Travelling-mode pair (a, b) per mode, plus the declared data order."""

    system: WaveSystem
    a: np.ndarray
    b: np.ndarray
    order: float = 0.0

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=complex)
        self.b = np.asarray(self.b, dtype=complex)
        if self.a.shape != self.b.shape:
            raise ValueError("mismatched travelling-mode arrays")

    @property
    def shape(self):
        return self.a.shape if self.system.kind == "plate" else self.a.shape[0]


def _check_pair(y0: CoefficientVector, y1: CoefficientVector):
    if y0.system != y1.system:
        raise ValueError("snapshots disagree on the system")
    if y0.values.shape != y1.values.shape:
        raise ValueError("snapshots disagree on the truncation")


def to_modal(y0: CoefficientVector, y1: CoefficientVector, order: float = 0.0) -> ModalState:
    """Travelling-mode pair from position and velocity data at t = 0.

    Per mode: a = (c - i*d/w)/2 and b = (c + i*d/w)/2, which inverts
    c = a + b, d = i*w*(a - b).  Every frequency is >= the fundamental,
    so the division is safe.
    """
    _check_pair(y0, y1)
    if y0.role != "position" or y1.role != "velocity":
        raise ValueError("to_modal expects a (position, velocity) pair")
    w = y0.system.frequencies(y0.shape)
    c, d = y0.values, y1.values
    a = (c - 1j * d / w) / 2
    b = (c + 1j * d / w) / 2
    return ModalState(y0.system, a, b, order)


def from_modal(state: ModalState) -> tuple[CoefficientVector, CoefficientVector]:
    """Position and velocity coefficients at t = 0: c = a + b, d = i*w*(a - b)."""
    w = state.system.frequencies(state.shape)
    c = state.a + state.b
    d = 1j * w * (state.a - state.b)
    return (CoefficientVector(state.system, c, "position", 0.0),
            CoefficientVector(state.system, d, "velocity", 0.0))


def evolve(state: ModalState, t: float, role: str = "position") -> CoefficientVector:
    """Snapshot coefficients at time t.

    position: a*exp(iwt) + b*exp(-iwt); velocity: i*w*(a*exp(iwt) - b*exp(-iwt)).
    """
    w = state.system.frequencies(state.shape)
    ph = np.exp(1j * w * t)
    if role == "position":
        u = state.a * ph + state.b / ph
    elif role == "velocity":
        u = 1j * w * (state.a * ph - state.b / ph)
    else:
        raise ValueError(f"unknown role {role!r}")
    return CoefficientVector(state.system, u, role, t)


def sobolev_norm(v: CoefficientVector, order: float) -> float:
    """Weighted coefficient norm: sqrt(sum w^(2*order) |c|^2).

    The weight is the mode number for strings and beams and the square
    root of the plate eigenvalue for plates, so ``order`` means the same
    differentiability in every system.
    """
    w = v.system.norm_weights(v.shape)
    return float(np.sqrt(np.sum(w ** (2.0 * order) * np.abs(v.values) ** 2)))


def modal_energy(state: ModalState, s: float) -> float:
    """sum w^(2s) (|a|^2 + |b|^2), conserved exactly by evolve.

    For the unloaded string this ties to the data norms by the identity
    |y0|_s^2 + |y1|_{s-1}^2 = 2 * modal_energy; with a load q > 0 the
    per-mode ratio 4*energy/norms stays within [2/(1+q), 2].
    """
    w = state.system.norm_weights(state.shape)
    return float(np.sum(w ** (2.0 * s) * (np.abs(state.a) ** 2 + np.abs(state.b) ** 2)))


def sample_grid(v: CoefficientVector, points: int) -> np.ndarray:
    """Real displacement samples on a uniform grid including the boundary.

    Strings and beams are sampled on [0, pi]; plates on the full
    rectangle (a ``points`` x ``points`` grid).  Boundary values vanish
    by construction.  The imaginary part of the synthesis is discarded,
    which is exact for real data.
    """
    if points < 2:
        raise ValueError("need at least two sample points")
    if v.system.kind == "plate":
        M, N = v.values.shape
        x = np.linspace(0.0, v.system.a, points)
        y = np.linspace(0.0, v.system.b, points)
        sm = np.sin(np.outer(np.arange(1, M + 1) * np.pi / v.system.a, x))
        sn = np.sin(np.outer(np.arange(1, N + 1) * np.pi / v.system.b, y))
        return np.real(np.einsum("mn,mx,ny->xy", v.values, sm, sn))
    N = v.values.shape[0]
    x = np.linspace(0.0, math.pi, points)
    basis = np.sin(np.outer(np.arange(1, N + 1), x))
    return np.real(v.values @ basis)


def random_state(system: WaveSystem, shape, order: float = 0.0, seed: int = 0,
                 real_data: bool = True, unit_energy: bool = True) -> ModalState:
    """Reproducible random modal state, optionally with real initial data.

    Real data means b = conj(a); unit_energy rescales so that
    modal_energy(state, order) == 1.
    """
    rng = np.random.default_rng(seed)
    dims = tuple(shape) if system.kind == "plate" else (int(shape),)
    a = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    if real_data:
        b = np.conj(a)
    else:
        b = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    state = ModalState(system, a, b, order)
    if unit_energy:
        scale = math.sqrt(modal_energy(state, order))
        state = ModalState(system, a / scale, b / scale, order)
    return state


# ----------------------------------------------------------------------
# snapshot files


def _encode_value(z: complex):
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


def _encode_coefficients(values: np.ndarray):
    if values.ndim == 1:
        return [_encode_value(complex(z)) for z in values]
    return [[_encode_value(complex(z)) for z in row] for row in values]


def _decode_value(entry) -> complex:
    if isinstance(entry, list):
        return complex(entry[0], entry[1])
    return complex(entry)


def snapshot_document(v: CoefficientVector, gap_over_pi: str | None = None,
                      extra: dict[str, Any] | None = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "system": v.system.to_dict(),
        "role": v.role,
        "time": v.time,
        "modes": list(v.values.shape) if v.values.ndim == 2 else v.values.shape[0],
        "coefficients": _encode_coefficients(v.values),
    }
    if gap_over_pi is not None:
        doc["gap_over_pi"] = gap_over_pi
    if extra:
        doc.update(extra)
    return doc


def write_snapshot(v: CoefficientVector, path, gap_over_pi: str | None = None,
                   extra: dict[str, Any] | None = None) -> None:
    doc = snapshot_document(v, gap_over_pi, extra)
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def read_snapshot(path) -> tuple[CoefficientVector, dict]:
    """Parse a snapshot file; returns the vector and the raw document."""
    doc = json.loads(Path(path).read_text())
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported snapshot format_version {doc.get('format_version')!r}")
    system = WaveSystem.from_dict(doc["system"])
    coeffs = doc["coefficients"]
    if system.kind == "plate":
        values = np.array([[_decode_value(e) for e in row] for row in coeffs])
    else:
        values = np.array([_decode_value(e) for e in coeffs])
    v = CoefficientVector(system, values, doc.get("role", "position"),
                          float(doc.get("time", 0.0)))
    return v, doc
