"""Nearest-integer distances and certified approximation floors.

Everything here reduces to the distance-to-nearest-integer function
||x|| and minima of weighted distances k^a * ||k*x|| over index ranges.
For rational and quadratic inputs the scans run in exact integer
arithmetic: a reported zero is a true zero and the reported minimum is
the true minimum over the range.  Float inputs are scanned in extended
precision (at least 128-bit significands) and can never produce an
exact-zero verdict.

Scans report the argmin next to the minimum, with ties broken toward
the smallest index, so results are reproducible and usable as
regression baselines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import mpmath
from mpmath import mp

from .cf import available_quotients, cf_expand, convergents
from .exact import ExactReal, work_prec

__all__ = [
    "FloorScan",
    "NuEstimate",
    "badly_approx_floor",
    "dirichlet_witnesses",
    "floor_scan_rows",
    "linear_form_floor",
    "nearest_int_distance",
    "nu_liminf_estimate",
    "theoretical_floor_from_K",
]


def nearest_int_distance(x: ExactReal) -> ExactReal:
    """||x||: the distance from x to the nearest integer, in [0, 1/2]."""
    f = x.frac_part()
    if (f + f - 1).sign() > 0:
        return 1 - f
    return f


def theoretical_floor_from_K(K: int) -> Fraction:
    """Guaranteed floor of k*||k*x|| for every k >= 1 when sup a_k = K.

    For q_n <= k < q_{n+1} the best-approximation property gives
    k*||k*x|| >= q_n*||q_n*x|| > q_n/(q_{n+1}+q_n) >= 1/(K+2).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    return Fraction(1, K + 2)


@dataclass(frozen=True)
class FloorScan:
    """Minimum of a weighted nearest-integer distance over a scan range."""

    c_star: float
    argmin: int | tuple[int, int] | None
    exponent: float
    bound: int | tuple[int, int]
    exact: bool
    zero_found: bool
    c_star_syntax: str | None = None
    approximate: bool = False
    note: str | None = None

    def to_dict(self) -> dict:
        return {
            "c_star": self.c_star,
            "argmin": list(self.argmin) if isinstance(self.argmin, tuple) else self.argmin,
            "exponent": self.exponent,
            "bound": list(self.bound) if isinstance(self.bound, tuple) else self.bound,
            "exact": self.exact,
            "zero_found": self.zero_found,
            "c_star_syntax": self.c_star_syntax,
            "approximate": self.approximate,
            "note": self.note,
        }


def _sign_quad(X: int, Y: int, d: int) -> int:
    """Sign of X + Y*sqrt(d), d squarefree > 1 (so zero only when X == Y == 0)."""
    if Y == 0:
        return (X > 0) - (X < 0)
    if X == 0:
        return 1 if Y > 0 else -1
    if X > 0 and Y > 0:
        return 1
    if X < 0 and Y < 0:
        return -1
    if X > 0:  # Y < 0
        return 1 if X * X > Y * Y * d else -1
    return 1 if Y * Y * d > X * X else -1  # X < 0 < Y


def _scan_rational(num: int, den: int, alpha, k_max: int, power: int) -> FloorScan:
    alpha_f = float(alpha)
    int_alpha = alpha_f.is_integer()
    a_int = int(alpha_f) if int_alpha else None
    best = None  # Fraction if int_alpha else mpf
    best_k = None
    num %= den
    with mp.workprec(work_prec()):
        for k in range(1, k_max + 1):
            m = k * k if power == 2 else k
            t = (m * num) % den
            if t == 0:
                zero = ExactReal.rational(0)
                return FloorScan(0.0, k, alpha_f, k_max, True, True, zero.syntax())
            t = min(t, den - t)
            if int_alpha:
                value = Fraction(t * k**a_int, den)
            else:
                value = mpmath.mpf(t) / den * mpmath.mpf(k) ** alpha_f
            if best is None or value < best:
                best, best_k = value, k
        if int_alpha:
            exact_val = ExactReal.from_fraction(best)
            return FloorScan(float(exact_val), best_k, alpha_f, k_max, True, False,
                             exact_val.syntax())
        return FloorScan(float(best), best_k, alpha_f, k_max, False, False,
                         note="non-integer exponent weighted in extended precision")


def _scan_quadratic(xi: ExactReal, alpha, k_max: int, power: int) -> FloorScan:
    p, q, d, r = xi.p, xi.q, xi.d, xi.r  # r > 0, q != 0, d squarefree
    alpha_f = float(alpha)
    int_alpha = alpha_f.is_integer()
    a_int = int(alpha_f) if int_alpha else None
    best_A = best_B = None  # value (A + B*sqrt(d)) / r
    best_k = None
    best_mpf = None
    with mp.workprec(work_prec()):
        sqrt_d = mpmath.sqrt(d)
        for k in range(1, k_max + 1):
            m = k * k if power == 2 else k
            mp_, mq = m * p, m * q
            if mq > 0:
                s = math.isqrt(mq * mq * d)
            else:
                s = -math.isqrt(mq * mq * d) - 1
            fl = (mp_ + s) // r
            A, B = mp_ - fl * r, mq  # fractional part (A + B*sqrt(d)) / r in (0, 1)
            if _sign_quad(2 * A - r, 2 * B, d) > 0:
                A, B = r - A, -B  # distance is 1 - frac
            if int_alpha:
                w = k**a_int
                A, B = A * w, B * w
                if best_A is None or _sign_quad(A - best_A, B - best_B, d) < 0:
                    best_A, best_B, best_k = A, B, k
            else:
                value = (A + B * sqrt_d) / r * mpmath.mpf(k) ** alpha_f
                if best_mpf is None or value < best_mpf:
                    best_mpf, best_k = value, k
        if int_alpha:
            exact_val = ExactReal.quadratic(best_A, best_B, d, r)
            return FloorScan(float(exact_val), best_k, alpha_f, k_max, True, False,
                             exact_val.syntax())
        return FloorScan(float(best_mpf), best_k, alpha_f, k_max, False, False,
                         note="non-integer exponent weighted in extended precision")


def _scan_float(xi: ExactReal, alpha, k_max: int, power: int) -> FloorScan:
    alpha_f = float(alpha)
    with mp.workprec(work_prec()):
        x = xi.to_mpf()
        half = mpmath.mpf(1) / 2
        best = None
        best_k = None
        for k in range(1, k_max + 1):
            m = k * k if power == 2 else k
            v = m * x
            f = v - mpmath.floor(v)
            dist = f if f <= half else 1 - f
            value = dist * mpmath.mpf(k) ** alpha_f
            if best is None or value < best:
                best, best_k = value, k
        # distances this close to the rounding floor cannot be told from zero
        trust = mpmath.ldexp(1, 24 - mp.prec) * (1 + abs(k_max * x))
        suspicious = best < trust
    return FloorScan(float(best), best_k, alpha_f, k_max, False, False,
                     approximate=True,
                     note="below precision trust threshold" if suspicious else None)


def badly_approx_floor(xi: ExactReal, alpha, k_max: int, *, index_power: int = 1) -> FloorScan:
    """min over 1 <= k <= k_max of k^alpha * ||k^index_power * xi||.

    Exact (integer arithmetic throughout) for rational and quadratic
    inputs with integer exponents; a zero is found iff xi is rational
    and its denominator divides some scanned index.  index_power = 2
    scans the squared indices used by fourth-order systems.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if alpha < 0:
        raise ValueError("exponent must be >= 0")
    if index_power not in (1, 2):
        raise ValueError("index_power must be 1 or 2")
    if xi.is_rational:
        fr = xi.as_fraction()
        return _scan_rational(fr.numerator, fr.denominator, alpha, k_max, index_power)
    if xi.is_quadratic:
        return _scan_quadratic(xi, alpha, k_max, index_power)
    return _scan_float(xi, alpha, k_max, index_power)


def floor_scan_rows(xi: ExactReal, alpha, k_max: int,
                    *, index_power: int = 1) -> Iterator[tuple[int, float, float]]:
    """Per-index rows (k, distance, k^alpha * distance) for plotting and CSV export.

    Rows are extended-precision floats; the certified minimum should be
    taken from :func:`badly_approx_floor`, not recomputed from rows.
    """
    alpha_f = float(alpha)
    with mp.workprec(work_prec()):
        x = xi.to_mpf()
        half = mpmath.mpf(1) / 2
        for k in range(1, k_max + 1):
            m = k * k if index_power == 2 else k
            v = m * x
            f = v - mpmath.floor(v)
            dist = f if f <= half else 1 - f
            yield k, float(dist), float(dist * mpmath.mpf(k) ** alpha_f)


def dirichlet_witnesses(xi: ExactReal, count: int) -> list[int]:
    """Denominators k with ||k*xi|| < 1/k, read off the convergents.

    Each witness is verified by exact arithmetic (numerically, at
    extended precision, when xi is a float).  Rational inputs are
    rejected: they admit only finitely many candidates.
    """
    if xi.is_rational:
        raise ValueError("witnesses require an irrational input")
    if count < 1:
        raise ValueError("count must be >= 1")
    cf = cf_expand(xi, depth=max(64, 2 * count + 8))
    avail = available_quotients(cf)
    want = count + 4
    out: list[int] = []
    seen: set[int] = set()
    while len(out) < count:
        take = want if avail is None else min(want, avail)
        for conv in convergents(cf, take):
            k = conv.q
            if k < 1 or k in seen:
                continue
            dist = nearest_int_distance(xi * k)
            if (dist * k - 1).sign() < 0:
                seen.add(k)
                out.append(k)
                if len(out) == count:
                    break
        else:
            if avail is not None and take >= avail:
                raise ValueError(
                    f"only {len(out)} witnesses verifiable from {avail} trusted quotients")
            want *= 2
            continue
        break
    return sorted(out)


@dataclass(frozen=True)
class NuEstimate:
    """Tail estimate of liminf k*||k*xi|| over convergent denominators."""

    value: float
    products: tuple[float, ...]
    window: int
    stabilized: bool


def nu_liminf_estimate(xi: ExactReal, depth: int = 64) -> NuEstimate:
    """Estimate liminf_k k*||k*xi|| from q_n*||q_n*xi|| along convergents.

    The reported value is the minimum over the last-window products; the
    ``stabilized`` flag compares it against the preceding window.
    """
    if xi.is_rational:
        raise ValueError("liminf estimate requires an irrational input")
    cf = cf_expand(xi, depth)
    avail = available_quotients(cf)
    n = depth if avail is None else min(depth, avail)
    products: list[float] = []
    for conv in convergents(cf, n):
        k = conv.q
        prod = nearest_int_distance(xi * k) * k
        products.append(float(prod.to_mpf()))
    if not products:
        raise ValueError("no convergents available")
    window = max(4, len(products) // 4)
    tail = products[-window:]
    value = min(tail)
    prev = products[-2 * window:-window] or tail
    stabilized = abs(min(prev) - value) <= 1e-3 * max(value, 1e-30)
    return NuEstimate(value, tuple(products), window, stabilized)


def _linear_exact_possible(x1: ExactReal, x2: ExactReal) -> bool:
    if x1.is_float or x2.is_float:
        return False
    if x1.is_quadratic and x2.is_quadratic and x1.d != x2.d:
        return False
    return True


def linear_form_floor(x1: ExactReal, x2: ExactReal, beta, m_max: int,
                      n_max: int) -> FloorScan:
    """min over the box of (m^2+n^2)^beta * ||m^2*x1 + n^2*x2||.

    Exact when both inputs live in one quadratic field (or are rational)
    and beta is an integer; otherwise the scan runs in extended
    precision and is flagged approximate.
    """
    if m_max < 1 or n_max < 1:
        raise ValueError("box bounds must be >= 1")
    if beta < 0:
        raise ValueError("exponent must be >= 0")
    beta_f = float(beta)
    int_beta = beta_f.is_integer()
    b_int = int(beta_f) if int_beta else None
    if _linear_exact_possible(x1, x2):
        best = None
        best_idx = None
        for m in range(1, m_max + 1):
            part = x1 * (m * m)
            for n in range(1, n_max + 1):
                dist = nearest_int_distance(part + x2 * (n * n))
                if dist.sign() == 0:
                    return FloorScan(0.0, (m, n), beta_f, (m_max, n_max), True, True,
                                     ExactReal.rational(0).syntax())
                w = m * m + n * n
                value = dist * (w**b_int) if int_beta else dist.to_mpf() * mpmath.mpf(w) ** beta_f
                if best is None or value < best:
                    best, best_idx = value, (m, n)
        if int_beta:
            return FloorScan(float(best.to_mpf()), best_idx, beta_f, (m_max, n_max),
                             True, False, best.syntax())
        return FloorScan(float(best), best_idx, beta_f, (m_max, n_max), False, False,
                         note="non-integer exponent weighted in extended precision")
    with mp.workprec(work_prec()):
        u1, u2 = x1.to_mpf(), x2.to_mpf()
        half = mpmath.mpf(1) / 2
        best = None
        best_idx = None
        for m in range(1, m_max + 1):
            part = m * m * u1
            for n in range(1, n_max + 1):
                v = part + n * n * u2
                f = v - mpmath.floor(v)
                dist = f if f <= half else 1 - f
                value = dist * mpmath.mpf(m * m + n * n) ** beta_f
                if best is None or value < best:
                    best, best_idx = value, (m, n)
        return FloorScan(float(best), best_idx, beta_f, (m_max, n_max), False, False,
                         approximate=True,
                         note="inputs outside a common quadratic field; extended-precision scan")
