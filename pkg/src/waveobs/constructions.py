"""Constructive gap recipes for the loaded string.

Two families of witnesses are produced here.  The first is a rational
multiple of pi, arbitrarily close to any target gap, whose sine factors
sin(gap * sqrt(k^2 + q)) provably never vanish: the finitely many modes
where sqrt(k^2 + q) is rational are enumerated exactly, and a prime-
power tweak of the denominator kills each of them.  The second follows
the shrinking sequence xi, xi/(1+xi), ... whose tail approximation
constant never changes, to find a gap small enough that a given load q
fits under the perturbation threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diophantine import nu_liminf_estimate
from .exact import ExactReal
from .observability import _integer_sqrt_modes

__all__ = [
    "GapSearchResult",
    "RationalGapCertificate",
    "SearchExhausted",
    "cf_shift_sequence",
    "construct_rational_gap",
    "loaded_gap_search",
]

# safety factor applied to the finite-depth liminf estimate
_NU_SAFETY = 0.9


class SearchExhausted(LookupError):
    """No admissible gap inside the allowed search range."""


@dataclass(frozen=True)
class RationalGapCertificate:
    """A gap a/b * pi near tau with sin(gap * sqrt(k^2+q)) != 0 for every k.

    ``square_hits`` lists the modes (k, j, d) where sqrt(k^2+q) is the
    rational j/d; the nonvanishing condition was verified there by exact
    divisibility, and holds everywhere else because the root is
    irrational.  ``prime``/``power`` record the denominator tweak when
    the perturbation branch ran.
    """

    tau: float
    delta: float
    q_syntax: str
    branch: str
    a: int
    b: int
    square_hits: tuple[tuple[int, int, int], ...]
    prime: int | None = None
    power: int | None = None

    @property
    def tau_prime(self) -> float:
        return self.a / self.b * math.pi

    def tau_prime_fraction(self) -> Fraction:
        return Fraction(self.a, self.b)

    def verify(self) -> bool:
        """Re-check every certificate condition by direct integer arithmetic."""
        if abs(self.tau - self.tau_prime) >= self.delta:
            return False
        for _, j, d in self.square_hits:
            if (Fraction(self.a, self.b) * Fraction(j, d)).denominator == 1:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "delta": self.delta,
            "q": self.q_syntax,
            "branch": self.branch,
            "a": self.a,
            "b": self.b,
            "tau_prime": self.tau_prime,
            "prime": self.prime,
            "power": self.power,
            "square_hits": [list(h) for h in self.square_hits],
        }


def _nearby_fraction(tau: float, tol: float) -> tuple[int, int]:
    """Reduced a/b with |tau - (a/b)*pi| < tol, chosen deterministically."""
    b = int(math.pi / tol) + 1
    a = round(tau * b / math.pi)
    g = math.gcd(abs(a), b)
    if g:
        a, b = a // g, b // g
    return a, b


def _smallest_prime_avoiding(values: list[int]) -> int:
    def is_prime(n: int) -> bool:
        if n < 2:
            return False
        for p in range(2, math.isqrt(n) + 1):
            if n % p == 0:
                return False
        return True

    p = 2
    while True:
        if is_prime(p) and all(v % p for v in values):
            return p
        p += 1


def _p_adic_valuation(n: int, p: int) -> int:
    if n == 0:
        return 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def construct_rational_gap(tau: float, delta: float, q: ExactReal) -> RationalGapCertificate:
    """Rational-multiple-of-pi gap near tau with provably nonvanishing sines.

    Branches: an exactly irrational q never admits a rational root
    sqrt(k^2+q), so any nearby a/b works.  A positive rational q = c/d
    has finitely many rational-root modes (enumerated via x^2 + cd = j^2,
    x <= (cd-1)/2); if a nearby fraction hits one of them, the
    denominator is multiplied by p^n for the smallest prime p dividing no
    root value and the smallest admissible power n, which makes every
    product (a'/b') * (j/d) a reduced non-integer.  The choice of p and n
    is deterministic, so rebuilding the certificate reproduces it.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if q.is_float:
        raise ValueError("load must be exactly rational or quadratic")
    if q.sign() < 0:
        raise ValueError("load must be >= 0")
    if q.sign() == 0:
        raise ValueError("q = 0 is out of scope: sqrt(k^2) is an integer for every k, "
                         "so no rational gap avoids all sine zeros")

    if q.is_quadratic:
        a, b = _nearby_fraction(tau, delta)
        if a == 0:
            # zero-valued gaps are degenerate; take the closest positive fraction
            b = int(2 * math.pi / delta) + 1
            a = 1
        return RationalGapCertificate(tau, delta, q.syntax(), "irrational-q",
                                      a, b, ())

    q_frac = q.as_fraction()
    hits = tuple(_integer_sqrt_modes(q_frac))
    branch_base = "integer-q" if q_frac.denominator == 1 else "rational-q-reduced"
    a, b = _nearby_fraction(tau, delta / 2)
    if a == 0:
        # zero target: take the smallest positive fraction within tolerance
        b = int(2 * math.pi / delta) + 1
        a = 1

    def overall_ok(aa: int, bb: int) -> bool:
        return all((Fraction(aa, bb) * Fraction(j, d)).denominator != 1
                   for _, j, d in hits)

    if not hits or overall_ok(a, b):
        branch = "integer-q-direct" if branch_base == "integer-q" else branch_base
        return RationalGapCertificate(tau, delta, q.syntax(), branch, a, b, hits)

    p = _smallest_prime_avoiding([j for _, j, _ in hits])
    # p^n must exceed the valuation of a (so p^n never divides (p^n-1)*a*j)
    # and push the perturbation a/(b*p^n) under the remaining half-tolerance
    n = max(_p_adic_valuation(a, p) + 1, 1)
    while p**n * b * delta <= 2 * abs(a) * math.pi:
        n += 1
    while abs(tau - (p**n - 1) * a / (p**n * b) * math.pi) >= delta:
        n += 1
    a2, b2 = (p**n - 1) * a, p**n * b
    g = math.gcd(abs(a2), b2)
    a2, b2 = a2 // g, b2 // g
    branch = ("integer-q-perturbed" if branch_base == "integer-q"
              else "rational-q-reduced")
    return RationalGapCertificate(tau, delta, q.syntax(), branch, a2, b2, hits,
                                  prime=p, power=n)


def cf_shift_sequence(xi: ExactReal, n_max: int) -> list[ExactReal]:
    """[xi_0, ..., xi_n_max] with xi_{j+1} = xi_j / (1 + xi_j), exactly.

    Each step bumps the first partial quotient by one and keeps the rest,
    so the tail approximation constant liminf k*||k*xi_j|| is the same
    for every member while the values shrink to zero.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if xi.is_rational:
        raise ValueError("the shift sequence needs an irrational start")
    if not xi.is_float:
        if xi.sign() <= 0 or (xi - 1).sign() >= 0:
            raise ValueError("start must lie in (0, 1)")
    out = [xi]
    for _ in range(n_max):
        xi = xi / (1 + xi)
        out.append(xi)
    return out


@dataclass(frozen=True)
class GapSearchResult:
    """Gap pi*xi_n small enough for the load, with its screening data."""

    n: int
    xi_n: ExactReal
    delta: float
    nu_estimate: float
    nu_safety: float
    min_abs_sine: float


def loaded_gap_search(q: float, xi: ExactReal, n_max: int, k_max: int,
                      sine_floor: float = 1e-12) -> GapSearchResult:
    """Smallest n with 2*nu - xi_n*pi*q/2 > 0 and no visible sine zero.

    nu is the convergent-tail estimate of liminf k*||k*xi|| scaled by a
    0.9 safety factor (finite scans can overshoot the liminf).  The
    sine check min_{k<=k_max} |sin(sqrt(k^2+q)*pi*xi_n)| > sine_floor is
    numeric; it screens the extra nonvanishing hypothesis.
    """
    if q <= 0:
        raise ValueError("load must be positive")
    nu = nu_liminf_estimate(xi).value * _NU_SAFETY
    if nu <= 0:
        raise ValueError("start gap shows no positive approximation constant")
    seq = cf_shift_sequence(xi, n_max)
    ks = np.arange(1, k_max + 1, dtype=float)
    omega = np.sqrt(ks * ks + q)
    for n, xi_n in enumerate(seq):
        xf = float(xi_n)
        if 2 * nu - xf * math.pi * q / 2 <= 0:
            continue
        min_sine = float(np.min(np.abs(np.sin(omega * math.pi * xf))))
        if min_sine > sine_floor:
            return GapSearchResult(n, xi_n, math.pi * xf, nu / _NU_SAFETY,
                                   _NU_SAFETY, min_sine)
    raise SearchExhausted(f"no admissible gap for q = {q} within n <= {n_max}")
