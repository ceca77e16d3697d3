"""Continued fractions with exact termination and exact period detection.

Expansions are canonical: a finite expansion ends with a quotient >= 2
unless it is the single-term expansion of an integer, which makes the
representation unique and equality tests meaningful.  Quadratic
irrationals are expanded with the integer surd recurrence and flagged
periodic the first time the (P, Q) state repeats, which is guaranteed
to happen; re-evaluating the periodic expansion reproduces the input
exactly.  Floats only ever contribute the quotients that survive an
exact +/- half-ulp perturbation of the input, so no garbage quotients
are emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import ExactReal, _mpf_to_fraction

__all__ = [
    "ContinuedFraction",
    "Convergent",
    "available_quotients",
    "cf_expand",
    "cf_value",
    "convergents",
    "partial_quotient_sup",
]


@dataclass(frozen=True)
class Convergent:
    """Best rational approximation p/q read off a continued fraction."""

    index: int
    p: int
    q: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class ContinuedFraction:
    """[a0; a1, a2, ...] with a finite, periodic, or truncated tail.

    ``quotients`` holds every known leading term (the preperiod when
    ``period`` is set).  ``trusted`` counts the leading quotients that a
    float input determines unambiguously; it is None for exact inputs.
    """

    quotients: tuple[int, ...]
    period: tuple[int, ...] | None = None
    truncated: bool = False
    trusted: int | None = None

    def __post_init__(self):
        if not self.quotients and not self.period:
            raise ValueError("empty continued fraction")
        for a in self.quotients[1:]:
            if a < 1:
                raise ValueError(f"partial quotient {a} < 1")
        if self.period is not None:
            if not self.period:
                raise ValueError("empty period")
            if any(a < 1 for a in self.period):
                raise ValueError("period quotients must be >= 1")
            if self.truncated:
                raise ValueError("periodic expansions are never truncated")
        elif not self.truncated:
            # canonical finite form
            if len(self.quotients) > 1 and self.quotients[-1] < 2:
                raise ValueError("finite expansion must end with a quotient >= 2")

    @property
    def is_finite(self) -> bool:
        return self.period is None and not self.truncated

    @property
    def is_periodic(self) -> bool:
        return self.period is not None

    def quotient(self, i: int) -> int:
        if i < len(self.quotients):
            return self.quotients[i]
        if self.period is not None:
            return self.period[(i - len(self.quotients)) % len(self.period)]
        raise IndexError(f"quotient {i} not available")

    def prefix(self, n: int) -> list[int]:
        return [self.quotient(i) for i in range(n)]


def available_quotients(cf: ContinuedFraction) -> int | None:
    """Number of quotients on offer; None means unbounded (periodic)."""
    return None if cf.is_periodic else len(cf.quotients)


def _euclid(value: Fraction, limit: int | None = None) -> list[int]:
    num, den = value.numerator, value.denominator
    out: list[int] = []
    while den:
        a, rem = divmod(num, den)
        out.append(a)
        num, den = den, rem
        if limit is not None and len(out) >= limit:
            break
    return out


def _expand_quadratic(x: ExactReal) -> ContinuedFraction:
    # represent x = (P + sqrt(D)) / Q with Q | D - P^2, then run the surd recurrence
    if x.q > 0:
        P, Q, D = x.p, x.r, x.q * x.q * x.d
    else:
        P, Q, D = -x.p, -x.r, x.q * x.q * x.d
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = math.isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    cap = max(4096, 16 * s + 64)
    while len(quotients) <= cap:
        state = (P, Q)
        if state in seen:
            cut = seen[state]
            return ContinuedFraction(tuple(quotients[:cut]), tuple(quotients[cut:]))
        seen[state] = len(quotients)
        if Q > 0:
            a = (P + s) // Q
        else:
            a = (-P - s - 1) // (-Q)
        quotients.append(a)
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError(f"period not found within {cap} steps (radicand {D})")


def _expand_float(x: ExactReal, depth: int) -> ContinuedFraction:
    value = _mpf_to_fraction(x.x)
    if value.denominator == 1:
        # integer part only; a half-ulp perturbation flips everything after it
        return ContinuedFraction((value.numerator,), truncated=True, trusted=1)
    # trust the common prefix of the expansions of value +/- half an ulp
    eps = abs(value) * Fraction(1, 2 ** x.prec) if value else Fraction(1, 2 ** x.prec)
    main = _euclid(value, depth + 1)
    lo = _euclid(value - eps / 2, depth + 1)
    hi = _euclid(value + eps / 2, depth + 1)
    keep = 0
    for a, b, c in zip(main, lo, hi):
        if a == b == c:
            keep += 1
        else:
            break
    keep = min(keep, depth)
    if keep == 0:
        return ContinuedFraction((main[0],), truncated=True, trusted=0)
    return ContinuedFraction(tuple(main[:keep]), truncated=True, trusted=keep)


def cf_expand(x: ExactReal, depth: int = 64) -> ContinuedFraction:
    """Canonical continued fraction of ``x``.

    Rationals terminate exactly; quadratic irrationals come back with
    their exact period; float inputs are truncated at ``depth`` or at the
    last quotient their precision can vouch for, whichever is shorter.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if x.is_rational:
        return ContinuedFraction(tuple(_euclid(x.as_fraction())))
    if x.is_quadratic:
        return _expand_quadratic(x)
    return _expand_float(x, depth)


def convergents(cf: ContinuedFraction, count: int) -> list[Convergent]:
    """First ``count`` convergents p_n/q_n, by the standard recurrence."""
    avail = available_quotients(cf)
    if avail is not None and count > avail:
        raise ValueError(f"only {avail} quotients available, {count} requested")
    h_prev, h_prev2 = 1, 0
    k_prev, k_prev2 = 0, 1
    out: list[Convergent] = []
    for n in range(count):
        a = cf.quotient(n)
        h = a * h_prev + h_prev2
        k = a * k_prev + k_prev2
        out.append(Convergent(n, h, k))
        h_prev2, h_prev = h_prev, h
        k_prev2, k_prev = k_prev, k
    return out


def _fold(quotients: Iterable[int]) -> tuple[int, int, int, int]:
    """Matrix product of [[a,1],[1,0]] blocks: ((h, h'), (k, k'))."""
    h, h2 = 1, 0
    k, k2 = 0, 1
    for a in quotients:
        h, h2 = a * h + h2, h
        k, k2 = a * k + k2, k
    return h, h2, k, k2


def cf_value(cf: ContinuedFraction) -> ExactReal:
    """Exact value of a finite or periodic expansion (round-trips cf_expand)."""
    if cf.truncated:
        raise ValueError("a truncated expansion does not determine a value")
    if cf.is_finite:
        value = Fraction(cf.quotients[-1])
        for a in reversed(cf.quotients[:-1]):
            value = a + 1 / value
        return ExactReal.from_fraction(value)
    # purely periodic tail y satisfies y = (A y + B) / (C y + D)
    A, B, C, D = _fold(cf.period)
    y = ExactReal.quadratic(A - D, 1, (A - D) * (A - D) + 4 * B * C, 2 * C)
    if not cf.quotients:
        return y
    h, h2, k, k2 = _fold(cf.quotients)
    return (h * y + h2) / (k * y + k2)


def partial_quotient_sup(x: ExactReal, depth: int = 64) -> tuple[int, bool]:
    """Largest partial quotient sup a_k over k >= 1, with a certainty flag.

    Finite and periodic expansions give the exact supremum (certain);
    float inputs give the maximum over the trusted prefix (uncertain).
    An integer has no k >= 1 quotients and reports (0, True).
    """
    cf = cf_expand(x, depth)
    if cf.is_periodic:
        tail = list(cf.quotients[1:]) + list(cf.period)
        return max(tail), True
    pool = cf.quotients[1:]
    if cf.is_finite:
        return (max(pool), True) if pool else (0, True)
    return (max(pool), False) if pool else (0, False)
