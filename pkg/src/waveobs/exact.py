"""Exact real arithmetic for the certification scans.

One value type, three representations:

* ``rational``  -- an arbitrary-precision ``Fraction``,
* ``quadratic`` -- ``(p + q*sqrt(d)) / r`` with integers p, q, r and
  squarefree d > 1 (so the value is a quadratic irrational),
* ``float``     -- an mpmath float tagged with the binary precision it
  was created at.

Rational and quadratic values support exact comparison, exact floor and
exact field arithmetic; arithmetic is closed within a single sqrt(d).
Operations that leave the field (sums of distinct radicals, anything
touching a float) fall back to extended-precision floats of at least
``MIN_FLOAT_PRECISION`` bits and the result is flagged ``approximate``.

Text syntax, used by the CLI and file formats:

    rat:p/q      rat:-3/7      rat:5
    quad:(p+q*sqrt(d))/r       quad:(-1+1*sqrt(5))/2
    float:<decimal literal>

Parsing is exact for the first two forms.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp

__all__ = [
    "ExactReal",
    "ExactRealParseError",
    "MIN_FLOAT_PRECISION",
    "parse_exact",
    "work_prec",
]

# Floor for the working precision of every float fallback (bits of significand).
MIN_FLOAT_PRECISION = 128

_Coercible = Union["ExactReal", int, Fraction]


class ExactRealParseError(ValueError):
    """An exact-number literal could not be parsed."""


def work_prec() -> int:
    """Binary precision used for float fallbacks: ambient, but never below the floor."""
    return max(mp.prec, MIN_FLOAT_PRECISION)


def _squarefree_split(d: int) -> tuple[int, int]:
    """Return (f, d0) with d = f**2 * d0 and d0 squarefree."""
    f = 1
    p = 2
    while p * p <= d:
        p2 = p * p
        while d % p2 == 0:
            d //= p2
            f *= p
        p += 1 if p == 2 else 2
    return f, d


def _sqrt_floor(q: int, d: int) -> int:
    """Exact floor of q*sqrt(d) for d squarefree > 1 and q != 0."""
    if q >= 0:
        return math.isqrt(q * q * d)
    return -math.isqrt(q * q * d) - 1


def _mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    sign, man, exp, _ = x._mpf_
    if man == 0 and exp == 0:
        return Fraction(0)
    v = Fraction(man, 1) * (Fraction(2) ** exp)
    return -v if sign else v


class ExactReal:
    """A real number that is exactly rational, exactly quadratic, or a tagged float."""

    __slots__ = ("kind", "frac", "p", "q", "d", "r", "x", "prec")

    def __init__(self):
        raise TypeError("use the ExactReal.rational / quadratic / from_* factories")

    # ------------------------------------------------------------------
    # construction

    @staticmethod
    def _new() -> "ExactReal":
        return object.__new__(ExactReal)

    @staticmethod
    def from_fraction(value: Fraction | int) -> "ExactReal":
        self = ExactReal._new()
        self.kind = "rational"
        self.frac = Fraction(value)
        self.p = self.q = self.d = self.r = 0
        self.x = None
        self.prec = None
        return self

    @staticmethod
    def rational(num: int, den: int = 1) -> "ExactReal":
        return ExactReal.from_fraction(Fraction(num, den))

    @staticmethod
    def quadratic(p: int, q: int, d: int, r: int = 1) -> "ExactReal":
        """(p + q*sqrt(d)) / r, demoted to rational when the radical vanishes."""
        if r == 0:
            raise ZeroDivisionError("quadratic denominator r must be nonzero")
        if d <= 0:
            raise ValueError("radicand d must be positive")
        f, d0 = _squarefree_split(d)
        q *= f
        if d0 == 1:
            return ExactReal.rational(p + q, r)
        if q == 0:
            return ExactReal.rational(p, r)
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(abs(p), abs(q)), r)
        self = ExactReal._new()
        self.kind = "quadratic"
        self.frac = None
        self.p, self.q, self.d, self.r = p // g, q // g, d0, r // g
        self.x = None
        self.prec = None
        return self

    @staticmethod
    def from_mpf(value) -> "ExactReal":
        self = ExactReal._new()
        self.kind = "float"
        self.frac = None
        self.p = self.q = self.d = self.r = 0
        with mp.workprec(work_prec()):
            self.x = mpmath.mpf(value)
        self.prec = work_prec()
        return self

    @staticmethod
    def from_float(value: float) -> "ExactReal":
        return ExactReal.from_mpf(value)

    @staticmethod
    def from_decimal(text: str) -> "ExactReal":
        with mp.workprec(work_prec()):
            try:
                return ExactReal.from_mpf(mpmath.mpf(text))
            except ValueError as exc:
                raise ExactRealParseError(f"bad float literal {text!r}") from exc

    # ------------------------------------------------------------------
    # predicates

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def is_quadratic(self) -> bool:
        return self.kind == "quadratic"

    @property
    def is_float(self) -> bool:
        return self.kind == "float"

    @property
    def approximate(self) -> bool:
        """True when the value carries rounding error (float representation)."""
        return self.kind == "float"

    def is_integer(self) -> bool:
        return self.kind == "rational" and self.frac.denominator == 1

    def as_fraction(self) -> Fraction:
        if self.kind != "rational":
            raise ValueError(f"{self!r} is not rational")
        return self.frac

    # ------------------------------------------------------------------
    # numeric conversions

    def to_mpf(self) -> mpmath.mpf:
        """Value as an mpmath float at the current working precision."""
        with mp.workprec(work_prec()):
            if self.kind == "rational":
                return mpmath.mpf(self.frac.numerator) / self.frac.denominator
            if self.kind == "quadratic":
                if self.p * self.q < 0:
                    # p and q*sqrt(d) nearly cancel for tiny values; route through
                    # the conjugate so the subtraction happens in exact integers
                    num = self.p * self.p - self.q * self.q * self.d
                    return num / ((self.p - self.q * mpmath.sqrt(self.d)) * self.r)
                return (self.p + self.q * mpmath.sqrt(self.d)) / self.r
            return +self.x

    def __float__(self) -> float:
        return float(self.to_mpf())

    # ------------------------------------------------------------------
    # arithmetic

    @staticmethod
    def _coerce(value: _Coercible) -> "ExactReal":
        if isinstance(value, ExactReal):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactReal.from_fraction(value)
        return NotImplemented

    def _float_binop(self, other: "ExactReal", op) -> "ExactReal":
        with mp.workprec(work_prec()):
            return ExactReal.from_mpf(op(self.to_mpf(), other.to_mpf()))

    def __add__(self, other: _Coercible) -> "ExactReal":
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.kind == "float" or b.kind == "float":
            return a._float_binop(b, lambda u, v: u + v)
        if a.kind == "rational" and b.kind == "rational":
            return ExactReal.from_fraction(a.frac + b.frac)
        if a.kind == "rational":
            a, b = b, a
        # a quadratic, b rational or quadratic
        if b.kind == "rational":
            bn, bd = b.frac.numerator, b.frac.denominator
            return ExactReal.quadratic(a.p * bd + bn * a.r, a.q * bd, a.d, a.r * bd)
        if a.d == b.d:
            return ExactReal.quadratic(
                a.p * b.r + b.p * a.r, a.q * b.r + b.q * a.r, a.d, a.r * b.r
            )
        return a._float_binop(b, lambda u, v: u + v)  # distinct radicals

    __radd__ = __add__

    def __neg__(self) -> "ExactReal":
        if self.kind == "rational":
            return ExactReal.from_fraction(-self.frac)
        if self.kind == "quadratic":
            return ExactReal.quadratic(-self.p, -self.q, self.d, self.r)
        return ExactReal.from_mpf(-self.x)

    def __sub__(self, other: _Coercible) -> "ExactReal":
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: _Coercible) -> "ExactReal":
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: _Coercible) -> "ExactReal":
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if a.kind == "float" or b.kind == "float":
            return a._float_binop(b, lambda u, v: u * v)
        if a.kind == "rational" and b.kind == "rational":
            return ExactReal.from_fraction(a.frac * b.frac)
        if a.kind == "rational":
            a, b = b, a
        if b.kind == "rational":
            bn, bd = b.frac.numerator, b.frac.denominator
            return ExactReal.quadratic(a.p * bn, a.q * bn, a.d, a.r * bd)
        if a.d == b.d:
            return ExactReal.quadratic(
                a.p * b.p + a.q * b.q * a.d, a.p * b.q + a.q * b.p, a.d, a.r * b.r
            )
        return a._float_binop(b, lambda u, v: u * v)

    __rmul__ = __mul__

    def _invert(self) -> "ExactReal":
        if self.kind == "rational":
            if self.frac == 0:
                raise ZeroDivisionError("division by exact zero")
            return ExactReal.from_fraction(1 / self.frac)
        if self.kind == "quadratic":
            # r / (p + q*sqrt(d)) = r*(p - q*sqrt(d)) / (p^2 - q^2 d), never zero
            norm = self.p * self.p - self.q * self.q * self.d
            return ExactReal.quadratic(self.r * self.p, -self.r * self.q, self.d, norm)
        return ExactReal.from_mpf(1 / self.x)

    def __truediv__(self, other: _Coercible) -> "ExactReal":
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other._invert()

    def __rtruediv__(self, other: _Coercible) -> "ExactReal":
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self._invert()

    def __abs__(self) -> "ExactReal":
        return -self if self.sign() < 0 else self

    # ------------------------------------------------------------------
    # order

    def sign(self) -> int:
        """-1, 0 or +1; exact for rational and quadratic values."""
        if self.kind == "rational":
            n = self.frac.numerator
            return (n > 0) - (n < 0)
        if self.kind == "quadratic":
            p, q, d = self.p, self.q, self.d  # r > 0 canonical
            if p == 0:
                return 1 if q > 0 else -1
            if p > 0 and q > 0:
                return 1
            if p < 0 and q < 0:
                return -1
            lhs, rhs = p * p, q * q * d  # p^2 == q^2 d impossible (d squarefree > 1)
            if p > 0:  # q < 0
                return 1 if lhs > rhs else -1
            return 1 if rhs > lhs else -1  # p < 0 < q
        return int(mpmath.sign(self.x))

    def _cmp(self, other: _Coercible) -> int:
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign()

    def __eq__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c == 0

    def __lt__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    __hash__ = None  # mutable-free but not meant as a dict key

    # ------------------------------------------------------------------
    # integer parts

    def floor(self) -> int:
        if self.kind == "rational":
            return self.frac.numerator // self.frac.denominator
        if self.kind == "quadratic":
            return (self.p + _sqrt_floor(self.q, self.d)) // self.r
        return int(mpmath.floor(self.x))

    def frac_part(self) -> "ExactReal":
        """self - floor(self), in [0, 1)."""
        return self - self.floor()

    # ------------------------------------------------------------------
    # text forms

    def syntax(self) -> str:
        """Literal accepted back by :func:`parse_exact` (exact for non-floats)."""
        if self.kind == "rational":
            return f"rat:{self.frac.numerator}/{self.frac.denominator}"
        if self.kind == "quadratic":
            op = "+" if self.q >= 0 else "-"
            return f"quad:({self.p}{op}{abs(self.q)}*sqrt({self.d}))/{self.r}"
        digits = max(17, int(self.prec / 3.32) + 3)
        return "float:" + mpmath.nstr(self.x, digits)

    def __repr__(self) -> str:
        return f"ExactReal({self.syntax()})"


_RAT_RE = re.compile(r"^rat:(-?\d+)(?:/(-?\d+))?$")
_QUAD_RE = re.compile(r"^quad:\((-?\d+)\s*([+-])\s*(\d+)\*sqrt\((\d+)\)\)/(-?\d+)$")
_FLOAT_RE = re.compile(r"^float:(.+)$")


def parse_exact(text: str) -> ExactReal:
    """Parse the ``rat:`` / ``quad:`` / ``float:`` literal syntax."""
    text = text.strip()
    if m := _RAT_RE.match(text):
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ExactRealParseError(f"zero denominator in {text!r}")
        return ExactReal.rational(num, den)
    if m := _QUAD_RE.match(text):
        p = int(m.group(1))
        q = int(m.group(3)) * (1 if m.group(2) == "+" else -1)
        d = int(m.group(4))
        r = int(m.group(5))
        if r == 0:
            raise ExactRealParseError(f"zero denominator in {text!r}")
        if d == 0:
            raise ExactRealParseError(f"zero radicand in {text!r}")
        return ExactReal.quadratic(p, q, d, r)
    if m := _FLOAT_RE.match(text):
        return ExactReal.from_decimal(m.group(1))
    raise ExactRealParseError(f"unrecognized exact-number literal {text!r}")
