"""Continued fractions: canonical forms, periods, convergents, round trips."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy.ntheory.continued_fraction import continued_fraction_periodic

from waveobs.cf import (ContinuedFraction, available_quotients, cf_expand,
                        cf_value, convergents, partial_quotient_sup)
from waveobs.exact import ExactReal

GOLDEN = ExactReal.quadratic(-1, 1, 5, 2)
PHI = ExactReal.quadratic(1, 1, 5, 2)
SQRT2 = ExactReal.quadratic(0, 1, 2, 1)

QUADRATICS = [
    PHI, GOLDEN, SQRT2,
    ExactReal.quadratic(-1, 1, 2, 1),
    ExactReal.quadratic(3, 2, 7, 5),
    ExactReal.quadratic(-4, 3, 13, 6),
    ExactReal.quadratic(0, 1, 61, 1),
    ExactReal.quadratic(-7, -2, 3, 4),
]


def test_rational_expansions():
    assert cf_expand(ExactReal.rational(355, 113)).quotients == (3, 7, 16)
    assert cf_expand(ExactReal.rational(1, 3)).quotients == (0, 3)
    assert cf_expand(ExactReal.rational(7)).quotients == (7,)
    assert cf_expand(ExactReal.rational(-7, 4)).quotients == (-2, 4)


@given(st.fractions(min_value=-100, max_value=100))
def test_rational_expansion_is_canonical_and_roundtrips(x):
    cf = cf_expand(ExactReal.from_fraction(x))
    assert cf.is_finite
    if len(cf.quotients) > 1:
        assert cf.quotients[-1] >= 2
    assert all(a >= 1 for a in cf.quotients[1:])
    assert cf_value(cf).as_fraction() == x


def test_periodic_expansions():
    assert cf_expand(SQRT2).quotients == (1,)
    assert cf_expand(SQRT2).period == (2,)
    assert cf_expand(PHI).quotients == ()
    assert cf_expand(PHI).period == (1,)
    assert cf_expand(GOLDEN).quotients == (0,)
    assert cf_expand(GOLDEN).period == (1,)


@pytest.mark.parametrize("x", QUADRATICS)
def test_quadratic_roundtrip_is_exact(x):
    cf = cf_expand(x)
    assert cf.is_periodic
    assert cf_value(cf) == x


@pytest.mark.parametrize("x", QUADRATICS)
def test_quadratic_prefix_matches_sympy(x):
    # sympy writes (p + s*sqrt(d))/q; ours is (p + q*sqrt(d))/r
    sym = continued_fraction_periodic(x.p, x.r, x.d, s=x.q)
    pre, period = list(sym[:-1]), list(sym[-1])
    ours = cf_expand(x)
    reps = 20 // len(period) + 2
    want = (pre + period * reps)[:20]
    assert ours.prefix(20) == want


def test_convergents_examples():
    assert [(c.p, c.q) for c in convergents(cf_expand(ExactReal.rational(1, 3)), 2)] \
        == [(0, 1), (1, 3)]
    assert [(c.p, c.q) for c in convergents(cf_expand(ExactReal.rational(7, 5)), 3)] \
        == [(1, 1), (3, 2), (7, 5)]


def test_golden_convergents_are_fibonacci_ratios():
    fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    cs = convergents(cf_expand(PHI), 9)
    assert [(c.p, c.q) for c in cs] == list(zip(fib[1:], fib[:-1]))


@pytest.mark.parametrize("x", QUADRATICS)
def test_convergent_recurrence_gcd_and_gap(x):
    cs = convergents(cf_expand(x), 12)
    cf = cf_expand(x)
    for n in range(2, 12):
        a = cf.quotient(n)
        assert cs[n].p == a * cs[n - 1].p + cs[n - 2].p
        assert cs[n].q == a * cs[n - 1].q + cs[n - 2].q
    for c in cs:
        assert math.gcd(c.p, c.q) == 1
    for n in range(len(cs) - 1):
        err = abs(x - ExactReal.rational(cs[n].p, cs[n].q))
        gap = ExactReal.rational(1, cs[n].q * cs[n + 1].q)
        assert (err - gap).sign() < 0


@pytest.mark.parametrize("x", [GOLDEN, SQRT2, ExactReal.quadratic(3, 2, 7, 5)])
def test_best_approximation_exhaustive(x):
    # every q below the next convergent denominator approximates worse
    from waveobs.diophantine import nearest_int_distance
    cs = convergents(cf_expand(x), 6)
    for n in range(1, 5):
        qn, qn1 = cs[n].q, cs[n + 1].q
        best = nearest_int_distance(x * qn)
        for q in range(1, qn1):
            assert (nearest_int_distance(x * q) - best).sign() >= 0


def test_available_quotients():
    assert available_quotients(cf_expand(ExactReal.rational(22, 7))) == 2
    assert available_quotients(cf_expand(SQRT2)) is None
    with pytest.raises(ValueError):
        convergents(cf_expand(ExactReal.rational(22, 7)), 5)


def test_partial_quotient_sup():
    assert partial_quotient_sup(PHI) == (1, True)
    assert partial_quotient_sup(SQRT2) == (2, True)
    assert partial_quotient_sup(ExactReal.rational(22, 7)) == (7, True)
    assert partial_quotient_sup(ExactReal.rational(3)) == (0, True)
    value, certain = partial_quotient_sup(ExactReal.from_float(math.e))
    assert not certain
    assert value >= 2  # e = [2;1,2,1,1,4,...]


def test_float_expansion_trusts_only_stable_quotients():
    x = ExactReal.from_float(math.e)
    cf = cf_expand(x, depth=20)
    assert cf.truncated
    assert cf.trusted == len(cf.quotients) <= 20
    assert cf.quotients[:9] == (2, 1, 2, 1, 1, 4, 1, 1, 6)
    with pytest.raises(ValueError):
        cf_value(cf)


def test_float_expansion_near_rational_is_short():
    cf = cf_expand(ExactReal.from_float(0.5), depth=30)
    # a half-ulp perturbation changes everything after the first quotient
    assert cf.truncated
    assert len(cf.quotients) <= 2


def test_canonical_form_validation():
    with pytest.raises(ValueError):
        ContinuedFraction((1, 2, 1))          # finite must end >= 2
    with pytest.raises(ValueError):
        ContinuedFraction((1, 0, 2))          # inner quotient < 1
    with pytest.raises(ValueError):
        ContinuedFraction((1,), period=())    # empty period


@settings(max_examples=30, deadline=None)
@given(st.integers(-20, 20), st.integers(1, 12), st.sampled_from([2, 3, 5, 7, 13]),
       st.integers(1, 9))
def test_lagrange_roundtrip_random_quadratics(p, q, d, r):
    x = ExactReal.quadratic(p, q, d, r)
    if x.kind != "quadratic":
        return
    cf = cf_expand(x)
    assert cf.is_periodic
    assert cf_value(cf) == x
