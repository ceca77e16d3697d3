"""Distance floors, witnesses, and liminf estimates against independent oracles."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from waveobs.diophantine import (badly_approx_floor, dirichlet_witnesses,
                                 floor_scan_rows, linear_form_floor,
                                 nearest_int_distance, nu_liminf_estimate,
                                 theoretical_floor_from_K)
from waveobs.exact import ExactReal

GOLDEN = ExactReal.quadratic(-1, 1, 5, 2)
PHI = ExactReal.quadratic(1, 1, 5, 2)
SQRT2M1 = ExactReal.quadratic(-1, 1, 2, 1)


def brute_force_floor(x: float, alpha: float, k_max: int) -> tuple[float, int]:
    """Plain-float oracle for the scan minimum."""
    best, best_k = math.inf, None
    for k in range(1, k_max + 1):
        f = (k * x) % 1.0
        v = min(f, 1.0 - f) * k ** alpha
        if v < best:
            best, best_k = v, k
    return best, best_k


def test_distance_examples():
    assert nearest_int_distance(ExactReal.rational(1, 2)).as_fraction() == Fraction(1, 2)
    assert nearest_int_distance(ExactReal.rational(7, 3)).as_fraction() == Fraction(1, 3)
    # ||(1+sqrt(5))/2|| = 2 - (1+sqrt(5))/2 = (3-sqrt(5))/2, by exact comparison
    assert nearest_int_distance(PHI) == ExactReal.quadratic(3, -1, 5, 2)


@given(st.fractions(min_value=-50, max_value=50), st.integers(-10, 10))
def test_distance_shift_and_negation_invariance(x, m):
    xe = ExactReal.from_fraction(x)
    d = nearest_int_distance(xe)
    assert nearest_int_distance(xe + m) == d
    assert nearest_int_distance(-xe) == d
    assert 0 <= d.as_fraction() <= Fraction(1, 2)


@pytest.mark.parametrize("x", [GOLDEN, SQRT2M1, ExactReal.quadratic(5, 2, 3, 7)])
@pytest.mark.parametrize("m", [-3, 1, 4])
def test_distance_invariance_quadratic(x, m):
    d = nearest_int_distance(x)
    assert nearest_int_distance(x + m) == d
    assert nearest_int_distance(-x) == d


def test_golden_floor_scan_exact_value():
    # The true minimum sits at k = 1: ||golden|| = (3-sqrt(5))/2 ~ 0.382.
    # The scan products only approach 1/sqrt(5) ~ 0.447 along the tail
    # (see nu_liminf_estimate); the minimum itself is below that limit.
    scan = badly_approx_floor(GOLDEN, 1, 10**5)
    assert scan.exact and not scan.zero_found
    assert scan.argmin == 1
    assert scan.c_star_syntax == "quad:(3-1*sqrt(5))/2"
    assert abs(scan.c_star - (3 - math.sqrt(5)) / 2) < 1e-15
    assert scan.c_star > float(theoretical_floor_from_K(1))


def test_sqrt2_floor_scan_exact_value():
    scan = badly_approx_floor(SQRT2M1, 1, 10**5)
    assert scan.argmin == 2
    assert scan.c_star_syntax == "quad:(6-4*sqrt(2))/1"
    assert scan.c_star > float(theoretical_floor_from_K(2))


def test_rational_floor_hits_zero():
    scan = badly_approx_floor(ExactReal.rational(1, 3), 1, 100)
    assert scan.zero_found and scan.c_star == 0.0 and scan.argmin == 3


def test_floor_matches_float_oracle():
    for x, alpha in [(GOLDEN, 1.0), (SQRT2M1, 1.0), (GOLDEN, 2.0), (SQRT2M1, 0.5)]:
        scan = badly_approx_floor(x, alpha, 3000)
        ref, ref_k = brute_force_floor(float(x), alpha, 3000)
        assert scan.argmin == ref_k
        assert abs(scan.c_star - ref) < 1e-9


def test_floor_monotone_in_k_max():
    prev = math.inf
    for k_max in (10, 100, 1000, 10000):
        c = badly_approx_floor(GOLDEN, 1, k_max).c_star
        assert c <= prev + 1e-18
        prev = c


def test_float_input_never_reports_exact_zero():
    scan = badly_approx_floor(ExactReal.from_float(0.5), 1, 10)
    assert not scan.zero_found
    assert scan.approximate
    assert scan.note is not None  # distance collapsed below the trust threshold
    ok = badly_approx_floor(ExactReal.from_decimal("0.718281828459045"), 1, 10**4)
    assert not ok.zero_found and ok.note is None


def test_squared_index_scans():
    beam = badly_approx_floor(GOLDEN, 2, 1000, index_power=2)
    assert beam.exact
    assert beam.c_star >= float(theoretical_floor_from_K(1)) - 1e-15
    fifth = badly_approx_floor(ExactReal.rational(1, 5), 2, 100, index_power=2)
    assert fifth.zero_found and fifth.argmin == 5


def test_scan_rows_agree_with_scan():
    rows = list(floor_scan_rows(GOLDEN, 1, 50))
    assert len(rows) == 50
    scan = badly_approx_floor(GOLDEN, 1, 50)
    best = min(rows, key=lambda r: r[2])
    assert best[0] == scan.argmin
    assert abs(best[2] - scan.c_star) < 1e-12


def test_theoretical_floor_values():
    assert theoretical_floor_from_K(1) == Fraction(1, 3)
    assert theoretical_floor_from_K(2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        theoretical_floor_from_K(0)


def test_dirichlet_witnesses_sqrt2():
    ws = dirichlet_witnesses(SQRT2M1, 5)
    assert ws == [1, 2, 5, 12, 29]  # Pell denominators
    for k in ws:
        d = nearest_int_distance(SQRT2M1 * k)
        assert (d * k - 1).sign() < 0


def test_dirichlet_witnesses_golden_are_fibonacci():
    ws = dirichlet_witnesses(GOLDEN, 6)
    fib = {1, 2, 3, 5, 8, 13, 21}
    assert set(ws) <= fib


def test_dirichlet_witnesses_reject_rationals():
    with pytest.raises(ValueError):
        dirichlet_witnesses(ExactReal.rational(1, 2), 3)


def test_small_exponent_floor_collapses_along_witnesses():
    # with alpha < 1, witnesses push k^alpha*||k*xi|| below k^(alpha-1) -> 0
    alpha = 0.5
    ws = dirichlet_witnesses(SQRT2M1, 10)
    for k in ws:
        weighted = float(nearest_int_distance(SQRT2M1 * k).to_mpf()) * k ** alpha
        assert weighted < k ** (alpha - 1)
    assert ws[-1] ** (alpha - 1) < 0.025  # 1/sqrt(2378)


def test_nu_estimates():
    golden = nu_liminf_estimate(GOLDEN)
    assert 0.447 <= golden.value <= 0.448
    assert golden.stabilized
    sqrt2 = nu_liminf_estimate(SQRT2M1)
    assert 0.3535 <= sqrt2.value <= 0.3536
    with pytest.raises(ValueError):
        nu_liminf_estimate(ExactReal.rational(2, 7))


def test_nu_is_a_tail_bound_above_the_global_min():
    est = nu_liminf_estimate(GOLDEN, depth=40)
    scan = badly_approx_floor(GOLDEN, 1, 10**4)
    assert est.value >= scan.c_star
    assert est.value >= 0.0


def test_linear_form_zero_at_half():
    half = ExactReal.rational(1, 2)
    scan = linear_form_floor(half, half, 1, 5, 5)
    assert scan.zero_found and scan.argmin == (1, 1)


def test_linear_form_cuberoot_regression():
    with mp.workprec(128):
        x1 = ExactReal.from_mpf(mpmath.cbrt(2))
        x2 = ExactReal.from_mpf(mpmath.cbrt(4))
        scan = linear_form_floor(x1, x2, 2, 100, 100)
    assert scan.approximate and not scan.zero_found
    assert scan.argmin == (1, 10)
    assert abs(scan.c_star - 0.267742737885348) < 1e-9  # frozen regression baseline


def test_linear_form_golden_multiple_reduces():
    # x2 = 2*x1 collapses to a single-number scan over (m^2 + 2 n^2)
    scan = linear_form_floor(GOLDEN, GOLDEN * 2, 1, 20, 20)
    assert scan.exact and not scan.zero_found
    best, best_idx = None, None
    for m in range(1, 21):
        for n in range(1, 21):
            j = m * m + 2 * n * n
            v = nearest_int_distance(GOLDEN * j) * (m * m + n * n)
            if best is None or (v - best).sign() < 0:
                best, best_idx = v, (m, n)
    assert scan.argmin == best_idx
    assert abs(scan.c_star - float(best.to_mpf())) < 1e-12


def test_linear_form_box_validation():
    with pytest.raises(ValueError):
        linear_form_floor(GOLDEN, GOLDEN, 1, 0, 5)
