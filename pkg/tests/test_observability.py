"""Mode maps, closed forms, and certification verdicts."""

import math

import mpmath
import numpy as np
import pytest
from mpmath import mp

from waveobs.diophantine import badly_approx_floor, nearest_int_distance
from waveobs.exact import ExactReal
from waveobs.observability import (CERTIFIED_ALL_K, CERTIFIED_UP_TO_SCAN,
                                   INCONCLUSIVE_FLOAT, REFUTED,
                                   ObservationGap, SingularModeError,
                                   SobolevOrderPair, certify_beam,
                                   certify_loaded, certify_plate,
                                   certify_string, closed_form_inverse_norm,
                                   exact_resonant_modes, loaded_q_threshold,
                                   mode_map, mode_map_det,
                                   mode_map_inverse_norm, multi_time_floor,
                                   perturbation_gap, plate_thetas)
from waveobs.spectral import WaveSystem

GOLDEN = ExactReal.quadratic(-1, 1, 5, 2)
SQRT2M1 = ExactReal.quadratic(-1, 1, 2, 1)
STRING = WaveSystem.string()


def test_order_pair_validation():
    p = SobolevOrderPair(1.0, 0.0)
    assert p.gap == 1.0
    with pytest.raises(ValueError):
        SobolevOrderPair(0.0, 1.0)


def test_gap_construction():
    gap = ObservationGap.from_xi(GOLDEN)
    assert gap.delta == pytest.approx(math.pi * float(GOLDEN))
    gap2 = ObservationGap.from_times(2.0, 0.5)
    assert gap2.delta == 1.5
    assert gap2.xi.is_float


def test_mode_map_rows():
    m = mode_map(1, (0.0, -math.pi / 2), ("position", "position"), STRING)
    assert np.allclose(m.matrix[0], [1, 1])
    assert np.allclose(m.matrix[1], [-1j, 1j])
    assert mode_map_det(m) == pytest.approx(2j)
    v = mode_map(1, (0.0, 1.0), ("velocity", "position"), STRING)
    assert np.allclose(v.matrix[0], [1j, -1j])


@pytest.mark.parametrize("kinds,expected", [
    (("position", "position"), lambda w, d: 2j * math.sin(w * d)),
    (("position", "velocity"), lambda w, d: -2j * w * math.cos(w * d)),
    (("velocity", "position"), lambda w, d: 2j * w * math.cos(w * d)),
    (("velocity", "velocity"), lambda w, d: 2j * w * w * math.sin(w * d)),
])
def test_det_closed_forms_match_numeric(kinds, expected):
    rng = np.random.default_rng(0)
    for _ in range(40):
        k = int(rng.integers(1, 30))
        t0, t1 = rng.uniform(-3, 3, 2)
        m = mode_map(k, (t0, t1), kinds, STRING)
        closed = mode_map_det(m)
        numeric = np.linalg.det(m.matrix)
        assert closed == pytest.approx(expected(k, t0 - t1), abs=1e-10)
        assert numeric == pytest.approx(closed, abs=1e-9 * max(1, k * k))


def test_det_examples():
    m = mode_map(3, (math.pi / 3, 0.0), ("position", "position"), STRING)
    assert abs(mode_map_det(m)) < 1e-12          # sin(pi) resonance
    mixed = mode_map(1, (0.0, 0.0), ("position", "velocity"), STRING)
    assert mode_map_det(mixed) == pytest.approx(-2j)


def test_inverse_norm_closed_form_values():
    assert closed_form_inverse_norm(1.0, math.pi / 2) == pytest.approx(1 / math.sqrt(2))
    assert closed_form_inverse_norm(1.0, math.pi / 4) == pytest.approx(1.3065629648763766)
    assert closed_form_inverse_norm(1.0, math.pi) == math.inf


def test_inverse_norm_matches_svd():
    rng = np.random.default_rng(1)
    for _ in range(500):
        k = int(rng.integers(1, 200))
        delta = float(rng.uniform(-4, 4))
        if abs(math.sin(k * delta)) < 1e-6:
            continue
        m = mode_map(k, (delta, 0.0), ("position", "position"), STRING)
        closed = closed_form_inverse_norm(k, delta)
        gram = mode_map_inverse_norm(m)
        svd = 1.0 / np.linalg.svd(m.matrix, compute_uv=False)[-1]
        assert abs(gram - svd) <= 1e-12 * svd
        assert abs(closed - svd) <= 1e-12 * svd


def test_inverse_norm_raises_on_singular():
    m = mode_map(2, (0.5, 0.5), ("position", "position"), STRING)
    with pytest.raises(SingularModeError) as err:
        mode_map_inverse_norm(m)
    assert err.value.index == 2


def test_inverse_compose_is_identity_and_mode_bound_holds():
    rng = np.random.default_rng(2)
    for _ in range(60):
        k = int(rng.integers(1, 40))
        delta = float(rng.uniform(0.1, 3.0))
        if abs(math.sin(k * delta)) < 1e-3:
            continue
        m = mode_map(k, (delta, 0.0), ("position", "position"), STRING)
        inv = np.linalg.inv(m.matrix)
        assert np.allclose(inv @ m.matrix, np.eye(2), atol=1e-12)
        vec = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        image = m.matrix @ vec
        bound = mode_map_inverse_norm(m) ** 2 * np.sum(np.abs(image) ** 2)
        assert np.sum(np.abs(vec) ** 2) <= bound * (1 + 1e-12)


def test_sine_distance_sandwich():
    rng = np.random.default_rng(3)
    for _ in range(300):
        k = int(rng.integers(1, 500))
        x = float(rng.uniform(-10, 10))
        dist = float(nearest_int_distance(ExactReal.from_float(k * x / math.pi)).to_mpf())
        s = abs(math.sin(k * x))
        assert 2 * dist - 1e-9 <= s <= math.pi * dist + 1e-9


def test_certify_string_golden_all_k():
    cert = certify_string(ObservationGap.from_xi(GOLDEN), 1.0, 10**4)
    assert cert.verdict == CERTIFIED_ALL_K
    assert cert.exact_scan
    assert cert.largest_partial_quotient == 1
    assert cert.theoretical_floor_fraction == "1/3"
    assert cert.observed_floor > 1 / 3


def test_certify_string_rational_refuted():
    cert = certify_string(ObservationGap.from_xi(ExactReal.rational(1, 3)), 1.0, 100)
    assert cert.verdict == REFUTED
    assert cert.observed_argmin == 3
    assert cert.details["exact_zero_at"] == 3
    far = certify_string(ObservationGap.from_xi(ExactReal.rational(1, 1000)), 1.0, 10)
    assert far.verdict == REFUTED          # refuted beyond the scan bound
    assert far.details["exact_zero_at"] == 1000
    assert far.observed_floor > 0


def test_certify_string_float_scan_only():
    cert = certify_string(
        ObservationGap.from_xi(ExactReal.from_decimal("0.718281828459045")), 1.0, 10**3)
    assert cert.verdict == CERTIFIED_UP_TO_SCAN
    assert cert.theoretical_floor is None
    fishy = certify_string(ObservationGap.from_xi(ExactReal.from_float(0.5)), 1.0, 10)
    assert fishy.verdict == INCONCLUSIVE_FLOAT


def test_certify_string_small_exponent_never_all_k():
    cert = certify_string(ObservationGap.from_xi(GOLDEN), 0.5, 10**3)
    assert cert.verdict == CERTIFIED_UP_TO_SCAN
    assert any("no all-k floor" in n for n in cert.notes)


@pytest.mark.parametrize("shift", [-2, -1, 1, 3])
@pytest.mark.parametrize("xi", [GOLDEN, SQRT2M1, ExactReal.rational(1, 3)])
def test_certify_string_verdict_invariance(xi, shift):
    base = certify_string(ObservationGap.from_xi(xi), 1.0, 500).verdict
    shifted = certify_string(ObservationGap.from_xi(xi + shift), 1.0, 500).verdict
    negated = certify_string(ObservationGap.from_xi(-xi), 1.0, 500).verdict
    assert shifted == base
    assert negated == base


def test_certify_beam():
    cert = certify_beam(ObservationGap.from_xi(GOLDEN), 2.0, 10**3)
    assert cert.verdict == CERTIFIED_ALL_K
    assert cert.observed_floor >= 1 / 3
    fifth = certify_beam(ObservationGap.from_xi(ExactReal.rational(1, 5)), 2.0, 100)
    assert fifth.verdict == REFUTED
    assert fifth.observed_argmin == 5
    frac_alpha = certify_beam(ObservationGap.from_xi(GOLDEN), 1.5, 100)
    assert frac_alpha.verdict == CERTIFIED_UP_TO_SCAN


def test_certify_plate_reduced():
    # sides with b^2 = 2 a^2, measured in units of pi
    th1, th2 = plate_thetas(GOLDEN, ExactReal.rational(1), ExactReal.quadratic(0, 1, 2, 1))
    assert th1 == GOLDEN and th2 == GOLDEN / 2
    cert = certify_plate(th1, th2, 1.0, (20, 20))
    assert cert.details["reduction"]["N"] == 2
    assert cert.verdict == CERTIFIED_ALL_K
    assert cert.observed_floor > 0
    assert cert.theoretical_floor_fraction == "1/6"
    # direct evaluation of the reduced form at the reported argmin
    m, n = cert.observed_argmin
    direct = nearest_int_distance(th2 * (2 * m * m + n * n)) * (m * m + n * n)
    assert cert.observed_floor == pytest.approx(float(direct.to_mpf()))


def test_certify_plate_swapped_orientation():
    cert = certify_plate(GOLDEN, GOLDEN * 3, 1.0, (10, 10))
    assert cert.details["reduction"]["N"] == 3
    assert cert.details["reduction"]["scanned_form"] == "m^2 + N*n^2"


def test_certify_plate_general_cuberoot():
    with mp.workprec(128):
        th1 = ExactReal.from_mpf(mpmath.cbrt(2))
        th2 = ExactReal.from_mpf(mpmath.cbrt(4))
        cert = certify_plate(th1, th2, 2.0, (50, 50))
    assert cert.verdict == CERTIFIED_UP_TO_SCAN
    assert cert.observed_floor > 0
    assert "reduction" not in cert.details


def test_certify_plate_rational_refuted():
    half = ExactReal.rational(1, 2)
    cert = certify_plate(half, half, 1.0, (5, 5))
    assert cert.verdict == REFUTED
    assert cert.observed_argmin == (1, 1)


def test_loaded_threshold_values():
    delta = math.pi * float(GOLDEN)
    thr = loaded_q_threshold(2 / 3, delta, K=1)
    assert thr.q_max == pytest.approx(0.6867, abs=5e-4)
    assert thr.refined_q_max == pytest.approx(thr.q_max, rel=1e-12)
    assert loaded_q_threshold(1.0, 2.0).q_max == pytest.approx(1.0)
    with pytest.raises(ValueError):
        loaded_q_threshold(0.0, 1.0)


def test_perturbation_gap():
    bound, measured = perturbation_gap(10, 1.0, 1.0)
    assert bound == pytest.approx(0.05)
    assert measured <= bound + 1e-12
    assert perturbation_gap(3, 0.0, 1.0) == (0.0, 0.0)
    b2, m2 = perturbation_gap(1, 5.0, 0.5)
    assert b2 == pytest.approx(1.25)
    assert m2 <= b2 + 1e-12


def test_certify_loaded_golden_chain():
    gap = ObservationGap.from_xi(GOLDEN)
    cert = certify_loaded(gap, 0.1, 10**3)
    assert cert.verdict == CERTIFIED_ALL_K
    pert = cert.details["perturbation_route"]
    assert pert["base_floor_sine"] == pytest.approx(2 / 3)
    assert pert["q_max"] == pytest.approx(0.6867, abs=5e-4)
    assert cert.theoretical_floor == pytest.approx(2 / 3 - gap.delta * 0.1 / 2)
    assert cert.observed_floor >= cert.theoretical_floor - 1e-9


def test_certify_loaded_large_q_falls_back_to_scan():
    cert = certify_loaded(ObservationGap.from_xi(GOLDEN), 1.0, 10**3)
    assert cert.verdict == CERTIFIED_UP_TO_SCAN
    assert not cert.details["perturbation_route"]["applies"]


def test_certify_loaded_rational_gap_exact_check():
    gap = ObservationGap.from_xi(ExactReal.rational(1, 2))
    cert = certify_loaded(gap, ExactReal.rational(5), 100)
    sh = cert.details["rational_gap_route"]
    assert sh["integer_sqrt_modes"] == [[2, 3, 1]]
    assert sh["nonvanishing"] and sh["checked"] == "all-k-exact"
    assert cert.verdict == CERTIFIED_UP_TO_SCAN
    assert cert.observed_floor > 0


def test_certify_loaded_rational_gap_violation_refutes():
    # xi = 1/3 and q = 5: mode k = 2 has sqrt(k^2+q) = 3 and (1/3)*3 = 1 in Z
    gap = ObservationGap.from_xi(ExactReal.rational(1, 3))
    cert = certify_loaded(gap, ExactReal.rational(5), 100)
    assert cert.verdict == REFUTED
    assert cert.details["rational_gap_route"]["violations"] == [2]


def test_certify_loaded_irrational_q_exact_exclusion():
    gap = ObservationGap.from_xi(ExactReal.rational(1, 2))
    cert = certify_loaded(gap, ExactReal.quadratic(0, 1, 2, 1), 100)
    sh = cert.details["rational_gap_route"]
    assert sh["nonvanishing"] and sh["checked"] == "all-k-exact"


def test_certify_loaded_rejects_bad_load():
    with pytest.raises(ValueError):
        certify_loaded(ObservationGap.from_xi(GOLDEN), 0.0, 10)


def test_exact_resonant_modes():
    assert exact_resonant_modes(ExactReal.rational(1, 3), STRING, 10) == {3, 6, 9}
    assert exact_resonant_modes(GOLDEN, STRING, 10) == set()
    assert exact_resonant_modes(ExactReal.rational(1, 12), WaveSystem.beam(), 20) \
        == {6, 12, 18}
    loaded = WaveSystem.string(5.0)
    assert exact_resonant_modes(ExactReal.rational(1, 3), loaded, 10) == {2}
    assert exact_resonant_modes(ExactReal.rational(1, 2), loaded, 10) == set()


def test_multi_time_reduces_to_single_gap_floor():
    single = multi_time_floor([GOLDEN], 2000)
    plain = badly_approx_floor(GOLDEN, 1, 2000)
    assert single.c_star == plain.c_star
    assert single.argmin == plain.argmin


def test_multi_time_cuberoot_pair_regression():
    with mp.workprec(128):
        taus = [ExactReal.from_mpf(mpmath.cbrt(2)), ExactReal.from_mpf(mpmath.cbrt(4))]
        scan = multi_time_floor(taus, 2000)
    assert scan.exponent == pytest.approx(0.5)
    assert scan.c_star > 0


def test_multi_time_rejects_duplicates():
    with pytest.raises(ValueError):
        multi_time_floor([GOLDEN, GOLDEN], 100)
    with pytest.raises(ValueError):
        multi_time_floor([ExactReal.rational(0)], 100)


def test_multi_time_rational_component():
    # a rational gap caps the joint floor near its denominator unless the
    # other gap compensates; the max keeps the scan positive below it
    scan = multi_time_floor([ExactReal.rational(1, 7), GOLDEN], 100)
    assert scan.c_star > 0
