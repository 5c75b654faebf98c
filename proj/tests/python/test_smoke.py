import math

import pytest

import gram_moments as gm


def test_exact_moments_match_known_values():
    sp = gm.make_spectrum([1.0, 2.0, 3.0, 4.0, 5.0], 2)
    assert sp.n == 5 and sp.m == 2 and sp.p == 2
    eng = gm.build_engine(sp)
    assert eng.mellin(1.0) == pytest.approx(1.0, abs=1e-10)
    assert eng.positive_moment(1) == pytest.approx(15.0, rel=1e-10)
    assert eng.inverse_moment(1) == pytest.approx(0.12220005457107073,
                                                  rel=1e-12)
    assert eng.inverse_moment(2) == pytest.approx(0.030101104937082512,
                                                  rel=1e-12)


def test_continuation_approaches_inverse_moment():
    eng = gm.build_engine(gm.make_spectrum([1.0, 2.0, 3.0, 4.0, 5.0], 2))
    target = eng.inverse_moment(1)
    vals = eng.mellin_continuation_check(1, [1e-2, 1e-3, 1e-4])
    assert abs(vals[-1] - target) / target < 1e-2


def test_asymptotic_identity_spectrum():
    st = gm.solve_fixed_point([1.0] * 10, 3)
    assert st.m0 == pytest.approx(3.0 / 7.0, rel=1e-10)
    st = gm.compute_derivatives(st, 1)
    assert gm.asymptotic_inverse_moment(st, 2) == pytest.approx(
        10.0 / 343.0, rel=1e-9)


def test_mc_brackets_exact():
    sp = gm.make_spectrum([1.0, 2.0, 3.0, 4.0, 5.0], 2)
    eng = gm.build_engine(sp)
    est = gm.mc_empirical_moment(sp, -1, 20000, seed=42)
    assert abs(est.mean - eng.inverse_moment(1)) < 4 * est.std_error


def test_applications():
    sigma_z = [1.0, 2.0, 3.0, 4.0, 5.0]
    blue = gm.blue_mse(sigma_z, 2)
    assert blue > 0
    high = gm.lmmse_mse_high_snr(sigma_z, 2, 1e6, 0)
    assert high.value == pytest.approx(blue, rel=1e-12)
    low = gm.lmmse_mse_low_snr(sigma_z, 2, 1e-3, 4)
    assert 0 < low.value < 2 * 2 * 1e-3
    curve = gm.optimize_lambda(3, 10, [0.3, 0.5, 0.7])
    assert curve.lambda_star in (0.3, 0.5, 0.7)
    assert min(curve.losses) == curve.loss_star


def test_validation_errors_map_to_value_error():
    with pytest.raises(ValueError):
        gm.make_spectrum([1.0, 1.0, 2.0], 1)
    with pytest.raises(ValueError):
        gm.make_spectrum([-1.0, 2.0, 3.0], 1)


def test_scaling_property():
    sp = gm.make_spectrum([0.5, 1.5, 2.5, 4.0], 2)
    scaled = gm.scale_spectrum(sp, 2.0)
    a = gm.build_engine(sp)
    b = gm.build_engine(scaled)
    assert b.inverse_moment(2) == pytest.approx(a.inverse_moment(2) / 4.0,
                                                rel=1e-10)
    assert math.isclose(b.positive_moment(1), 2.0 * a.positive_moment(1),
                        rel_tol=1e-10)
