import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _oracles import least_squares_line
from ckdv.coeffs import SystemCoefficients, make_majda_biello
from ckdv.dynamics import StepperConfig
from ckdv.experiments import (
    AnalysisParams,
    acl_defect_scan,
    commutator_inequality_scan,
    commutator_scaling_fit,
    geometric_times,
    log_log_fit,
    map_cells,
    picard_contraction_study,
    predicted_lower_bound_curve,
    radius_decay_experiment,
    weight_inequality_ratio,
)
from ckdv.profiles import initial_profile
from ckdv.spectral import GridSpec

LINEAR = SystemCoefficients(1.0, 2.0, 0, 0, 0, 0)


def test_analysis_params_validation():
    assert AnalysisParams().in_commutator_range
    for bad in ({"rho": 1.5}, {"b": 0.5}, {"b": 0.8, "b_prime": 0.75}, {"epsilon": 0}):
        with pytest.raises(ValueError):
            AnalysisParams(**bad)


def test_map_cells_keeps_order():
    seen = set()

    def f(x):
        seen.add(threading.get_ident())
        return x * x
    assert map_cells(f, range(8), workers=3) == [x * x for x in range(8)]
    assert map_cells(f, [], workers=3) == []


def test_log_log_fit_recovers_power():
    x = np.geomspace(1e-3, 1e-1, 9)
    p, se, c = log_log_fit(x, 2.5 * x ** 1.3)
    assert p == pytest.approx(1.3) and c == pytest.approx(2.5) and se < 1e-10


def test_log_log_fit_matches_closed_form():
    rng = np.random.default_rng(5)
    x = np.geomspace(1, 100, 12)
    y = x ** -0.7 * np.exp(0.1 * rng.normal(size=12))
    slope, icpt = least_squares_line(np.log(x), np.log(y))
    p, _, c = log_log_fit(x, y)
    assert p == pytest.approx(slope, rel=1e-12) and c == pytest.approx(math.exp(icpt), rel=1e-12)


def test_weight_ratio_direct_formula():
    x1, x2, s, r = 3.0, -1.5, 0.2, 0.5
    lhs = math.exp(s * 3) * math.exp(s * 1.5) - math.exp(s * 1.5)
    rhs = 4 ** r * s ** r * (4 * 2.5 / 2.5) ** r * math.exp(s * 3) * math.exp(s * 1.5)
    assert weight_inequality_ratio(x1, x2, s, r) == pytest.approx(lhs / rhs, rel=1e-13)


def test_weight_ratio_same_sign_vanishes():
    assert weight_inequality_ratio(2.0, 5.0, 0.3, 0.5) == 0


@settings(max_examples=200, deadline=None)
@given(st.floats(-200, 200), st.floats(-200, 200), st.floats(1e-4, 5), st.floats(0, 1))
def test_weight_ratio_bounded(x1, x2, s, r):
    assert weight_inequality_ratio(x1, x2, s, r) <= 1 + 1e-12


def test_inequality_scan_small_grid():
    rep = commutator_inequality_scan(np.linspace(-5, 5, 21), [0.1, 1.0], [0.5])
    assert rep.n_tuples == 21 * 21 * 2 and rep.passed and 0 < rep.max_ratio <= 1


def test_scaling_fit_exponent(small_state, mb1, hs):
    sig = np.geomspace(1e-3, 1e-1, 7)
    for c in (mb1, hs):
        fits = commutator_scaling_fit(small_state, c, sig)
        for fit in fits.values():
            assert not fit.skipped and 0.9 < fit.exponent < 1.2


def test_scaling_fit_linear_skips(small_state):
    fits = commutator_scaling_fit(small_state, LINEAR, [1e-3, 1e-1])
    assert fits["f1"].skipped and fits["f2"].skipped and fits["f1"].exponent is None


def test_scaling_fit_requires_positive_sigma(small_state, mb1):
    with pytest.raises(ValueError):
        commutator_scaling_fit(small_state, mb1, [0.0, 0.1])


def test_acl_scan_small_data(small_state, mb1):
    sig = [0.0] + list(np.geomspace(1e-3, 1e-1, 5))
    res = acl_defect_scan(small_state, mb1, sig)
    assert abs(res.defects[0]) <= 1e-8 * res.delta
    assert not res.flagged and res.n_clipped == 0
    assert res.exponent >= 0.7 and res.C_b > 0 and res.eta == 1.0


def test_acl_scan_needs_weight(small_state):
    with pytest.raises(ValueError):
        acl_defect_scan(small_state, SystemCoefficients(1, 1, 0, 1, 1, 2), [0.1])


def test_predicted_curve_shape():
    T = np.array([1e-12, 1.0, 10.0, 100.0])
    curve = predicted_lower_bound_curve(1.0, 0.5, 0.5, C_b=1.0, times=T)
    c = (0.1 * 3.0 ** -4 / 2 ** 2.5) ** 2
    assert curve[0] == 0.5
    np.testing.assert_allclose(curve[1:], c * T[1:] ** -2, rtol=1e-12)
    assert np.all(np.diff(curve) <= 0)


def test_predicted_curve_explicit_delta():
    curve = predicted_lower_bound_curve(2.0, 1.0, 0.5, C_b=2.0, times=[4.0], delta=0.3)
    assert curve[0] == pytest.approx((0.3 / (2.0 * 2 ** 2.5 * 2.0)) ** 2 / 16)


@pytest.mark.parametrize("kw", [{"rho": 0.75}, {"rho": 0.0}, {"norm0": 0.0}])
def test_predicted_curve_validation(kw):
    args = {"norm0": 1.0, "sigma0": 0.5, "rho": 0.5} | kw
    with pytest.raises(ValueError):
        predicted_lower_bound_curve(**args)


def test_picard_study(small_state, mb1):
    study = picard_contraction_study(small_state, mb1, [0.005, 0.01, 0.02], n_iters=6, workers=2)
    assert [c.delta for c in study.cells] == [0.005, 0.01, 0.02]
    assert study.delta_star is None and all(c.max_ratio < 0.5 for c in study.cells)
    with pytest.raises(ValueError):
        picard_contraction_study(small_state, mb1, [0.02, 0.01])


def test_geometric_times():
    t = geometric_times(0.5, 8.0, 5)
    np.testing.assert_allclose(t, [0.5, 1, 2, 4, 8])


def test_radius_decay_linear_is_flat():
    g = GridSpec(256, 16 * np.pi)
    st = initial_profile("poisson-kernel", {"sigma0": 0.3, "amplitude_u": 0.05, "amplitude_v": 0.05}, g)
    res = radius_decay_experiment(st, LINEAR, StepperConfig(dt=0.05), 8.0)
    assert len(res.per_time_radii) == 17
    np.testing.assert_allclose(res.radii, 0.3, atol=1e-8)
    assert abs(res.exponent_hat) < 1e-6 and res.consistent and res.admissible


def test_radius_decay_needs_samples(small_state, mb1):
    with pytest.raises(ValueError):
        radius_decay_experiment(small_state, mb1, StepperConfig(dt=0.01), 1.0, n_samples=8)


def test_linear_system_is_mid_ratio_admissible_only_when_decoupled():
    from ckdv.coeffs import classify
    assert classify(LINEAR).admissible
    assert not classify(make_majda_biello(2.0)).admissible
