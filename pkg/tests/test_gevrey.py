import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _oracles import least_squares_line
from ckdv.gevrey import (
    GevreyParams,
    InsufficientDecayError,
    default_sigma_cap,
    estimate_radius,
    gevrey_norm,
    log_gevrey_norm,
    norm_observer,
    pair_norm,
    radius_readings,
    state_radius,
    sup_finite_sigma,
)
from ckdv.profiles import initial_profile
from ckdv.spectral import GridSpec, SpectralField, SpectralState


def _exp_field(grid, rate, amp=1.0, power=0.0):
    xi = np.abs(grid.wavenumbers)
    return SpectralField(grid, amp * (1 + xi) ** power * np.exp(-rate * xi))


def test_params_validation():
    with pytest.raises(ValueError):
        GevreyParams(-0.1)
    with pytest.raises(ValueError):
        GevreyParams(0.1, math.inf)


def test_sigma_zero_is_l2(small_state):
    assert gevrey_norm(small_state.u_hat) == pytest.approx(small_state.u_hat.l2_norm(), rel=1e-14)


def test_norm_direct_sum():
    g = GridSpec(32, 3.0)
    rng = np.random.default_rng(1)
    c = rng.normal(size=32) + 1j * rng.normal(size=32)
    f = SpectralField(g, c)
    total = 0.0
    for k, ck in zip(g.k, c):
        xi = abs(2 * math.pi * k / 3.0)
        total += math.exp(2 * 0.3 * xi) * (1 + xi) ** 1.5 * abs(ck) ** 2
    assert gevrey_norm(f, GevreyParams(0.3, 0.75)) == pytest.approx(math.sqrt(3.0 * total), rel=1e-13)


def test_log_space_path_matches_direct():
    g = GridSpec(1024, 2 * np.pi)
    f = _exp_field(g, 0.9)
    sigma = 0.6  # sigma * max|xi| = 307 > 300 takes the log-space path
    direct = math.sqrt(g.length * np.sum(np.exp(2 * sigma * np.abs(g.wavenumbers)) * np.abs(f.coeffs) ** 2))
    assert gevrey_norm(f, GevreyParams(sigma)) == pytest.approx(direct, rel=1e-12)


def test_overflowing_norm_raises():
    g = GridSpec(1024, 2 * np.pi)
    with pytest.raises(OverflowError):
        gevrey_norm(SpectralField(g, np.ones(1024)), GevreyParams(1.5))


def test_zero_field_log_norm():
    assert log_gevrey_norm(SpectralField.zeros(GridSpec(16)), GevreyParams(0.1)) == -math.inf


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 0.5), st.floats(0, 0.5))
def test_norm_monotone_in_sigma(s1, s2):
    g = GridSpec(64, 10.0)
    f = _exp_field(g, 1.0)
    lo, hi = sorted((s1, s2))
    assert gevrey_norm(f, GevreyParams(lo)) <= gevrey_norm(f, GevreyParams(hi)) * (1 + 1e-14)


def test_pair_norm_is_max(small_state):
    p = GevreyParams(0.2)
    assert pair_norm(small_state, p) == max(gevrey_norm(small_state.u_hat, p), gevrey_norm(small_state.v_hat, p))


def test_radius_pure_exponential():
    g = GridSpec(256, 2 * np.pi)
    est = estimate_radius(_exp_field(g, 0.15))
    assert est.sigma_hat == pytest.approx(0.15, abs=1e-10)
    assert est.window[0] == 16 and est.slope_stderr < 1e-10


def test_radius_with_algebraic_prefactor():
    # (1 + |k|)^3 e^{-0.3 k}: the prefactor biases the slope, within 0.02
    g = GridSpec(1024, 2 * np.pi)
    est = estimate_radius(_exp_field(g, 0.3, power=3.0), noise_floor=1e-60)
    assert abs(est.sigma_hat - 0.3) < 0.02


def test_radius_matches_closed_form_least_squares():
    g = GridSpec(256, 2 * np.pi)
    rng = np.random.default_rng(3)
    c = _exp_field(g, 0.2).coeffs * np.exp(0.05 * rng.normal(size=256))
    c = 0.5 * (c + np.conj(np.roll(c[::-1], 1)))
    est = estimate_radius(SpectralField(g, c))
    k0, k1 = est.window
    k = np.arange(k0, k1 + 1)
    amp = np.sqrt(0.5 * (np.abs(c[k]) ** 2 + np.abs(c[256 - k]) ** 2))
    slope, _ = least_squares_line(k.astype(float), np.log(amp))
    assert est.sigma_hat == pytest.approx(-slope, rel=1e-10)


def test_radius_of_poisson_profile():
    g = GridSpec(1024, 64 * np.pi)
    st = initial_profile("poisson-kernel", {"r": math.exp(-0.5), "amplitude_u": 1.0, "amplitude_v": 1.0}, g)
    assert state_radius(st).sigma_hat == pytest.approx(0.5, abs=1e-8)


def test_floor_truncates_window():
    g = GridSpec(1024, 2 * np.pi)
    est = estimate_radius(_exp_field(g, 0.2))
    assert est.floor_hit and est.window[1] < 200
    assert est.sigma_hat == pytest.approx(0.2, abs=1e-6)


def test_zero_and_band_limited_fields_have_no_rate():
    g = GridSpec(64)
    with pytest.raises(InsufficientDecayError):
        estimate_radius(SpectralField.zeros(g))
    c = np.zeros(64, complex)
    c[1] = c[-1] = 1
    with pytest.raises(InsufficientDecayError):
        estimate_radius(SpectralField(g, c))


def test_sup_sigma_zero_field_returns_cap():
    f = SpectralField.zeros(GridSpec(64, 2 * np.pi))
    assert sup_finite_sigma(f, 1.0) == default_sigma_cap(f)
    assert sup_finite_sigma(f, 1.0, sigma_cap=3.0) == 3.0


def test_sup_sigma_threshold_crossing():
    g = GridSpec(256, 2 * np.pi)
    f = _exp_field(g, 0.4)
    thr = 10 * gevrey_norm(f)
    s = sup_finite_sigma(f, thr, tol=1e-8)
    assert gevrey_norm(f, GevreyParams(s)) <= thr < gevrey_norm(f, GevreyParams(s + 1e-6))
    with pytest.raises(ValueError):
        sup_finite_sigma(f, 0.5 * gevrey_norm(f))


def test_readings_and_flag():
    g = GridSpec(256, 2 * np.pi)
    pair = radius_readings(_exp_field(g, 0.4))
    assert pair.fit.sigma_hat == pytest.approx(0.4, abs=1e-8)
    assert pair.flagged == (abs(pair.fit.sigma_hat - pair.bisection) > 0.05)


def test_norm_observer_keys(small_state):
    row = norm_observer([0, 0.1])(small_state)
    assert set(row) == {"gevrey[0]", "gevrey[0.1]"}


def test_state_radius_takes_smaller():
    g = GridSpec(256, 2 * np.pi)
    st = SpectralState(_exp_field(g, 0.3), _exp_field(g, 0.2))
    assert state_radius(st).sigma_hat == pytest.approx(0.2, abs=1e-8)
