"""Acceptance criteria, one test each, at the stated tolerances and runtime limits.

Every test records a PASS/FAIL line; the lines are printed together in the
pytest terminal summary (see conftest.py) and immediately with ``-s``.
Run just this file with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest

from _oracles import band_limited_state, commutators, convolve
from ckdv.coeffs import (
    Regime,
    SystemCoefficients,
    classify,
    invariant_weight,
    make_hirota_satsuma,
    make_majda_biello,
)
from ckdv.dynamics import (
    StepperConfig,
    check_quadratic_invariant,
    commutator_terms,
    evolve,
    lifespan,
    picard_iterate,
)
from ckdv.experiments import (
    acl_defect_scan,
    commutator_inequality_scan,
    commutator_scaling_fit,
    predicted_lower_bound_curve,
    radius_decay_experiment,
)
from ckdv.gevrey import GevreyParams, norm_observer, pair_norm, radius_observer
from ckdv.profiles import initial_profile
from ckdv.spectral import GridSpec, SpectralField, SpectralState, dealias_state

RESULTS: list[str] = []


def report(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:2d}  {title}: {detail}"
    RESULTS.append(line)
    print(line)


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


# 1 -------------------------------------------------------------------------------

def test_linear_radius_conservation():
    grid = GridSpec(1024, 64 * math.pi)
    linear = SystemCoefficients(1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    st = initial_profile("poisson-kernel", {"r": math.exp(-0.5), "amplitude_u": 1.0, "amplitude_v": 1.0}, grid)
    sigmas = [0.0, 0.1, 0.2, 0.3, 0.4]
    with Timer() as tm:
        rec = evolve(st, linear, StepperConfig(dt=0.01), 10.0,
                     [norm_observer(sigmas), radius_observer()], stride=100)
    radii = rec.column("radius")
    spread = float(radii.max() - radii.min())
    rel = max(float(np.ptp(col) / col[0]) for col in (rec.column(f"gevrey[{s:g}]") for s in sigmas))
    ok = len(radii) == 11 and spread < 1e-6 and rel < 1e-10 and tm.elapsed < 30
    report(1, "linear radius conservation", ok,
           f"radius spread {spread:.2e} (< 1e-6), norm drift {rel:.2e} (< 1e-10), {tm.elapsed:.2f}s (< 30s)")
    assert ok


# 2 -------------------------------------------------------------------------------

def _sech2_pair(grid, amp, width=1.0):
    return initial_profile("sech2", {"amplitude_u": amp, "amplitude_v": amp, "width_u": width,
                                     "width_v": 1.5 * width, "center_v": 2.0}, grid)


def test_quadratic_invariant_sign():
    coeffs = make_majda_biello(1.0)
    eta = invariant_weight(coeffs)
    st = _sech2_pair(GridSpec(), 0.5)
    with Timer() as tm:
        rec = evolve(st, coeffs, StepperConfig(dt=1e-3), 5.0, stride=100)
    good = check_quadratic_invariant(rec, eta).max_drift
    bad = check_quadratic_invariant(rec, -eta).max_drift
    ok = eta == 1.0 and good < 1e-8 and bad > 1e-3 and tm.elapsed < 120
    report(2, "quadratic invariant", ok,
           f"eta = {eta:g}: drift {good:.2e} (< 1e-8); eta = {-eta:g}: drift {bad:.2e} (> 1e-3); "
           f"{tm.elapsed:.2f}s (< 120s)")
    assert ok


# 3 -------------------------------------------------------------------------------

def test_etdrk4_order():
    coeffs = make_majda_biello(1.0)
    st = dealias_state(_sech2_pair(GridSpec(), 0.5, width=2.0))

    def final(dt):
        rec = evolve(st, coeffs, StepperConfig(dt=dt, scheme="ETDRK4"), 1.0, keep_states=True, stride=10 ** 9)
        s = rec.states[-1]
        return np.stack([s.u_hat.coeffs, s.v_hat.coeffs])

    with Timer() as tm:
        dt = 0.02
        ref = final(dt / 8)
        e1 = np.abs(final(dt) - ref).max()
        e2 = np.abs(final(dt / 2) - ref).max()
    ratio = e1 / e2
    ok = 12 <= ratio <= 20 and tm.elapsed < 120
    report(3, "ETDRK4 order", ok,
           f"error({dt}) / error({dt / 2}) = {e1:.2e} / {e2:.2e} = {ratio:.2f} (in [12, 20]); {tm.elapsed:.2f}s")
    assert ok


# 4 -------------------------------------------------------------------------------

def test_commutator_vs_convolution():
    n, length, sigma = 64, 2 * math.pi, 0.1
    grid = GridSpec(n, length)
    rng = np.random.default_rng(4)
    worst, worst_div = 0.0, 0.0
    xi = grid.odd_wavenumbers
    E = np.exp(sigma * np.abs(grid.wavenumbers))
    keep = lambda k: abs(k) <= n // 3
    with Timer() as tm:
        for coeffs in (make_majda_biello(1.0), make_hirota_satsuma(0.1, 1.0)):
            for _ in range(20):
                u = band_limited_state(rng, n, length, n // 3)
                v = band_limited_state(rng, n, length, n // 3)
                st = SpectralState(SpectralField(grid, u), SpectralField(grid, v))
                ct = commutator_terms(st, coeffs, sigma)
                f1, f2 = commutators(u, v, coeffs.as_tuple(), sigma, length)
                for got, ref in ((ct.f1.coeffs, f1), (ct.f2.coeffs, f2)):
                    worst = max(worst, np.abs(got - ref).max() / np.abs(ref).max())
                if coeffs.c21 == coeffs.c22:
                    div = coeffs.c21 * 1j * xi * (E * convolve(u, v, keep) - convolve(E * u, E * v, keep))
                    worst_div = max(worst_div, np.abs(div - f2).max() / np.abs(f2).max())
    ok = worst < 1e-11 and worst_div < 1e-10 and tm.elapsed < 60
    report(4, "commutator vs convolution", ok,
           f"max rel error {worst:.2e} (< 1e-11), divergence-form cross-check {worst_div:.2e} (< 1e-10), "
           f"40 states, {tm.elapsed:.2f}s")
    assert ok


# 5 -------------------------------------------------------------------------------

def test_weight_inequality_brute_force():
    with Timer() as tm:
        rep = commutator_inequality_scan()
    ok = rep.max_ratio <= 1 + 1e-12 and rep.n_tuples >= 2_000_000 and tm.elapsed < 60
    report(5, "weight inequality brute force", ok,
           f"max ratio {rep.max_ratio:.15f} (<= 1 + 1e-12) over {rep.n_tuples} tuples, {tm.elapsed:.2f}s")
    assert ok


# 6 -------------------------------------------------------------------------------

def test_commutator_sigma_scaling():
    st = _sech2_pair(GridSpec(), 0.5)
    sigmas = np.logspace(-3, -1, 9)
    exps = {}
    with Timer() as tm:
        for name, coeffs in (("MB(1)", make_majda_biello(1.0)), ("HS(0.1,1)", make_hirota_satsuma(0.1, 1.0))):
            for term, fit in commutator_scaling_fit(st, coeffs, sigmas).items():
                exps[f"{name} {term}"] = fit.exponent
    ok = all(p is not None and p >= 0.7 for p in exps.values()) and tm.elapsed < 60
    report(6, "commutator sigma scaling", ok,
           ", ".join(f"{k} {v:.3f}" for k, v in exps.items()) + f" (>= 0.7), {tm.elapsed:.2f}s")
    assert ok


# 7 -------------------------------------------------------------------------------

def test_almost_conservation_defect():
    st = _sech2_pair(GridSpec(), 0.1)
    sigmas = np.concatenate([[0.0], np.logspace(-3, -1, 9)])
    with Timer() as tm:
        res = acl_defect_scan(st, make_majda_biello(1.0), sigmas)
    dmin = float(res.defects.min())
    d0 = float(res.defects[0])
    ok = (dmin >= -1e-8 and d0 <= 1e-8 and res.exponent is not None and res.exponent >= 0.7
          and tm.elapsed < 300)
    report(7, "almost-conservation defect", ok,
           f"min D {dmin:.2e} (>= -1e-8), D(0) {d0:.2e} (<= 1e-8), exponent {res.exponent:.3f} (>= 0.7), "
           f"C_b {res.C_b:.3e}, {tm.elapsed:.2f}s")
    assert ok


# 8 -------------------------------------------------------------------------------

def test_picard_contraction():
    st = dealias_state(_sech2_pair(GridSpec(), 0.1))
    delta = lifespan(st.u_hat.l2_norm(), st.v_hat.l2_norm(), 0.1, 4.0)
    with Timer() as tm:
        res = picard_iterate(st, make_majda_biello(1.0), delta, 8)
    ratios = res.ratios[1:6]  # d_{n+1}/d_n, n = 2..6
    ok = len(ratios) == 5 and max(ratios) <= 0.5 and tm.elapsed < 120
    report(8, "Picard contraction", ok,
           f"delta {delta:.4f}, ratios {', '.join(f'{r:.4f}' for r in ratios)} (<= 0.5), {tm.elapsed:.2f}s")
    assert ok


# 9 -------------------------------------------------------------------------------

@pytest.mark.slow
def test_radius_decay_consistency():
    # L = 16 pi resolves the sigma0 = 0.5 kernel: e^{-0.5 |xi|} reaches 1e-14 inside the band
    grid = GridSpec(1024, 16 * math.pi)
    coeffs = make_majda_biello(1.0)
    st = initial_profile("poisson-kernel", {"sigma0": 0.5, "amplitude_u": 0.03, "amplitude_v": 0.03,
                                            "center_v": 3.0}, grid)
    cfg = StepperConfig(dt=1e-3)
    with Timer() as tm:
        res = radius_decay_experiment(st, coeffs, cfg, 50.0)
        acl = acl_defect_scan(st, coeffs, np.logspace(-3, -1, 9), rho=0.7, cfg=cfg)
    radii = res.radii
    sigma0 = 0.9 * radii[0]  # the data lie in G^sigma for every sigma below the radius
    norm0 = pair_norm(dealias_state(st), GevreyParams(sigma0))
    pred = predicted_lower_bound_curve(norm0, sigma0, 0.7, C_b=acl.C_b, times=res.times)
    below = bool(np.all(pred <= radii))
    ok = res.exponent_hat >= -4 / 3 - 0.2 and below and tm.elapsed < 600
    report(9, "radius-decay consistency", ok,
           f"tail exponent {res.exponent_hat:.4f} (>= {-4 / 3 - 0.2:.4f}), radius {radii[0]:.4f} -> "
           f"{radii[-1]:.4f}, predicted curve below measured: {below} (C_b {acl.C_b:.2e}), {tm.elapsed:.2f}s")
    assert ok


# 10 ------------------------------------------------------------------------------

def _table_oracle(c: SystemCoefficients) -> tuple[str, bool]:
    """Admissibility rules restated from the coefficient table."""
    r = c.a2 / c.a1
    if r < 0:
        return "NegativeRatio", True
    if r > 4:
        return "LargeRatio", True
    if r == 1:
        return "UnitRatio", c.c21 == c.c22
    return "MidRatio", c.c12 == 0 and c.c21 == 0 and c.c22 == 0


def test_admissibility_table():
    rng = np.random.default_rng(10)
    cases = []
    # Majda-Biello: admissible iff a2 < 0, a2 = 1, a2 > 4
    mb_a2 = [1.0, 4.0, 0.25, -1.0, 4.000001, 0.999999, 1.000001, 5.0]
    mb_a2 += list(rng.uniform(-10, 10, 92))
    for a2 in mb_a2:
        cases.append((make_majda_biello(a2), a2 < 0 or a2 == 1 or a2 > 4))
    # Hirota-Satsuma: admissible iff a1 < 1/4
    hs_a1 = [0.25, 1.0, 0.2499999, 0.2500001, -0.5, 0.1]
    hs_a1 += list(rng.uniform(-2, 2, 64))
    for a1 in hs_a1:
        cases.append((make_hirota_satsuma(a1, float(rng.uniform(-3, 3))), a1 < 0.25))
    # table rows with their coefficient constraints met and broken
    rows = [
        SystemCoefficients(1, -2, 1, 2, 3, 4), SystemCoefficients(-1, 3, 0, 1, 1, 1),
        SystemCoefficients(1, 2, 5, 0, 0, 0), SystemCoefficients(1, 2, 5, 1, 0, 0),
        SystemCoefficients(2, 8, 1, 0, 0, 0), SystemCoefficients(2, 8, 0, 0, 1, 0),
        SystemCoefficients(1, 0.5, 0, 0, 0, 1), SystemCoefficients(1, 1, 3, 2, 5, 5),
        SystemCoefficients(-2, -2, 0, 1, 1, 2), SystemCoefficients(1, 4.5, 1, 1, 1, 1),
    ]
    rows += [SystemCoefficients(1.0, float(rng.choice([-3, 0.5, 1, 2, 4, 7])),
                                *map(float, rng.choice([0.0, 0.0, 1.0, -1.0], 4))) for _ in range(30)]
    cases += [(c, _table_oracle(c)[1]) for c in rows]

    with Timer() as tm:
        mismatches = []
        for c, expected in cases:
            rc = classify(c)
            if rc.admissible != expected or rc.regime.value != _table_oracle(c)[0]:
                mismatches.append(c)
    ok = not mismatches and len(cases) >= 200 and tm.elapsed < 1
    report(10, "admissibility table", ok,
           f"{len(cases) - len(mismatches)}/{len(cases)} exact matches, {tm.elapsed * 1e3:.1f}ms (< 1s)")
    assert ok
    assert {Regime(_table_oracle(c)[0]) for c, _ in cases} == set(Regime)
