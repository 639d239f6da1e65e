"""Measurement campaigns on the coupled system.

Each function here checks one analytic statement at desk scale:

* ``commutator_inequality_scan`` -- the pointwise exponential-weight bound
  behind the commutator estimate, by brute force.
* ``commutator_scaling_fit`` -- growth of |f1|, |f2| with sigma.
* ``acl_defect_scan`` -- growth of the Gevrey-weighted quadratic functional
  over one local existence interval.
* ``picard_contraction_study`` -- contraction of the Duhamel map.
* ``radius_decay_experiment`` / ``predicted_lower_bound_curve`` -- long-time
  radius of analyticity against the algebraic lower bound.

None of these certify anything; they report consistency.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .coeffs import SystemCoefficients, classify, invariant_weight
from .dynamics import (
    ContractionFailureError,
    StepperConfig,
    commutator_terms,
    default_dt,
    evolve,
    lifespan,
    picard_iterate,
)
from .gevrey import (
    GevreyParams,
    InsufficientDecayError,
    RadiusEstimate,
    gevrey_norm,
    pair_norm,
    state_radius,
)
from .spectral import SpectralState, dealias_state

logger = logging.getLogger(__name__)

DEFAULT_RHO = 0.7
DEFAULT_EPSILON_TOL = 0.2


@dataclass(frozen=True)
class AnalysisParams:
    """rho: Gevrey-gain exponent; b, b_prime: Bourgain exponents, carried as
    metadata only; epsilon: decay-law slack; C_b: fitted constant."""

    rho: float = DEFAULT_RHO
    b: float = 0.75
    b_prime: float = 0.8
    epsilon: float = DEFAULT_EPSILON_TOL
    C_b: float | None = None

    def __post_init__(self):
        if not 0 <= self.rho <= 1:
            raise ValueError("rho must lie in [0, 1]")
        if not 0.5 < self.b < 1:
            raise ValueError("b must lie in (1/2, 1)")
        if not self.b <= self.b_prime < 1:
            raise ValueError("b_prime must lie in [b, 1)")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")

    @property
    def in_commutator_range(self) -> bool:
        return self.rho < 0.75


def map_cells(fn: Callable, cells: Iterable, workers: int = 1) -> list:
    """Run independent cells, in parallel threads when workers > 1; results keep input order."""
    cells = list(cells)
    if workers <= 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def log_log_fit(x, y) -> tuple[float, float, float]:
    """Least-squares ln y = ln c + p ln x.  Returns (p, stderr(p), c)."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    coef, cov = np.polyfit(lx, ly, 1, cov="unscaled")
    resid = ly - np.polyval(coef, lx)
    dof = max(len(lx) - 2, 1)
    stderr = math.sqrt(max(cov[0, 0] * float(resid @ resid) / dof, 0.0))
    return float(coef[0]), stderr, math.exp(coef[1])


# -- pointwise weight inequality -----------------------------------------------------

@dataclass
class InequalityReport:
    max_ratio: float
    worst: tuple[float, float, float, float]  # (xi1, xi2, sigma, rho)
    n_tuples: int
    passed: bool


def weight_inequality_ratio(xi1, xi2, sigma, rho):
    """(e^{s|x1|}e^{s|x2|} - e^{s|x1+x2|}) / (4^rho s^rho (<x1><x2>/<x1+x2>)^rho e^{s|x1|}e^{s|x2|}),
    evaluated without forming the exponentials."""
    xi1, xi2 = np.asarray(xi1, float), np.asarray(xi2, float)
    gap = np.abs(xi1 + xi2) - np.abs(xi1) - np.abs(xi2)  # <= 0
    lhs = -np.expm1(sigma * gap)
    base = 4.0 * sigma * (1 + np.abs(xi1)) * (1 + np.abs(xi2)) / (1 + np.abs(xi1 + xi2))
    rhs = np.power(base, rho) if rho != 0 else np.ones_like(base)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(lhs == 0, 0.0, lhs / rhs)


def commutator_inequality_scan(
    xi_grid: Sequence[float] | None = None,
    sigmas: Sequence[float] | None = None,
    rhos: Sequence[float] | None = None,
    tol: float = 1e-12,
) -> InequalityReport:
    """Brute-force max of ``weight_inequality_ratio`` over all (xi1, xi2, sigma, rho)."""
    xi = np.arange(-50.0, 50.0 + 1e-9, 0.5) if xi_grid is None else np.asarray(xi_grid, float)
    sigmas = np.logspace(-2, 0, 10) if sigmas is None else np.asarray(sigmas, float)
    rhos = np.array([0, 0.25, 0.5, 0.75, 1.0]) if rhos is None else np.asarray(rhos, float)
    X1, X2 = np.meshgrid(xi, xi, indexing="ij")
    best = (-math.inf, (math.nan,) * 4)
    for sig in sigmas:
        for rho in rhos:
            r = weight_inequality_ratio(X1, X2, float(sig), float(rho))
            i = int(np.argmax(r))
            if r.flat[i] > best[0]:
                best = (float(r.flat[i]), (float(X1.flat[i]), float(X2.flat[i]), float(sig), float(rho)))
    n = X1.size * len(sigmas) * len(rhos)
    return InequalityReport(best[0], best[1], n, best[0] <= 1 + tol)


# -- commutator scaling ---------------------------------------------------------------

@dataclass
class ScalingFit:
    term: str
    exponent: float | None
    stderr: float | None
    norms: np.ndarray
    skipped: bool = False


def commutator_scaling_fit(
    state: SpectralState,
    coeffs: SystemCoefficients,
    sigmas: Sequence[float],
    dealias: bool = True,
) -> dict[str, ScalingFit]:
    """Slope of ln|f_i|_{L2} against ln sigma for i = 1, 2.

    This is a time-slice surrogate for the space-time bound; the exponent,
    not the constant, is what it reports.  Terms that vanish for every
    sigma are marked skipped.  With ``dealias`` the state is first
    projected onto the retained band.
    """
    sigmas = np.asarray(sigmas, float)
    if np.any(sigmas <= 0):
        raise ValueError("sigmas must be positive for a log-log fit")
    if sigmas.max() / sigmas.min() < 100:
        logger.warning("sigma range spans less than two decades")
    if dealias:
        state = dealias_state(state)
    norms = {"f1": [], "f2": []}
    for sig in sigmas:
        ct = commutator_terms(state, coeffs, float(sig), dealias)
        norms["f1"].append(ct.f1.l2_norm())
        norms["f2"].append(ct.f2.l2_norm())
    out = {}
    for term, vals in norms.items():
        vals = np.asarray(vals)
        if not np.all(vals > 0):
            if np.all(vals == 0):
                logger.info("%s vanishes for every sigma; skipped", term)
            out[term] = ScalingFit(term, None, None, vals, skipped=True)
            continue
        p, se, _ = log_log_fit(sigmas, vals)
        out[term] = ScalingFit(term, p, se, vals)
    return out


# -- almost-conservation defect ----------------------------------------------------------

@dataclass
class ACLResult:
    sigmas: np.ndarray
    defects: np.ndarray  # sup_t Q_sigma(t) - Q_sigma(0), Q = |U|^2 + eta |V|^2
    pair_defects: np.ndarray  # sup_t |(u,v)(t)|^2 - |(u,v)(0)|^2 in the max pair norm
    eta: float
    delta: float
    exponent: float | None
    exponent_stderr: float | None
    C_b: float
    n_clipped: int
    flagged: bool  # a defect below -1e-8
    admissible: bool


def acl_defect_scan(
    initial: SpectralState,
    coeffs: SystemCoefficients,
    sigmas: Sequence[float],
    rho: float = DEFAULT_RHO,
    cfg: StepperConfig = StepperConfig(),
    delta: float | None = None,
    c0: float = 0.1,
    a: float = 4.0,
    eta: float | None = None,
    fit_range: tuple[float, float] | None = None,
) -> ACLResult:
    """Growth of the Gevrey-weighted energy over [0, delta].

    The solution does not depend on sigma, so one run to delta is measured
    with every weight.  The defect uses Q_sigma = |u|^2_{G^sigma} +
    eta |v|^2_{G^sigma}, which is exactly conserved at sigma = 0; the defect
    in the max pair norm is reported alongside.  C_b is the largest
    D(sigma) / (sigma^rho |(u0,v0)|^3_{G^sigma}) over sigma > 0.
    """
    sigmas = np.asarray(sigmas, float)
    if eta is None:
        eta = invariant_weight(coeffs)
        if eta is None:
            raise ValueError("system has no quadratic invariant weight; pass eta explicitly")
    if cfg.dealias:
        initial = dealias_state(initial)
    if delta is None:
        delta = lifespan(initial.u_hat.l2_norm(), initial.v_hat.l2_norm(), c0, a)
    if cfg.dt is None:
        cfg = StepperConfig(min(default_dt(initial, c0, a), delta / 100), cfg.scheme, cfg.dealias,
                            cfg.contour_points)
    record = evolve(initial, coeffs, cfg, initial.time + delta, keep_states=True)
    states = record.states

    defects, pair_defects = [], []
    for sig in sigmas:
        p = GevreyParams(float(sig), 0.0)
        q = np.array([gevrey_norm(s.u_hat, p) ** 2 + eta * gevrey_norm(s.v_hat, p) ** 2 for s in states])
        pn = np.array([pair_norm(s, p) ** 2 for s in states])
        defects.append(q.max() - q[0])
        pair_defects.append(pn.max() - pn[0])
    defects = np.asarray(defects)
    pair_defects = np.asarray(pair_defects)

    pos = sigmas > 0
    if fit_range is not None:
        pos &= (sigmas >= fit_range[0]) & (sigmas <= fit_range[1])
    usable = pos & (defects > 0)
    n_clipped = int(np.count_nonzero(pos & (defects <= 0)))
    exponent = stderr = None
    if np.count_nonzero(usable) >= 2:
        exponent, stderr, _ = log_log_fit(sigmas[usable], defects[usable])
    ratios = [
        max(d, 0.0) / (sig ** rho * pair_norm(initial, GevreyParams(float(sig))) ** 3)
        for sig, d in zip(sigmas, defects) if sig > 0
    ]
    return ACLResult(
        sigmas=sigmas,
        defects=defects,
        pair_defects=pair_defects,
        eta=float(eta),
        delta=float(delta),
        exponent=exponent,
        exponent_stderr=stderr,
        C_b=float(max(ratios)) if ratios else 0.0,
        n_clipped=n_clipped,
        flagged=bool(np.any(defects < -1e-8)),
        admissible=classify(coeffs).admissible,
    )


# -- radius decay ----------------------------------------------------------------------

@dataclass
class DecayFitResult:
    c_hat: float
    exponent_hat: float
    exponent_stderr: float
    window: tuple[float, float]
    per_time_radii: list[tuple[float, RadiusEstimate]]
    consistent: bool
    admissible: bool
    regime: str
    epsilon_tolerance: float = DEFAULT_EPSILON_TOL

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.per_time_radii])

    @property
    def radii(self) -> np.ndarray:
        return np.array([e.sigma_hat for _, e in self.per_time_radii])


def geometric_times(t_first: float, t_final: float, n: int) -> np.ndarray:
    return np.geomspace(t_first, t_final, n)


def radius_decay_experiment(
    initial: SpectralState,
    coeffs: SystemCoefficients,
    cfg: StepperConfig,
    t_final: float,
    n_samples: int = 16,
    t_first: float | None = None,
    epsilon_tolerance: float = DEFAULT_EPSILON_TOL,
    noise_floor: float = 1e-13,
) -> DecayFitResult:
    """Track the radius at geometric times and fit sigma(t) = c t^p on the later half.

    The analytic statement is a lower bound sigma(t) >= c t^(-4/3-eps), so the
    run is consistent unless the fitted power is below -4/3 - epsilon_tolerance.
    Returned radii include t = initial.time as the first entry.
    """
    if n_samples < 16:
        raise ValueError("n_samples must be >= 16 so the fitted half has >= 8 samples")
    if cfg.dealias:
        initial = dealias_state(initial)
    t0 = initial.time
    t_first = (t_final - t0) / 64 if t_first is None else t_first
    sample_times = t0 + geometric_times(t_first, t_final - t0, n_samples)
    per_time = [(t0, state_radius(initial, noise_floor))]
    state = initial
    if cfg.dt is None:
        cfg = StepperConfig(default_dt(initial), cfg.scheme, cfg.dealias, cfg.contour_points)
    for t in sample_times:
        rec = evolve(state, coeffs, cfg, float(t), keep_states=True, stride=10 ** 9)
        state = rec.states[-1]
        per_time.append((float(t), state_radius(state, noise_floor)))
    tail = per_time[1 + n_samples // 2:]
    ts = np.array([t - t0 for t, _ in tail])
    rs = np.array([e.sigma_hat for _, e in tail])
    if ts[-1] / ts[0] < 4:
        raise ValueError("fit window must span a factor >= 4 in time")
    if np.all(rs > 0):
        p, se, c = log_log_fit(ts, rs)
    else:
        p, se, c = -math.inf, math.nan, 0.0
    cls = classify(coeffs)
    return DecayFitResult(
        c_hat=c,
        exponent_hat=p,
        exponent_stderr=se,
        window=(float(tail[0][0]), float(tail[-1][0])),
        per_time_radii=per_time,
        consistent=bool(p >= -4.0 / 3.0 - epsilon_tolerance),
        admissible=cls.admissible,
        regime=cls.regime.value,
        epsilon_tolerance=epsilon_tolerance,
    )


def predicted_lower_bound_curve(
    norm0: float,
    sigma0: float,
    rho: float,
    c0: float = 0.1,
    a: float = 4.0,
    C_b: float = 1.0,
    times: Sequence[float] = (),
    delta: float | None = None,
) -> np.ndarray:
    """sigma(T) = min(sigma0, (delta / (C_b 2^{5/2} norm0))^{1/rho} T^{-1/rho}),
    delta = c0 (1 + 2 norm0)^{-a} unless given."""
    if not 0 < rho < 0.75:
        raise ValueError("rho must lie in (0, 3/4)")
    if not norm0 > 0:
        raise ValueError("norm0 must be positive")
    if delta is None:
        delta = c0 * (1 + 2 * norm0) ** (-a)
    T = np.asarray(times, float)
    c = (delta / (C_b * 2 ** 2.5 * norm0)) ** (1 / rho)
    with np.errstate(divide="ignore"):
        curve = c * T ** (-1 / rho)
    return np.minimum(sigma0, curve)


# -- Picard contraction ----------------------------------------------------------------------

@dataclass
class PicardCell:
    delta: float
    differences: list[float]
    ratios: list[float]
    max_ratio: float
    failed: bool = False


@dataclass
class PicardStudy:
    cells: list[PicardCell] = field(default_factory=list)
    delta_star: float | None = None
    monotone: bool = True


def picard_contraction_study(
    initial: SpectralState,
    coeffs: SystemCoefficients,
    deltas: Sequence[float],
    n_iters: int = 8,
    quadrature_nodes: int = 12,
    workers: int = 1,
) -> PicardStudy:
    """Contraction ratios d_{n+1}/d_n (n >= 2) of the Duhamel iteration per delta.

    delta_star is the first delta whose largest ratio exceeds 1; contraction
    failures are recorded rather than raised.
    """
    deltas = [float(d) for d in deltas]
    if any(d <= 0 for d in deltas) or deltas != sorted(deltas):
        raise ValueError("deltas must be positive and ascending")

    def cell(delta: float) -> PicardCell:
        try:
            res = picard_iterate(initial, coeffs, delta, n_iters, quadrature_nodes, lifespan_guard=None)
            diffs, failed = res.differences, False
        except ContractionFailureError as err:
            diffs, failed = err.differences, True
        ratios = [diffs[i + 1] / diffs[i] if diffs[i] > 0 else 0.0 for i in range(len(diffs) - 1)]
        tail = ratios[1:]  # d_{n+1}/d_n for n >= 2
        return PicardCell(delta, diffs, ratios, max(tail) if tail else 0.0, failed)

    cells = map_cells(cell, deltas, workers)
    star = next((c.delta for c in cells if c.max_ratio > 1 or c.failed), None)
    maxes = [c.max_ratio for c in cells]
    monotone = all(b >= a for a, b in zip(maxes, maxes[1:]))
    return PicardStudy(cells, star, monotone)
