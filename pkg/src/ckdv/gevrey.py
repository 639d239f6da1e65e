"""Gevrey norms and radius-of-analyticity estimates from Fourier decay.

A function in G^{sigma,s} extends holomorphically to the strip |Im z| < sigma,
and its Fourier coefficients then decay like exp(-sigma |xi|).  Two
independent readings of the radius are offered: a log-linear fit of the
coefficient tail (``estimate_radius``) and the largest sigma at which the
Gevrey norm stays below a threshold (``sup_finite_sigma``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .spectral import OVERFLOW_EXPONENT, SpectralField, SpectralState

LOG_SPACE_EXPONENT = 300.0
DEFAULT_NOISE_FLOOR = 1e-13
MIN_FIT_MODES = 8
AGREEMENT_TOL = 0.05


class InsufficientDecayError(ValueError):
    """Too few usable modes to fit a decay rate."""


@dataclass(frozen=True)
class GevreyParams:
    sigma: float = 0.0
    s: float = 0.0

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be finite and >= 0, got {self.sigma}")
        if not math.isfinite(self.s):
            raise ValueError(f"s must be finite, got {self.s}")


@dataclass(frozen=True)
class RadiusEstimate:
    sigma_hat: float
    window: tuple[int, int]
    slope_stderr: float
    residual: float
    floor_hit: bool
    n_modes: int = 0


def log_gevrey_norm(field: SpectralField, params: GevreyParams) -> float:
    """log of the G^{sigma,s} norm, computed in log space (-inf for zero)."""
    grid = field.grid
    amp = np.abs(field.coeffs)
    nz = amp > 0
    if not nz.any():
        return -math.inf
    axi = np.abs(grid.wavenumbers[nz])
    terms = 2 * params.sigma * axi + 2 * params.s * np.log1p(axi) + 2 * np.log(amp[nz])
    return 0.5 * (math.log(grid.length) + float(logsumexp(terms)))


def gevrey_norm(field: SpectralField, params: GevreyParams = GevreyParams()) -> float:
    """sqrt(L * sum_k exp(2 sigma|xi_k|) (1+|xi_k|)^{2s} |u_hat_k|^2)."""
    grid = field.grid
    if params.sigma * grid.max_abs_wavenumber > LOG_SPACE_EXPONENT:
        logn = log_gevrey_norm(field, params)
        if logn > OVERFLOW_EXPONENT:
            raise OverflowError(f"Gevrey norm exp({logn:.1f}) is not representable")
        return math.exp(logn)
    axi = np.abs(grid.wavenumbers)
    weight = np.exp(params.sigma * axi) * (1.0 + axi) ** params.s
    return math.sqrt(grid.length * float(np.sum((weight * np.abs(field.coeffs)) ** 2)))


def pair_norm(state: SpectralState, params: GevreyParams = GevreyParams()) -> float:
    """max of the two component norms."""
    return max(gevrey_norm(state.u_hat, params), gevrey_norm(state.v_hat, params))


def mode_amplitudes(field: SpectralField) -> tuple[np.ndarray, np.ndarray]:
    """(k, amplitude) for k = 1 .. n/2 - 1, amplitude = rms of |u_hat_{+k}|, |u_hat_{-k}|."""
    n = field.grid.n_points
    k = np.arange(1, n // 2)
    c = field.coeffs
    amp = np.sqrt(0.5 * (np.abs(c[k]) ** 2 + np.abs(c[n - k]) ** 2))
    return k, amp


def estimate_radius(
    field: SpectralField,
    noise_floor: float = DEFAULT_NOISE_FLOOR,
    k_min: int | None = None,
) -> RadiusEstimate:
    """Fit ln|u_hat_k| = intercept + slope |xi_k| on the coefficient tail.

    The window is the longest contiguous run of k >= k_min (default n/16)
    whose amplitudes exceed ``noise_floor * max|u_hat|``.  Exactly-zero
    modes (e.g. removed by dealiasing) neither break nor enter the fit.
    sigma_hat = max(0, -slope).
    """
    grid = field.grid
    n = grid.n_points
    k_min = n // 16 if k_min is None else k_min
    k, amp = mode_amplitudes(field)
    top = max(float(np.abs(field.coeffs).max()), 0.0)
    if top == 0:
        raise InsufficientDecayError("zero field has no decay rate")
    sel = k >= k_min
    k, amp = k[sel], amp[sel]
    ok = (amp > noise_floor * top) | (amp == 0)

    best = None  # (count of nonzero modes, start, stop)
    start = None
    for i, flag in enumerate(np.append(ok, False)):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            count = int(np.count_nonzero(amp[start:i]))
            if best is None or count > best[0]:
                best = (count, start, i)
            start = None
    if best is None or best[0] < MIN_FIT_MODES:
        raise InsufficientDecayError(
            f"only {0 if best is None else best[0]} modes above the noise floor for k >= {k_min}"
        )
    _, i0, i1 = best
    floor_hit = i1 < len(ok) and bool(np.any(amp[i1:] > 0))
    kw, aw = k[i0:i1], amp[i0:i1]
    use = aw > 0
    xi = grid.dxi * kw[use]
    y = np.log(aw[use])
    coef, cov = np.polyfit(xi, y, 1, cov="unscaled")
    resid = y - np.polyval(coef, xi)
    dof = max(len(xi) - 2, 1)
    s2 = float(resid @ resid) / dof
    stderr = math.sqrt(max(cov[0, 0] * s2, 0.0))
    nz = kw[use]
    return RadiusEstimate(
        sigma_hat=max(0.0, -float(coef[0])),
        window=(int(nz[0]), int(nz[-1])),
        slope_stderr=stderr,
        residual=math.sqrt(float(resid @ resid) / len(xi)),
        floor_hit=floor_hit,
        n_modes=int(len(xi)),
    )


def default_sigma_cap(field: SpectralField) -> float:
    return OVERFLOW_EXPONENT / field.grid.max_abs_wavenumber


def sup_finite_sigma(
    field: SpectralField,
    threshold: float,
    sigma_cap: float | None = None,
    tol: float = 1e-4,
) -> float:
    """Largest sigma in [0, sigma_cap] with gevrey_norm(field, (sigma, 0)) <= threshold.

    The norm is nondecreasing in sigma, so bisection applies.  On a finite
    grid the norm stays finite past the true radius; with a large threshold
    the answer overshoots by an amount set by the number of retained modes.
    """
    cap = default_sigma_cap(field) if sigma_cap is None else sigma_cap
    log_thr = math.log(threshold) if threshold > 0 else -math.inf

    def below(sig: float) -> bool:
        return log_gevrey_norm(field, GevreyParams(sig, 0.0)) <= log_thr

    if not below(0.0):
        raise ValueError("threshold must exceed the sigma = 0 norm")
    if below(cap):
        return cap
    lo, hi = 0.0, cap
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if below(mid):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class RadiusPair:
    """Both radius readings and whether they disagree beyond AGREEMENT_TOL."""

    fit: RadiusEstimate
    bisection: float
    flagged: bool


def radius_readings(field: SpectralField, threshold_factor: float = 10.0,
                    noise_floor: float = DEFAULT_NOISE_FLOOR) -> RadiusPair:
    fit = estimate_radius(field, noise_floor)
    thr = threshold_factor * gevrey_norm(field)
    bis = sup_finite_sigma(field, thr)
    return RadiusPair(fit, bis, abs(fit.sigma_hat - bis) > AGREEMENT_TOL)


# -- observers for dynamics.evolve ------------------------------------------------

def norm_observer(sigmas, s: float = 0.0):
    """Record pair Gevrey norms at each sigma as ``gevrey[sigma]``."""
    sigmas = [float(x) for x in sigmas]

    def observe(state: SpectralState) -> dict:
        return {f"gevrey[{sig:g}]": pair_norm(state, GevreyParams(sig, s)) for sig in sigmas}
    return observe


def state_radius(state: SpectralState, noise_floor: float = DEFAULT_NOISE_FLOOR) -> RadiusEstimate:
    """Radius of the pair: the smaller estimate over the nonzero components."""
    ests = [estimate_radius(f, noise_floor) for f in (state.u_hat, state.v_hat)
            if np.any(f.coeffs != 0)]
    if not ests:
        raise InsufficientDecayError("zero state has no decay rate")
    return min(ests, key=lambda e: e.sigma_hat)


def radius_observer(noise_floor: float = DEFAULT_NOISE_FLOOR):
    def observe(state: SpectralState) -> dict:
        try:
            est = state_radius(state, noise_floor)
        except InsufficientDecayError:
            return {"radius": math.nan, "radius_window": None, "radius_floor_hit": None}
        return {
            "radius": est.sigma_hat,
            "radius_window": list(est.window),
            "radius_stderr": est.slope_stderr,
            "radius_floor_hit": est.floor_hit,
        }
    return observe
