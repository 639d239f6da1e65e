"""Right-hand sides, Gevrey commutators, integrating-factor time stepping and
the Duhamel/Picard iteration for the coupled system.

In Fourier variables each equation reads

    d/dt w_hat = i a xi^3 w_hat + N_hat(u, v),

so the free flow exp(-t a d_x^3) is the phase exp(i a xi^3 t).  Both
stepping schemes treat that phase exactly and only the quadratic terms
explicitly.  Internally a state is a (2, n) complex array holding (u_hat,
v_hat).
"""

from __future__ import annotations

import enum
import math
import time as _time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from .coeffs import SystemCoefficients, is_divergence_form
from .records import RunRecord
from .spectral import (
    GridSpec,
    SpectralField,
    SpectralState,
    _check_grid,
    check_gevrey_exponent,
    dealias_state,
    to_physical,
    to_spectral,
)

BLOWUP_AMPLITUDE = 1e8
TAIL_TOL = 1e-8
DIVERGENCE_FORM_TOL = 1e-10

NonlinearFn = Callable[[np.ndarray], np.ndarray]


class BlowUpError(RuntimeError):
    """Non-finite or exploding fields.  ``time`` is when it was detected and
    ``record`` holds the partial trace, if any."""

    def __init__(self, message: str, time: float, record: RunRecord | None = None):
        super().__init__(message)
        self.time = time
        self.record = record


class TailDominanceError(ValueError):
    """The weighted spectrum exp(sigma|xi|)|u_hat| is not resolved on the grid."""


class ContractionFailureError(RuntimeError):
    def __init__(self, message: str, delta: float, differences: Sequence[float] = ()):
        super().__init__(message)
        self.delta = delta
        self.differences = list(differences)


class Scheme(enum.Enum):
    IFRK4 = "IFRK4"
    ETDRK4 = "ETDRK4"


@dataclass(frozen=True)
class StepperConfig:
    """Time-stepping options.

    ``dt=None`` selects the lifespan-based default (see ``default_dt``).
    Both schemes integrate the dispersion exactly, so the step is limited
    by the nonlinear time scale only: keep dt * max|u| * max|xi| well
    below 1.
    """

    dt: float | None = None
    scheme: Scheme = Scheme.ETDRK4
    dealias: bool = True
    contour_points: int = 32

    def __post_init__(self):
        if isinstance(self.scheme, str):
            object.__setattr__(self, "scheme", Scheme(self.scheme.upper()))
        if self.dt is not None and not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.contour_points < 1:
            raise ValueError("contour_points must be positive")


@dataclass(frozen=True)
class NonlinearTerms:
    rhs_u: SpectralField
    rhs_v: SpectralField


@dataclass(frozen=True)
class CommutatorTerms:
    f1: SpectralField
    f2: SpectralField
    sigma: float


# -- lifespan surrogate ---------------------------------------------------------

def lifespan(norm_u: float, norm_v: float, c0: float = 0.1, a: float = 4.0) -> float:
    """delta = c0 (1 + |u0| + |v0|)^(-a)."""
    return c0 * (1.0 + norm_u + norm_v) ** (-a)


def default_dt(state: SpectralState, c0: float = 0.1, a: float = 4.0) -> float:
    """min(1e-3, delta/100) with delta from the L2 norms of the state."""
    delta = lifespan(state.u_hat.l2_norm(), state.v_hat.l2_norm(), c0, a)
    return min(1e-3, delta / 100.0)


# -- nonlinear terms ------------------------------------------------------------

def _pack(state: SpectralState) -> np.ndarray:
    return np.stack([state.u_hat.coeffs, state.v_hat.coeffs])


def _unpack(w: np.ndarray, grid: GridSpec, t: float) -> SpectralState:
    return SpectralState(SpectralField(grid, w[0]), SpectralField(grid, w[1]), t)


def make_nonlinearity(coeffs: SystemCoefficients, grid: GridSpec, dealias: bool = True) -> NonlinearFn:
    """Return w -> N_hat(w) on packed (2, n) arrays.

    The u-equation terms are formed as d_x(c11 u^2/2 + c12 v^2/2) and, in
    divergence form, the v-equation as c21 d_x(u v); otherwise
    c21 u_x v + c22 u v_x.  For products of dealiased fields these are the
    same trigonometric polynomials, and the derivative form keeps the
    means exactly constant.
    """
    ik = 1j * grid.odd_wavenumbers
    mask = grid.dealias_mask if dealias else None
    c11, c12, c21, c22 = coeffs.c11, coeffs.c12, coeffs.c21, coeffs.c22
    divergence = is_divergence_form(coeffs)
    zero = np.zeros(grid.n_points, dtype=np.complex128)

    def nonlinear(w: np.ndarray) -> np.ndarray:
        out = np.empty_like(w)
        if c11 == 0 and c12 == 0 and c21 == 0 and c22 == 0:
            out[:] = zero
            return out
        u, v = to_physical(w)
        if c11 != 0 or c12 != 0:
            out[0] = ik * to_spectral(0.5 * c11 * u * u + 0.5 * c12 * v * v)
        else:
            out[0] = zero
        if divergence:
            out[1] = ik * to_spectral(c21 * u * v) if c21 != 0 else zero
        else:
            ux, vx = to_physical(ik * w)
            out[1] = to_spectral(c21 * ux * v + c22 * u * vx)
        if mask is not None:
            out[:, ~mask] = 0.0
        return out

    return nonlinear


def nonlinear_rhs(state: SpectralState, coeffs: SystemCoefficients, dealias: bool = True) -> NonlinearTerms:
    """Spectra of c11 u u_x + c12 v v_x and c21 u_x v + c22 u v_x."""
    grid = state.grid
    out = make_nonlinearity(coeffs, grid, dealias)(_pack(state))
    return NonlinearTerms(SpectralField(grid, out[0]), SpectralField(grid, out[1]))


# -- Gevrey commutators -----------------------------------------------------------

def _check_tail(weighted: np.ndarray, grid: GridSpec, sigma: float) -> None:
    top = np.abs(weighted).max()
    if top == 0:
        return
    tail = np.abs(weighted[np.abs(grid.k) > 7 * grid.n_points // 16]).max(initial=0.0)
    if tail > TAIL_TOL * top:
        raise TailDominanceError(
            f"weighted tail {tail / top:.2e} of max at sigma={sigma:g}; spectrum does not decay "
            f"enough for this sigma on n={grid.n_points}"
        )


def commutator_terms(
    state: SpectralState,
    coeffs: SystemCoefficients,
    sigma: float,
    dealias: bool = True,
) -> CommutatorTerms:
    """Source terms f1, f2 of the system satisfied by U = e^{sigma|d_x|} u,
    V = e^{sigma|d_x|} v:

        f1 = c11/2 d_x(E u^2 - (E u)^2) + c12/2 d_x(E v^2 - (E v)^2)
        f2 = c21 (E(u_x v) - (E u_x)(E v)) + c22 (E(u v_x) - (E u)(E v_x))

    where E = e^{sigma|d_x|}.  With c21 == c22 the divergence form
    c21 d_x(E(uv) - (E u)(E v)) is used for f2.
    """
    grid = state.grid
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        z = SpectralField.zeros(grid)
        return CommutatorTerms(z, z.copy(), 0.0)
    check_gevrey_exponent(sigma, grid)
    E = np.exp(sigma * np.abs(grid.wavenumbers))
    ik = 1j * grid.odd_wavenumbers
    u, v = state.u_hat.coeffs, state.v_hat.coeffs
    U, V = E * u, E * v
    _check_tail(U, grid, sigma)
    _check_tail(V, grid, sigma)

    def prod(a, b):
        c = to_spectral(to_physical(a) * to_physical(b))
        if dealias:
            c[~grid.dealias_mask] = 0.0
        return c

    f1 = np.zeros(grid.n_points, dtype=np.complex128)
    if coeffs.c11 != 0:
        f1 += 0.5 * coeffs.c11 * ik * (E * prod(u, u) - prod(U, U))
    if coeffs.c12 != 0:
        f1 += 0.5 * coeffs.c12 * ik * (E * prod(v, v) - prod(V, V))

    def two_term() -> np.ndarray:
        out = np.zeros(grid.n_points, dtype=np.complex128)
        if coeffs.c21 != 0:
            out += coeffs.c21 * (E * prod(ik * u, v) - prod(ik * U, V))
        if coeffs.c22 != 0:
            out += coeffs.c22 * (E * prod(u, ik * v) - prod(U, ik * V))
        return out

    if is_divergence_form(coeffs):
        f2 = coeffs.c21 * ik * (E * prod(u, v) - prod(U, V)) if coeffs.c21 != 0 else np.zeros_like(f1)
        if __debug__:
            alt = two_term()
            scale = max(np.abs(f2).max(), np.abs(alt).max())
            assert scale == 0 or np.abs(f2 - alt).max() <= DIVERGENCE_FORM_TOL * scale, (
                "divergence and two-term forms of f2 disagree"
            )
    else:
        f2 = two_term()
    return CommutatorTerms(SpectralField(grid, f1), SpectralField(grid, f2), float(sigma))


def conjugated_nonlinearity(coeffs: SystemCoefficients, grid: GridSpec, sigma: float,
                            dealias: bool = True) -> NonlinearFn:
    """Nonlinearity of the system for (U, V) = e^{sigma|d_x|}(u, v):
    c11 U U_x + c12 V V_x + f1 and c21 U_x V + c22 U V_x + f2."""
    base = make_nonlinearity(coeffs, grid, dealias)
    E = np.exp(sigma * np.abs(grid.wavenumbers))

    def nonlinear(W: np.ndarray) -> np.ndarray:
        w = W / E
        st = _unpack(w, grid, 0.0)
        comm = commutator_terms(st, coeffs, sigma, dealias)
        out = base(W)
        out[0] += comm.f1.coeffs
        out[1] += comm.f2.coeffs
        return out

    return nonlinear


# -- time stepping -------------------------------------------------------------------

def _symmetrize(c: np.ndarray) -> np.ndarray:
    """Enforce c_{-k} = conj(c_k) along the last axis."""
    mirrored = np.conj(np.roll(c[..., ::-1], 1, axis=-1))
    return 0.5 * (c + mirrored)


class Stepper:
    """Precomputed integrating-factor / ETD coefficients for one (grid, a1, a2, dt)."""

    def __init__(self, grid: GridSpec, coeffs: SystemCoefficients, cfg: StepperConfig, dt: float,
                 nonlinear: NonlinearFn | None = None):
        self.grid = grid
        self.coeffs = coeffs
        self.cfg = cfg
        self.dt = dt
        self.nonlinear = nonlinear or make_nonlinearity(coeffs, grid, cfg.dealias)
        xi3 = grid.odd_wavenumbers ** 3
        lam = 1j * np.stack([coeffs.a1 * xi3, coeffs.a2 * xi3])
        h = dt
        self.E = _symmetrize(np.exp(lam * h))
        self.E2 = _symmetrize(np.exp(lam * h / 2))
        if cfg.scheme is Scheme.ETDRK4:
            M = cfg.contour_points
            roots = np.exp(1j * np.pi * (np.arange(1, M + 1) - 0.5) / M)
            z = (lam * h)[..., None] + roots
            ez = np.exp(z)
            self.Q = _symmetrize(h * np.mean((np.exp(z / 2) - 1) / z, axis=-1))
            self.f1 = _symmetrize(h * np.mean((-4 - z + ez * (4 - 3 * z + z ** 2)) / z ** 3, axis=-1))
            self.f2 = _symmetrize(h * np.mean((2 + z + ez * (z - 2)) / z ** 3, axis=-1))
            self.f3 = _symmetrize(h * np.mean((-4 - 3 * z - z ** 2 + ez * (4 - z)) / z ** 3, axis=-1))

    def advance(self, w: np.ndarray) -> np.ndarray:
        N = self.nonlinear
        if self.cfg.scheme is Scheme.ETDRK4:
            Nw = N(w)
            a = self.E2 * w + self.Q * Nw
            Na = N(a)
            b = self.E2 * w + self.Q * Na
            Nb = N(b)
            c = self.E2 * a + self.Q * (2 * Nb - Nw)
            Nc = N(c)
            return self.E * w + self.f1 * Nw + 2 * self.f2 * (Na + Nb) + self.f3 * Nc
        h, E, E2 = self.dt, self.E, self.E2
        k1 = N(w)
        k2 = N(E2 * (w + 0.5 * h * k1))
        k3 = N(E2 * w + 0.5 * h * k2)
        k4 = N(E * w + h * E2 * k3)
        return E * w + h / 6 * (E * k1 + 2 * E2 * (k2 + k3) + k4)


def _check_blowup(w: np.ndarray, t: float) -> None:
    bound = np.abs(w).sum(axis=-1).max()
    if not np.isfinite(bound):
        raise BlowUpError(f"non-finite field at t={t:.6g}", t)
    if bound > BLOWUP_AMPLITUDE:
        peak = np.abs(to_physical(w)).max()
        if peak > BLOWUP_AMPLITUDE:
            raise BlowUpError(f"field amplitude {peak:.3e} exceeds {BLOWUP_AMPLITUDE:g} at t={t:.6g}", t)


def step(state: SpectralState, coeffs: SystemCoefficients, cfg: StepperConfig,
         nonlinear: NonlinearFn | None = None) -> SpectralState:
    """Advance one step of size cfg.dt (which may be negative via ``Stepper``)."""
    dt = cfg.dt if cfg.dt is not None else default_dt(state)
    stepper = Stepper(state.grid, coeffs, cfg, dt, nonlinear)
    w = stepper.advance(_pack(state))
    t = state.time + dt
    _check_blowup(w, t)
    return _unpack(w, state.grid, t)


# -- evolution --------------------------------------------------------------------

Observer = Callable[[SpectralState], dict]


def base_row(state: SpectralState) -> dict:
    nu = state.u_hat.l2_norm()
    nv = state.v_hat.l2_norm()
    return {"t": state.time, "l2_u_sq": nu * nu, "l2_v_sq": nv * nv, "pair_l2": max(nu, nv)}


def invariant_observer(eta: float) -> Observer:
    def observe(state: SpectralState) -> dict:
        row = base_row(state)
        return {"invariant_q": row["l2_u_sq"] + eta * row["l2_v_sq"]}
    return observe


def evolve(
    state: SpectralState,
    coeffs: SystemCoefficients,
    cfg: StepperConfig,
    t_final: float,
    observers: Sequence[Observer] = (),
    stride: int = 1,
    nonlinear: NonlinearFn | None = None,
    keep_states: bool = False,
    config: dict | None = None,
) -> RunRecord:
    """Step from state.time to t_final, recording a row every ``stride`` steps.

    The step is adjusted down so that an integer number of steps lands on
    t_final.  With dealiasing on, the initial state is first projected onto
    the retained band so that the discrete system is a Galerkin truncation.
    A BlowUpError carries the partial record.
    """
    if t_final < state.time:
        raise ValueError(f"t_final={t_final} precedes state time {state.time}")
    if cfg.dealias:
        state = dealias_state(state)
    grid = state.grid
    record = RunRecord(config=dict(config or {}))
    t_start = _time.perf_counter()

    def observe(st: SpectralState) -> None:
        row = base_row(st)
        for obs in observers:
            row.update(obs(st))
        record.append(row)
        if keep_states:
            record.states.append(st)

    observe(state)
    span = t_final - state.time
    if span == 0:
        record.status = "complete"
        record.wall_time = _time.perf_counter() - t_start
        return record
    dt_target = cfg.dt if cfg.dt is not None else default_dt(state)
    n_steps = max(1, math.ceil(span / dt_target - 1e-9))
    dt = span / n_steps
    stepper = Stepper(grid, coeffs, cfg, dt, nonlinear)
    w = _pack(state)
    t0 = state.time
    record.config.setdefault("dt", dt)
    record.config.setdefault("n_steps", n_steps)
    for i in range(1, n_steps + 1):
        w = stepper.advance(w)
        t = t_final if i == n_steps else t0 + i * dt
        try:
            _check_blowup(w, t)
        except BlowUpError as err:
            record.status = "blowup"
            record.wall_time = _time.perf_counter() - t_start
            err.record = record
            raise
        if i % stride == 0 or i == n_steps:
            observe(_unpack(w, grid, t))
    record.status = "complete"
    record.wall_time = _time.perf_counter() - t_start
    return record


@dataclass
class DriftReport:
    max_drift: float
    relative: bool
    q0: float
    times: np.ndarray
    q: np.ndarray


def check_quadratic_invariant(record: RunRecord, eta: float) -> DriftReport:
    """Max over recorded times of |Q(t) - Q(0)| / |Q(0)|, Q = int u^2 + eta v^2.

    Falls back to absolute drift when Q(0) == 0.
    """
    q = record.column("l2_u_sq") + eta * record.column("l2_v_sq")
    q0 = float(q[0])
    diff = np.abs(q - q0)
    relative = q0 != 0
    drift = float(diff.max() / abs(q0)) if relative else float(diff.max())
    return DriftReport(drift, relative, q0, record.times, q)


# -- Picard / Duhamel iteration ------------------------------------------------------

@dataclass
class PicardResult:
    grid: GridSpec
    delta: float
    times: np.ndarray
    iterates: list[np.ndarray]  # each (n_times, 2, n)
    differences: list[float] = field(default_factory=list)

    @property
    def ratios(self) -> list[float]:
        d = self.differences
        return [d[i + 1] / d[i] if d[i] > 0 else 0.0 for i in range(len(d) - 1)]

    def trajectory(self, n: int) -> list[SpectralState]:
        return [_unpack(w, self.grid, float(t)) for t, w in zip(self.times, self.iterates[n])]


def _duhamel_matrix(times: np.ndarray, nodes: int) -> np.ndarray:
    """S[j, m] = Gauss-Legendre approximation of int_0^{t_j} l_m(t) dt, with l_m
    the Lagrange basis on ``times``."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    basis = BarycentricInterpolator(times, np.eye(len(times)))
    S = np.zeros((len(times), len(times)))
    for j, t in enumerate(times):
        if t == 0:
            continue
        tq = 0.5 * t * (x + 1)
        S[j] = 0.5 * t * (w @ basis(tq))
    return S


def picard_iterate(
    u0v0: SpectralState,
    coeffs: SystemCoefficients,
    delta: float,
    n_iters: int,
    quadrature_nodes: int = 12,
    dealias: bool = True,
    lifespan_guard: tuple[float, float] | None = (0.1, 4.0),
) -> PicardResult:
    """Picard iterates of the Duhamel map on [0, delta].

    Iterate 0 is the free flow; iterate n is

        w_n(t) = e^{tL} (w_0 + int_0^t e^{-t'L} N(w_{n-1}(t')) dt'),

    evaluated at t = 0, the Gauss-Legendre nodes of [0, delta], and delta.
    The inner integral uses Gauss-Legendre quadrature on [0, t] with the
    integrand interpolated from those times.  ``differences[n-1]`` is
    max_t (|u_n - u_{n-1}| + |v_n - v_{n-1}|) in L2.

    ``lifespan_guard=(c0, a)`` rejects delta beyond c0 (1 + |u0| + |v0|)^-a;
    pass None to scan freely.
    """
    if quadrature_nodes < 8:
        raise ValueError("quadrature_nodes must be >= 8")
    if n_iters < 1:
        raise ValueError("n_iters must be >= 1")
    if not delta > 0:
        raise ValueError("delta must be positive")
    if lifespan_guard is not None:
        limit = lifespan(u0v0.u_hat.l2_norm(), u0v0.v_hat.l2_norm(), *lifespan_guard)
        if delta > limit * (1 + 1e-12):
            raise ValueError(f"delta={delta:g} exceeds lifespan {limit:g} for (c0, a)={lifespan_guard}")
    state = dealias_state(u0v0) if dealias else u0v0
    grid = state.grid
    x, _ = np.polynomial.legendre.leggauss(quadrature_nodes)
    times = np.concatenate([[0.0], 0.5 * delta * (x + 1), [delta]])
    S = _duhamel_matrix(times, quadrature_nodes)
    xi3 = grid.odd_wavenumbers ** 3
    lam = 1j * np.stack([coeffs.a1 * xi3, coeffs.a2 * xi3])
    prop = _symmetrize(np.exp(lam[None] * times[:, None, None]))  # (T, 2, n)
    back = np.conj(prop)
    N = make_nonlinearity(coeffs, grid, dealias)
    w0 = _pack(state)

    current = prop * w0
    iterates = [current]
    diffs: list[float] = []
    rising = 0
    L = grid.length
    for n in range(1, n_iters):
        integrand = np.stack([back[j] * N(current[j]) for j in range(len(times))])
        nxt = prop * (w0 + np.tensordot(S, integrand, axes=(1, 0)))
        _check_blowup(nxt.reshape(-1, grid.n_points), delta)
        dn = np.sqrt(L * np.sum(np.abs(nxt - current) ** 2, axis=-1)).sum(axis=-1).max()
        diffs.append(float(dn))
        iterates.append(nxt)
        current = nxt
        if len(diffs) >= 2 and diffs[-1] > diffs[-2]:
            rising += 1
            if rising >= 3:
                raise ContractionFailureError(
                    f"Picard differences grew 3 times in a row at delta={delta:g}", delta, diffs
                )
        else:
            rising = 0
    return PicardResult(grid, delta, times, iterates, diffs)
