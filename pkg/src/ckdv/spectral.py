"""Periodic Fourier grid, transforms, multipliers and 2/3-rule dealiasing.

Coefficients are stored as full complex arrays in FFT order (k = 0, 1, ...,
n/2, -n/2+1, ..., -1) with the normalisation

    u_hat_k = (1/L) * integral_0^L u(x) exp(-i xi_k x) dx,   xi_k = 2 pi k / L,

so the coefficient of exp(i xi_k x) is 1 and Parseval reads
``L * sum |u_hat_k|**2 == integral |u|**2``.  The Nyquist mode is stored at
k = +n/2; odd multipliers (derivative, dispersion) treat its wavenumber as 0
so that real fields stay real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

OVERFLOW_EXPONENT = 700.0
HERMITIAN_TOL = 1e-12


class SymmetryError(ValueError):
    """Field is not Hermitian-symmetric, so it does not represent real data."""


class GridMismatchError(ValueError):
    pass


class MultiplierOverflowError(OverflowError):
    """exp(sigma |xi|) would exceed the representable range on this grid."""


# diagnostic: number of inverse transforms that discarded a nonzero imaginary residue
imag_residue_discards = 0


@dataclass(frozen=True)
class GridSpec:
    n_points: int = 1024
    length: float = 64 * math.pi

    def __post_init__(self):
        n = self.n_points
        if n < 16 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 16, got {n}")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ValueError(f"length must be positive, got {self.length}")

    @cached_property
    def k(self) -> np.ndarray:
        """Integer mode numbers in storage order, Nyquist as +n/2."""
        k = np.fft.fftfreq(self.n_points, 1.0 / self.n_points)
        k[self.n_points // 2] = self.n_points // 2
        return k.astype(np.int64)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return 2 * np.pi / self.length * self.k

    @cached_property
    def odd_wavenumbers(self) -> np.ndarray:
        xi = self.wavenumbers.copy()
        xi[self.n_points // 2] = 0.0
        return xi

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.n_points) * (self.length / self.n_points)

    @property
    def dxi(self) -> float:
        return 2 * np.pi / self.length

    @property
    def max_abs_wavenumber(self) -> float:
        return math.pi * self.n_points / self.length

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        return np.abs(self.k) <= self.n_points // 3


@dataclass(frozen=True, eq=False)
class SpectralField:
    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.n_points,):
            raise ValueError(f"expected {self.grid.n_points} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", c)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_grid(self.grid, other.grid)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_grid(self.grid, other.grid)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())

    def l2_norm(self) -> float:
        return math.sqrt(self.grid.length * float(np.sum(np.abs(self.coeffs) ** 2)))

    def hermitian_defect(self) -> float:
        return hermitian_defect(self.coeffs)

    @classmethod
    def zeros(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.n_points, dtype=np.complex128))


@dataclass(frozen=True, eq=False)
class SpectralState:
    u_hat: SpectralField
    v_hat: SpectralField
    time: float = 0.0

    def __post_init__(self):
        _check_grid(self.u_hat.grid, self.v_hat.grid)

    @property
    def grid(self) -> GridSpec:
        return self.u_hat.grid

    def with_fields(self, u: np.ndarray, v: np.ndarray, time: float | None = None) -> "SpectralState":
        g = self.grid
        return SpectralState(SpectralField(g, u), SpectralField(g, v),
                             self.time if time is None else time)

    @classmethod
    def zeros(cls, grid: GridSpec, time: float = 0.0) -> "SpectralState":
        return cls(SpectralField.zeros(grid), SpectralField.zeros(grid), time)


def _check_grid(a: GridSpec, b: GridSpec) -> None:
    if a != b:
        raise GridMismatchError(f"grid mismatch: {a} vs {b}")


def hermitian_defect(c: np.ndarray) -> float:
    """max |c_{-k} - conj(c_k)| relative to max |c| (0 for the zero array)."""
    scale = float(np.max(np.abs(c))) if c.size else 0.0
    if scale == 0.0:
        return 0.0
    mirrored = np.conj(np.roll(c[::-1], 1))
    return float(np.max(np.abs(c - mirrored))) / scale


# -- transforms ---------------------------------------------------------------

def to_physical(c: np.ndarray) -> np.ndarray:
    """Fast inverse for arrays known to be Hermitian (no checks)."""
    n = c.shape[-1]
    return np.fft.irfft(c[..., : n // 2 + 1], n) * n


def to_spectral(values: np.ndarray) -> np.ndarray:
    """Fast forward transform of real samples; the result is exactly Hermitian."""
    n = values.shape[-1]
    half = np.fft.rfft(values) / n
    out = np.empty(values.shape[:-1] + (n,), dtype=np.complex128)
    out[..., : n // 2 + 1] = half
    out[..., n // 2 + 1:] = np.conj(half[..., 1: n // 2][..., ::-1])
    return out


def forward_transform(values, grid: GridSpec) -> SpectralField:
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (grid.n_points,):
        raise ValueError(f"expected {grid.n_points} samples, got shape {values.shape}")
    return SpectralField(grid, to_spectral(values))


def inverse_transform(field: SpectralField, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Physical samples of a Hermitian field.

    Imaginary residue within ``tol`` (relative) is dropped and counted in
    ``imag_residue_discards``; anything larger raises SymmetryError.
    """
    global imag_residue_discards
    c = field.coeffs
    values = np.fft.ifft(c) * field.grid.n_points
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    residue = float(np.max(np.abs(values.imag)))
    if scale > 0 and residue > tol * scale:
        raise SymmetryError(
            f"imaginary residue {residue:.3e} exceeds {tol:g} x {scale:.3e}; field is not Hermitian"
        )
    if residue > 0:
        imag_residue_discards += 1
    return values.real.copy()


# -- multipliers --------------------------------------------------------------

Multiplier = Callable[[GridSpec], np.ndarray]


def multiplier_values(m, grid: GridSpec) -> np.ndarray:
    vals = m(grid) if callable(m) else np.asarray(m)
    vals = np.broadcast_to(np.asarray(vals, dtype=np.complex128), (grid.n_points,))
    if not np.all(np.isfinite(vals)):
        raise ValueError("multiplier is not finite on every grid wavenumber")
    return vals


def apply_multiplier(field: SpectralField, m) -> SpectralField:
    """Coefficient-wise product with ``m``: a callable grid -> array, or an array."""
    return SpectralField(field.grid, field.coeffs * multiplier_values(m, field.grid))


def derivative(order: int = 1) -> Multiplier:
    def m(grid: GridSpec) -> np.ndarray:
        return (1j * grid.odd_wavenumbers) ** order
    return m


def check_gevrey_exponent(sigma: float, grid: GridSpec) -> None:
    if sigma * grid.max_abs_wavenumber > OVERFLOW_EXPONENT:
        raise MultiplierOverflowError(
            f"sigma*max|xi| = {sigma * grid.max_abs_wavenumber:.1f} exceeds {OVERFLOW_EXPONENT}"
        )


def gevrey_weight(sigma: float) -> Multiplier:
    """exp(sigma |xi|)."""
    def m(grid: GridSpec) -> np.ndarray:
        check_gevrey_exponent(sigma, grid)
        return np.exp(sigma * np.abs(grid.wavenumbers))
    return m


def sobolev_weight(s: float) -> Multiplier:
    """(1 + |xi|)**s."""
    def m(grid: GridSpec) -> np.ndarray:
        return (1.0 + np.abs(grid.wavenumbers)) ** s
    return m


def dispersion_phase(a: float, t: float) -> Multiplier:
    """exp(i a xi^3 t): the free flow of u_t + a u_xxx = 0 over time t."""
    def m(grid: GridSpec) -> np.ndarray:
        return np.exp(1j * a * grid.odd_wavenumbers ** 3 * t)
    return m


def dealias(field: SpectralField) -> SpectralField:
    """2/3 rule: zero every mode with |k| > n/3."""
    return SpectralField(field.grid, np.where(field.grid.dealias_mask, field.coeffs, 0.0))


def dealias_state(state: SpectralState) -> SpectralState:
    return SpectralState(dealias(state.u_hat), dealias(state.v_hat), state.time)


def product(a: SpectralField, b: SpectralField, dealiased: bool = True) -> SpectralField:
    """Pseudospectral product of two real fields."""
    _check_grid(a.grid, b.grid)
    c = to_spectral(to_physical(a.coeffs) * to_physical(b.coeffs))
    out = SpectralField(a.grid, c)
    return dealias(out) if dealiased else out
