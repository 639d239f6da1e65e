"""Initial-data library: a small closed set of analytic profiles plus
spectrum files."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .records import read_spectrum
from .spectral import GridSpec, SpectralField, SpectralState, to_spectral

PROFILES = ("gaussian", "sech2", "poisson-kernel", "random-analytic", "file")

_KEYS = {
    "gaussian": {"amplitude_u", "amplitude_v", "width_u", "width_v", "center_u", "center_v"},
    "sech2": {"amplitude_u", "amplitude_v", "width_u", "width_v", "center_u", "center_v"},
    "poisson-kernel": {"amplitude_u", "amplitude_v", "sigma0", "r", "center_u", "center_v"},
    "random-analytic": {"amplitude_u", "amplitude_v", "sigma0", "seed"},
    "file": {"path_u", "path_v"},
}

_DEFAULTS = {
    "amplitude_u": 0.5, "amplitude_v": 0.5,
    "width_u": 1.0, "width_v": 1.5,
    "center_u": 0.0, "center_v": 2.0,
    "sigma0": 0.5, "seed": 0,
}


class UnknownProfileError(ValueError):
    pass


def profile_keys(name: str) -> set[str]:
    if name not in _KEYS:
        raise UnknownProfileError(f"unknown profile {name!r}; choose from {', '.join(PROFILES)}")
    return _KEYS[name]


def profile_defaults(name: str) -> dict[str, Any]:
    """Default parameter values for a profile (``r`` and file paths have none)."""
    return {k: _DEFAULTS[k] for k in sorted(profile_keys(name)) if k in _DEFAULTS}


def _physical(shape, grid: GridSpec, amp: float, width: float, center: float) -> np.ndarray:
    x = grid.x - (grid.length / 2 + center)
    if amp == 0:
        return np.zeros(grid.n_points, dtype=np.complex128)
    return to_spectral(amp * shape(x / width))


def _sech2(z):
    return 1.0 / np.cosh(z) ** 2


def _gauss(z):
    return np.exp(-z * z)


def _poisson(grid: GridSpec, amp: float, sigma0: float, center: float) -> np.ndarray:
    xi = grid.wavenumbers
    c = amp * np.exp(-sigma0 * np.abs(xi)) * np.exp(-1j * grid.odd_wavenumbers * (grid.length / 2 + center))
    c[grid.n_points // 2] = c[grid.n_points // 2].real
    return c


def _random_analytic(grid: GridSpec, amp: float, sigma0: float, rng: np.random.Generator) -> np.ndarray:
    n = grid.n_points
    half = n // 2
    phases = rng.uniform(0, 2 * np.pi, half + 1)
    c = np.zeros(n, dtype=np.complex128)
    c[: half + 1] = amp * np.exp(-sigma0 * np.abs(grid.wavenumbers[: half + 1])) * np.exp(1j * phases)
    c[0] = amp
    c[half] = c[half].real
    c[half + 1:] = np.conj(c[1:half][::-1])
    return c


def initial_profile(name: str, params: Mapping[str, Any], grid: GridSpec) -> SpectralState:
    """Build (u0, v0).

    Physical profiles are centred at L/2 + center.  ``poisson-kernel`` has
    coefficients A * r^|xi_k| (r = e^{-sigma0}), so its radius of
    analyticity is exactly -ln r; ``random-analytic`` puts seeded
    unimodular phases under A e^{-sigma0 |xi|}.
    """
    keys = profile_keys(name)
    unknown = set(params) - keys
    if unknown:
        raise ValueError(f"unknown key(s) for profile {name!r}: {', '.join(sorted(unknown))}")
    p = {k: params.get(k, _DEFAULTS.get(k)) for k in keys}
    if name in ("sech2", "gaussian"):
        shape = _sech2 if name == "sech2" else _gauss
        u = _physical(shape, grid, float(p["amplitude_u"]), float(p["width_u"]), float(p["center_u"]))
        v = _physical(shape, grid, float(p["amplitude_v"]), float(p["width_v"]), float(p["center_v"]))
    elif name == "poisson-kernel":
        if params.get("r") is not None:
            r = float(params["r"])
            if not 0 < r < 1:
                raise ValueError("r must lie in (0, 1)")
            sigma0 = -np.log(r)
        else:
            sigma0 = float(p["sigma0"])
        u = _poisson(grid, float(p["amplitude_u"]), sigma0, float(p["center_u"]))
        v = _poisson(grid, float(p["amplitude_v"]), sigma0, float(p["center_v"]))
    elif name == "random-analytic":
        rng_u, rng_v = (np.random.default_rng(s) for s in np.random.SeedSequence(int(p["seed"])).spawn(2))
        u = _random_analytic(grid, float(p["amplitude_u"]), float(p["sigma0"]), rng_u)
        v = _random_analytic(grid, float(p["amplitude_v"]), float(p["sigma0"]), rng_v)
    else:
        for key in ("path_u", "path_v"):
            if key not in params:
                raise ValueError(f"profile 'file' requires {key}")
            if not Path(params[key]).is_file():
                raise FileNotFoundError(f"{key}: {params[key]} does not exist")
        u = read_spectrum(params["path_u"], grid).coeffs
        v = read_spectrum(params["path_v"], grid).coeffs
    return SpectralState(SpectralField(grid, u), SpectralField(grid, v), 0.0)
