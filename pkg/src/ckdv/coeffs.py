"""Coupled KdV-KdV system family and its admissibility classifier.

The family is

    u_t + a1 u_xxx = c11 u u_x + c12 v v_x
    v_t + a2 v_xxx = c21 u_x v + c22 u v_x

with a1 * a2 != 0.  Majda-Biello and Hirota-Satsuma are presets.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class InvalidParameterError(ValueError):
    """Raised when system coefficients violate a1 a2 != 0 or are not finite."""


class Regime(enum.Enum):
    NEGATIVE_RATIO = "NegativeRatio"
    MID_RATIO = "MidRatio"
    UNIT_RATIO = "UnitRatio"
    LARGE_RATIO = "LargeRatio"


ALL_ESTIMATES = frozenset({"comm0", "comm1", "comm2", "comm3", "comm4"})

# bilinear estimates available per regime
_ESTIMATES = {
    Regime.NEGATIVE_RATIO: ALL_ESTIMATES,
    Regime.MID_RATIO: frozenset({"comm0"}),
    Regime.UNIT_RATIO: frozenset({"comm0", "comm1", "comm2"}),
    Regime.LARGE_RATIO: ALL_ESTIMATES,
}

_CONSTRAINTS = {
    Regime.NEGATIVE_RATIO: (),
    Regime.MID_RATIO: ("c12 == 0", "c21 == 0", "c22 == 0"),
    Regime.UNIT_RATIO: ("c21 == c22",),
    Regime.LARGE_RATIO: (),
}


@dataclass(frozen=True)
class SystemCoefficients:
    a1: float
    a2: float
    c11: float
    c12: float
    c21: float
    c22: float

    def __post_init__(self):
        values = self.as_tuple()
        if not all(math.isfinite(x) for x in values):
            raise InvalidParameterError(f"coefficients must be finite, got {values}")
        if self.a1 == 0 or self.a2 == 0:
            raise InvalidParameterError(
                f"dispersion coefficients must satisfy a1a2 ≠ 0 (a1={self.a1}, a2={self.a2})"
            )

    def as_tuple(self) -> tuple[float, float, float, float, float, float]:
        return (self.a1, self.a2, self.c11, self.c12, self.c21, self.c22)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(("a1", "a2", "c11", "c12", "c21", "c22"), self.as_tuple()))

    @property
    def ratio(self) -> float:
        return self.a2 / self.a1

    @property
    def is_linear(self) -> bool:
        return self.c11 == self.c12 == self.c21 == self.c22 == 0


@dataclass(frozen=True)
class RegimeClass:
    ratio: float
    regime: Regime
    admissible: bool
    required_constraints: tuple[str, ...] = ()
    available_estimates: frozenset[str] = field(default_factory=frozenset)

    def summary(self) -> str:
        rule = ", ".join(self.required_constraints) or "arbitrary c_ij"
        verdict = "admissible" if self.admissible else "NOT admissible"
        return f"a2/a1 = {self.ratio:g}: {self.regime.value} ({rule}) -> {verdict}"


def make_majda_biello(a2: float) -> SystemCoefficients:
    """Majda-Biello system: a1 = 1, c11 = 0, c12 = c21 = c22 = -1."""
    if a2 == 0:
        raise InvalidParameterError("Majda-Biello requires a2 ≠ 0 (a1a2 ≠ 0)")
    return SystemCoefficients(1.0, float(a2), 0.0, -1.0, -1.0, -1.0)


def make_hirota_satsuma(a1: float, c12: float) -> SystemCoefficients:
    """Hirota-Satsuma system: a2 = 1, c11 = -6 a1, c21 = 0, c22 = -3."""
    if a1 == 0:
        raise InvalidParameterError("Hirota-Satsuma requires a1 ≠ 0 (a1a2 ≠ 0)")
    return SystemCoefficients(float(a1), 1.0, -6.0 * a1, float(c12), 0.0, -3.0)


def regime_of(ratio: float) -> Regime:
    # ratio == 4 belongs to the mid band
    if ratio < 0:
        return Regime.NEGATIVE_RATIO
    if ratio == 1:
        return Regime.UNIT_RATIO
    if ratio <= 4:
        return Regime.MID_RATIO
    return Regime.LARGE_RATIO


def classify(coeffs: SystemCoefficients) -> RegimeClass:
    """Place a system in its dispersion-ratio regime and decide admissibility.

    Coefficient equalities are exact comparisons of the stored floats.
    """
    ratio = coeffs.ratio
    regime = regime_of(ratio)
    if regime is Regime.MID_RATIO:
        admissible = coeffs.c12 == 0 and coeffs.c21 == 0 and coeffs.c22 == 0
    elif regime is Regime.UNIT_RATIO:
        admissible = coeffs.c21 == coeffs.c22
    else:
        admissible = True
    return RegimeClass(
        ratio=ratio,
        regime=regime,
        admissible=admissible,
        required_constraints=_CONSTRAINTS[regime],
        available_estimates=_ESTIMATES[regime],
    )


def is_divergence_form(coeffs: SystemCoefficients) -> bool:
    return coeffs.c21 == coeffs.c22


def invariant_weight(coeffs: SystemCoefficients) -> float | None:
    """Weight eta making int(u^2 + eta v^2) dx conserved, or None.

    Along smooth decaying solutions

        1/2 d/dt int u^2 = c12 int u v v_x
        1/2 d/dt int v^2 = (c22 - 2 c21) int u v v_x

    so the cubic terms cancel when c12 + eta (c22 - 2 c21) = 0.  For
    Majda-Biello this gives eta = +1 and for Hirota-Satsuma eta = +c12/3;
    the sign is confirmed numerically by ``check_quadratic_invariant``.
    """
    denom = coeffs.c22 - 2.0 * coeffs.c21
    if denom == 0:
        return 0.0 if coeffs.c12 == 0 else None
    eta = -coeffs.c12 / denom
    return eta + 0.0  # normalise -0.0
