"""Pseudospectral simulator and measurement suite for coupled KdV-KdV systems
and their radius of spatial analyticity."""

from .coeffs import (
    InvalidParameterError,
    Regime,
    RegimeClass,
    SystemCoefficients,
    classify,
    invariant_weight,
    is_divergence_form,
    make_hirota_satsuma,
    make_majda_biello,
)
from .dynamics import (
    BlowUpError,
    ContractionFailureError,
    Scheme,
    StepperConfig,
    TailDominanceError,
    check_quadratic_invariant,
    commutator_terms,
    evolve,
    lifespan,
    nonlinear_rhs,
    picard_iterate,
    step,
)
from .experiments import (
    AnalysisParams,
    acl_defect_scan,
    commutator_inequality_scan,
    commutator_scaling_fit,
    picard_contraction_study,
    predicted_lower_bound_curve,
    radius_decay_experiment,
)
from .gevrey import (
    GevreyParams,
    InsufficientDecayError,
    RadiusEstimate,
    estimate_radius,
    gevrey_norm,
    pair_norm,
    sup_finite_sigma,
)
from .profiles import initial_profile
from .records import RunRecord
from .spectral import (
    GridSpec,
    SpectralField,
    SpectralState,
    apply_multiplier,
    dealias,
    forward_transform,
    inverse_transform,
    product,
)

__version__ = "0.1.0"
