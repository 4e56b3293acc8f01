"""Exact QAOA state-preparation overlaps, optimal angles and their concentration in n."""

__version__ = "0.1.0"

from .amplitude import (
    LayerParameters,
    OverlapValue,
    ProblemSize,
    canonicalize,
    overlap,
    overlap_gradient,
    scaled_amplitude,
    symmetry_image,
)
from .analytic import (
    p1_asymptotic,
    p1_closed_approx,
    p1_root,
    p2_asymptotic,
    quadratic_correction,
    stationarity_residuals,
)
from .concentration import (
    concentration_distance,
    concentration_points,
    fit_layer_curves,
    fit_scaling,
    sweep,
    transfer_experiment,
)
from .optimizer import (
    OptimizationResult,
    OptimizerConfig,
    local_maximize,
    multistart_maximize,
    warm_start_maximize,
)
