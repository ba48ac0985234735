"""Weighted Hardy spaces, Shapiro-Shields functions and polynomial inner functions."""

__version__ = "0.1.0"

from ._accel import BACKEND
from .errors import (
    BoundaryNotAdmissible,
    DegenerateFit,
    HardyError,
    OptimizerDiverged,
    SingularGram,
    TailBoundUnavailable,
    UnsupportedSpace,
    ZeroPolynomial,
)
from .kernels import adaptive_truncation, kernel_derivative_series, kernel_series, kernel_value
from .series import (
    TruncatedSeries,
    blaschke_factor,
    evaluate,
    is_inner,
    moments,
    norm,
    read_coefficients_csv,
    weighted_inner_product,
    write_coefficients_csv,
)
from .shapiro_shields import (
    ShapiroShieldsResult,
    ZeroSet,
    local_order_estimate,
    perturbation_limit,
    projection_oracle,
    regularity_check,
    shapiro_shields,
    shapiro_shields_determinant,
    verify_vanishing,
)
from .theorem_lab import (
    classify_polynomial_inner,
    inner_residual,
    minimize_inner_residual,
    monomial_distance,
    project_onto_shift_span,
    projection_error_curve,
    search_inner_polynomials,
)
from .weights import WeightSequence, space_diagnostics
