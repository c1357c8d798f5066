from .bounds import BoundConstants, BoundsReport, bound_constants, check_bounds
from .convergence import ConvergenceReport, convergence_study, fit_line, fit_rate, pairwise_rates
from .norms import ErrorReport, error_norms, pl_norms, projection_errors
from .weak import Bump, exact_weak_residual, weak_residual

__all__ = [
    "BoundConstants",
    "BoundsReport",
    "bound_constants",
    "check_bounds",
    "ConvergenceReport",
    "convergence_study",
    "fit_line",
    "fit_rate",
    "pairwise_rates",
    "ErrorReport",
    "error_norms",
    "pl_norms",
    "projection_errors",
    "Bump",
    "exact_weak_residual",
    "weak_residual",
]
