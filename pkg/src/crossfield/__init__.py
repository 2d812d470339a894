"""Relativistic tunnel-ionization rates in a constant crossed field.

Evaluates the ionization rate of hydrogen-like (and, via externally
supplied bound-state parameters, arbitrary) atomic ions in a constant
crossed electromagnetic field, in two independent algebraic forms, and
ships the machinery to certify their equivalence, their limits and their
parameter scalings.  See ``crossfield.cli`` for the command-line surface.
"""

__version__ = "0.1.0"

from .constants import (
    ALPHA_INVERSE,
    CONSTANTS_VERSION,
    PION_ELECTRON_MASS_RATIO,
    RATE_UNIT_PER_SECOND,
    to_si,
)
from .core import (
    CustomState,
    DomainError,
    ExponentOverflowError,
    HydrogenicState,
    RateBreakdown,
    StateSpec,
    c_lambda_sq_hydrogenic,
    coulomb_factor,
    epsilon_hydrogenic,
    eta_of,
    exp_factor,
    gamma_fn,
    ln_rate_direct_1s,
    preexp_factor,
    rate_direct_1s,
    rate_factored,
    resolve_state,
    xi_of_epsilon,
)
from .refcheck import (
    DeviationReport,
    Fault,
    LimitResidual,
    analytic_log_slope,
    compare_forms,
    log_slope_residual,
    nonrel_limit_residual,
    standard_grid,
)
from .sweep import (
    MassScaling,
    MonotonicityViolation,
    ScanRow,
    ScanSpec,
    ScanTable,
    field_grid,
    monotonicity_report,
    scan_grid,
    schwinger_scaling,
)

__all__ = [
    "__version__",
    "ALPHA_INVERSE",
    "CONSTANTS_VERSION",
    "PION_ELECTRON_MASS_RATIO",
    "RATE_UNIT_PER_SECOND",
    "to_si",
    "CustomState",
    "DomainError",
    "ExponentOverflowError",
    "HydrogenicState",
    "RateBreakdown",
    "StateSpec",
    "c_lambda_sq_hydrogenic",
    "coulomb_factor",
    "epsilon_hydrogenic",
    "eta_of",
    "exp_factor",
    "gamma_fn",
    "ln_rate_direct_1s",
    "preexp_factor",
    "rate_direct_1s",
    "rate_factored",
    "resolve_state",
    "xi_of_epsilon",
    "DeviationReport",
    "Fault",
    "LimitResidual",
    "analytic_log_slope",
    "compare_forms",
    "log_slope_residual",
    "nonrel_limit_residual",
    "standard_grid",
    "MassScaling",
    "MonotonicityViolation",
    "ScanRow",
    "ScanSpec",
    "ScanTable",
    "field_grid",
    "monotonicity_report",
    "scan_grid",
    "schwinger_scaling",
]
