"""ridelab: pricing and performance analysis of competing two-sided ride-hailing platforms.

The package is organized around one platform's exact stationary analysis
(`bcmp`), its vanishing-impatience limits (`limit`), the passenger split
between two platforms (`wardrop`), game-level solvers (`equilibria`), a
discrete-event simulation oracle (`sim`), and a sweep/report CLI (`cli`).
"""

from .errors import (
    AssumptionViolationError,
    ConfigError,
    DomainError,
    InsufficientDataError,
    RangeError,
    TruncationOverflowError,
    UnsupportedRegimeError,
)
from .bcmp import (
    StationaryDistribution,
    blocking_probability,
    driver_unavailability,
    matching_revenue,
    stationary_waiting_distribution,
)
from .equilibria import (
    BestResponsePath,
    CooperationComparison,
    CycleVerification,
    EquilibriumOutcome,
    best_response_dynamics,
    cooperation_comparison,
    duopoly_B_equilibrium,
    duopoly_D_equilibrium,
    limit_B_payoff,
    limit_D_payoff,
    monopoly_optimum_exact,
    monopoly_optimum_limit,
    verify_equilibrium_cycle,
)
from .limit import (
    LimitDuopolyOutcome,
    duopoly_D_payoff,
    limit_B,
    limit_D,
    limit_MR_single,
    limit_WE_MR_B,
)
from .model import (
    DZeroRoot,
    ObjectiveValues,
    PlatformParams,
    PricePolicy,
    ResponseFunction,
    ThresholdSet,
    ValidationReport,
    eval_f_inverse,
    eval_f_prime,
    eval_response,
    objective_values,
    thresholds,
    validate_response_function,
)
from .sim import SimConfig, SimEstimates, simulate_platform
from .wardrop import WardropSplit, solve_WE, we_B_exact, we_D_closed_form

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolationError",
    "ConfigError",
    "DomainError",
    "InsufficientDataError",
    "RangeError",
    "TruncationOverflowError",
    "UnsupportedRegimeError",
    "BestResponsePath",
    "CooperationComparison",
    "CycleVerification",
    "DZeroRoot",
    "EquilibriumOutcome",
    "LimitDuopolyOutcome",
    "ObjectiveValues",
    "PlatformParams",
    "PricePolicy",
    "ResponseFunction",
    "SimConfig",
    "SimEstimates",
    "StationaryDistribution",
    "ThresholdSet",
    "ValidationReport",
    "WardropSplit",
    "best_response_dynamics",
    "blocking_probability",
    "cooperation_comparison",
    "driver_unavailability",
    "duopoly_B_equilibrium",
    "duopoly_D_equilibrium",
    "duopoly_D_payoff",
    "eval_f_inverse",
    "eval_f_prime",
    "eval_response",
    "limit_B",
    "limit_B_payoff",
    "limit_D",
    "limit_D_payoff",
    "limit_MR_single",
    "limit_WE_MR_B",
    "matching_revenue",
    "monopoly_optimum_exact",
    "monopoly_optimum_limit",
    "objective_values",
    "simulate_platform",
    "solve_WE",
    "stationary_waiting_distribution",
    "thresholds",
    "validate_response_function",
    "verify_equilibrium_cycle",
    "we_B_exact",
    "we_D_closed_form",
    "__version__",
]
