"""Correlated-database alignment: detection tests, ML decoding, and bounds."""

from .align import (
    BRUTE_FORCE_CAP,
    AlignmentResult,
    brute_force_decode,
    ml_decode,
    recovery_error_mc,
    recovery_to_detection,
    score_matrix,
)
from .assignment import AssignmentSolution, max_assignment
from .bounds import (
    BOUND_KINDS,
    BoundCurvePoint,
    TruncationSchedule,
    curve_points,
    detection_ach_risk,
    g_fa,
    g_md,
    invert_for_rho2,
    minimize_two_exponent,
    recovery_ach_perr,
    recovery_conv_perr,
    truncated_converse_risk,
    truncation_schedule,
    unconditional_converse_risk,
)
from .core import (
    CycleType,
    MCEstimate,
    Permutation,
    ProblemParams,
    SeedSpec,
    cycle_decompose,
    cycle_type_count,
    enumerate_cycle_types,
    prob_fixed_points,
    uniform_permutation,
)
from .detect import (
    RiskEstimate,
    monte_carlo_risk,
    nominal_threshold,
    optimal_gamma,
    sip_statistic,
    threshold_test,
)
from .errors import (
    ConditionViolatedError,
    CorralignError,
    DomainError,
    InvalidAlternateError,
    InversionUndefinedError,
    SizeCapError,
)
from .gen import DatabasePair, sample_alt, sample_null
from .oracle import (
    CheckResult,
    VerifyReport,
    exact_second_moment,
    log_likelihood_ratio,
    mc_second_moment,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "AssignmentSolution",
    "BOUND_KINDS",
    "BRUTE_FORCE_CAP",
    "BoundCurvePoint",
    "CheckResult",
    "ConditionViolatedError",
    "CorralignError",
    "CycleType",
    "DatabasePair",
    "DomainError",
    "InvalidAlternateError",
    "InversionUndefinedError",
    "MCEstimate",
    "Permutation",
    "ProblemParams",
    "RiskEstimate",
    "SeedSpec",
    "SizeCapError",
    "TruncationSchedule",
    "VerifyReport",
    "brute_force_decode",
    "curve_points",
    "cycle_decompose",
    "cycle_type_count",
    "detection_ach_risk",
    "enumerate_cycle_types",
    "exact_second_moment",
    "g_fa",
    "g_md",
    "invert_for_rho2",
    "log_likelihood_ratio",
    "max_assignment",
    "mc_second_moment",
    "minimize_two_exponent",
    "ml_decode",
    "monte_carlo_risk",
    "nominal_threshold",
    "optimal_gamma",
    "prob_fixed_points",
    "recovery_ach_perr",
    "recovery_conv_perr",
    "recovery_error_mc",
    "recovery_to_detection",
    "sample_alt",
    "sample_null",
    "score_matrix",
    "sip_statistic",
    "threshold_test",
    "truncated_converse_risk",
    "truncation_schedule",
    "unconditional_converse_risk",
    "uniform_permutation",
    "verify",
]
