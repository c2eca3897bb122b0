"""Non-parametric message importance: scoring, dominance analysis, coding,
and transmission planning for discrete sources.

The importance of an event with probability p is exp(L(p)) with
L(p) = ln p + (1 - p)/p, and a source's total score is the log-sum of its
event importances. Everything downstream (length allocation, channel
change, loss-distortion, planning) works in the log domain so tiny
probabilities never overflow.
"""
from nmim.analysis import (
    GapReport,
    ThresholdRegime,
    ThresholdReport,
    dominance_thresholds,
    dominance_thresholds_exact,
    merge_events,
    min_gap,
    split_event,
)
from nmim.coding import (
    AllocationProblem,
    AllocationResult,
    ErrorModel,
    allocate_exponent,
    allocate_reciprocal,
    baseline_equal,
    baseline_proportional,
    cap_and_iterate,
    importance_loss,
    oracle_allocate,
)
from nmim.measure import (
    Distribution,
    ImportanceScore,
    log_event_importance,
    log_importance_values,
    nmim,
    nmim_uniform,
    taylor_L,
)
from nmim.sources import (
    SourceKind,
    SourceSpec,
    normal_discrete_source,
    rayleigh_discrete_source,
    uniform_source,
    zipf_source,
)
from nmim.transmission import (
    BscChannel,
    DistortionCurve,
    PlanRegime,
    PsiChange,
    TransmissionPlan,
    binary_entropy,
    delta_plateau,
    distortion_curve,
    dmim,
    inv_binary_entropy,
    plan_max_transmission,
    psi,
    rmim,
    rmim_oracle,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationProblem",
    "AllocationResult",
    "BscChannel",
    "Distribution",
    "DistortionCurve",
    "ErrorModel",
    "GapReport",
    "ImportanceScore",
    "PlanRegime",
    "PsiChange",
    "SourceKind",
    "SourceSpec",
    "ThresholdRegime",
    "ThresholdReport",
    "TransmissionPlan",
    "allocate_exponent",
    "allocate_reciprocal",
    "baseline_equal",
    "baseline_proportional",
    "binary_entropy",
    "cap_and_iterate",
    "delta_plateau",
    "distortion_curve",
    "dmim",
    "dominance_thresholds",
    "dominance_thresholds_exact",
    "importance_loss",
    "inv_binary_entropy",
    "log_event_importance",
    "log_importance_values",
    "merge_events",
    "min_gap",
    "nmim",
    "nmim_uniform",
    "normal_discrete_source",
    "oracle_allocate",
    "plan_max_transmission",
    "psi",
    "rayleigh_discrete_source",
    "rmim",
    "rmim_oracle",
    "split_event",
    "taylor_L",
    "uniform_source",
    "zipf_source",
]
