"""Time-to-result benchmark scoring.

Turns raw training logs into per-workload times to target, applies a tuning
ruleset and held-out gating, and scores submissions by the area under their
performance profiles. Also ships the supporting analyses: target setting from
reruns, the shared-hyperparameter degradation metric, bootstrap tuning
simulation, transfer ranks, OptList construction and cost estimates.
"""
from .analysis import (
    CostEstimate,
    PhiResult,
    ValidationTable,
    estimate_costs,
    phi_metric,
    simulate_tuning,
    transfer_ranks,
)
from .arbiter import BenchmarkResult, score_benchmark
from .core import (
    INF,
    BenchmarkConfig,
    Clock,
    EvalEvent,
    ExtendedTime,
    Metric,
    MetricDirection,
    RulesetConfig,
    ScoreMatrix,
    TrialRecord,
    TrialStatus,
    WorkloadSpec,
    validate_benchmark_config,
)
from .curves import MetricSeries, best_so_far, crossings, time_to_target
from .rulesets import score_study_external, score_study_selftuning, score_workload
from .schedules import WarmupCosineSpec, WarmupLinearConstantSpec, warmup_cosine, warmup_linear_constant
from .scoring import (
    BenchmarkScore,
    PerformanceProfile,
    apply_heldout_gate,
    benchmark_score,
    geometric_mean_time,
    performance_profile,
    performance_ratios,
)
from .searchspace import (
    BoxSearchSpace,
    Discrete,
    Fixed,
    LinearUniform,
    LogUniform,
    OptList,
    build_optlist,
    sample_optlist,
    sample_quasirandom,
)
from .targets import RerunOutcome, select_best_config, target_setting_budget, test_target, validation_target

__version__ = "0.1.0"

__all__ = [
    "BenchmarkConfig",
    "BenchmarkResult",
    "BenchmarkScore",
    "BoxSearchSpace",
    "Clock",
    "CostEstimate",
    "Discrete",
    "EvalEvent",
    "ExtendedTime",
    "Fixed",
    "INF",
    "LinearUniform",
    "LogUniform",
    "Metric",
    "MetricDirection",
    "MetricSeries",
    "OptList",
    "PerformanceProfile",
    "PhiResult",
    "RerunOutcome",
    "RulesetConfig",
    "ScoreMatrix",
    "TrialRecord",
    "TrialStatus",
    "ValidationTable",
    "WarmupCosineSpec",
    "WarmupLinearConstantSpec",
    "WorkloadSpec",
    "apply_heldout_gate",
    "benchmark_score",
    "best_so_far",
    "build_optlist",
    "crossings",
    "estimate_costs",
    "geometric_mean_time",
    "performance_profile",
    "performance_ratios",
    "phi_metric",
    "sample_optlist",
    "sample_quasirandom",
    "score_benchmark",
    "score_study_external",
    "score_study_selftuning",
    "score_workload",
    "select_best_config",
    "simulate_tuning",
    "target_setting_budget",
    "test_target",
    "time_to_target",
    "transfer_ranks",
    "validate_benchmark_config",
    "validation_target",
    "warmup_cosine",
    "warmup_linear_constant",
]
