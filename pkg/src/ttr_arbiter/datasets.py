"""Published reference numbers bundled with the package.

These are the inputs and expected outputs used by the golden tests and the
demos: the eight fixed workloads with their targets and budgets, baseline
times to target in seconds and in steps, the corresponding published scores,
the 20-seed rerun values used for target setting, per-workload optimum pairs
for four optimizer families, and the 20-point Nesterov OptList.
"""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from .core import INF, BenchmarkConfig, ExtendedTime, MetricDirection, RulesetConfig, ScoreMatrix, WorkloadSpec


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    with resources.files(__package__).joinpath("data", name).open() as fh:
        return json.load(fh)


def workload_order() -> list:
    return list(_load("workloads.json")["workload_order"])


def fixed_workloads() -> list:
    """The eight fixed workloads (targets, metric direction, runtime budget)."""
    return [WorkloadSpec(**w) for w in _load("workloads.json")["workloads"]]


def workload_budgets() -> dict:
    return {w.id: w.max_runtime for w in fixed_workloads()}


def benchmark_config(ruleset: RulesetConfig = None) -> BenchmarkConfig:
    return BenchmarkConfig(tuple(fixed_workloads()), ruleset or RulesetConfig.external())


def _matrix(table: dict) -> ScoreMatrix:
    order = _load("baselines.json")["workload_order"]
    subs = list(table)
    rows = [[INF if v == "inf" else ExtendedTime(v) for v in table[s]] for s in subs]
    return ScoreMatrix(subs, order, rows)


def baseline_runtimes() -> ScoreMatrix:
    """Seconds to reach the test target, 15 baselines x 8 workloads."""
    return _matrix(_load("baselines.json")["runtime_s"])


def baseline_steps() -> ScoreMatrix:
    """Steps to reach the test target, 16 baselines x 8 workloads."""
    return _matrix(_load("baselines.json")["steps"])


def published_runtime_scores() -> dict:
    return dict(_load("baselines.json")["runtime_scores"])


def published_steps_scores() -> dict:
    return dict(_load("baselines.json")["steps_scores"])


def rerun_validation_values() -> dict:
    """``{workload: [20 best validation values]}``, sorted ascending."""
    return {k: list(v) for k, v in _load("reruns.json")["best_validation"].items()}


def published_medians() -> dict:
    """``{workload: median}`` as printed, kept as strings to preserve precision."""
    return dict(_load("reruns.json")["median"])


def phi_pairs() -> dict:
    """``{family: [(per-workload optimum, shared optimum, phi_w), ...]}`` in workload order."""
    raw = _load("phi_pairs.json")["entries"]
    return {k: [(e["per_workload_optimal"], e["overall_optimal"], e["phi"]) for e in v] for k, v in raw.items()}


def published_phi() -> dict:
    return dict(_load("phi_pairs.json")["Phi"])


def workload_directions() -> list:
    return [w.direction for w in fixed_workloads()]


def nesterov_optlist() -> list:
    return [dict(p) for p in _load("nesterov_optlist.json")["points"]]


def qualification_workloads() -> list:
    return ["criteo", "ogbg", "wmt"]


__all__ = [
    "MetricDirection", "baseline_runtimes", "baseline_steps", "benchmark_config", "fixed_workloads",
    "nesterov_optlist", "phi_pairs", "published_medians", "published_phi", "published_runtime_scores",
    "published_steps_scores", "qualification_workloads", "rerun_validation_values", "workload_budgets",
    "workload_directions", "workload_order",
]
