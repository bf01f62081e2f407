"""Target setting from rerun statistics.

The recipe: pick the best of many tuning trials by validation metric, rerun it
under several seeds, take the median best validation value as the validation
target, then take the worst test value among the reruns that reached it as the
test target. Target-setting runs use 0.75 of the scoring budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import Clock, ExtendedTime, MetricDirection, TrialRecord, TrialStatus
from .errors import EmptyReruns, NoCompletedTrials, NoQualifyingReruns

TARGET_SETTING_FRACTION = 0.75


@dataclass(frozen=True)
class RerunOutcome:
    seed_index: int
    best_validation: float
    best_test: float

    def __post_init__(self):
        for name in ("best_validation", "best_test"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)


def best_validation(trial: TrialRecord, direction: MetricDirection,
                    budget: ExtendedTime = None, clock: Clock = Clock.RUNTIME) -> float:
    """Best validation value of a trial over its in-budget events (NaN if none)."""
    limit = math.inf if budget is None else ExtendedTime.coerce(budget).as_float()
    vals = [ev.validation_metric for ev in trial.events if ev.clock(clock) <= limit]
    return float(direction.best(vals)) if vals else float("nan")


def select_best_config(trials: Sequence[TrialRecord], direction: MetricDirection,
                       budget: ExtendedTime = None, clock: Clock = Clock.RUNTIME) -> tuple:
    """Trial with the best best-so-far validation value.

    Only Completed trials compete. Ties go to the lowest ``trial_index``.

    Returns
    -------
    (int, float)
        The winning ``trial_index`` and its best validation value.
    """
    direction = MetricDirection.parse(direction)
    best_idx, best_val = None, None
    for trial in sorted(trials, key=lambda t: t.trial_index):
        if trial.status is not TrialStatus.COMPLETED:
            continue
        v = best_validation(trial, direction, budget, clock)
        if math.isnan(v):
            continue
        if best_val is None or direction.better(v, best_val):
            best_idx, best_val = trial.trial_index, v
    if best_idx is None:
        raise NoCompletedTrials("no completed trial with an in-budget evaluation")
    return best_idx, best_val


def rerun_outcome(trial: TrialRecord, direction: MetricDirection, seed_index: int = None,
                  budget: ExtendedTime = None, clock: Clock = Clock.RUNTIME) -> RerunOutcome:
    """Summarize one rerun by its best validation and best test values.

    Both are running extrema over the in-budget events, taken independently.
    """
    limit = math.inf if budget is None else ExtendedTime.coerce(budget).as_float()
    events = [ev for ev in trial.events if ev.clock(clock) <= limit]
    tests = [ev.test_metric for ev in events if ev.test_metric is not None]
    if not events or not tests:
        raise ValueError(f"trial {trial.key} has no in-budget validation/test values")
    return RerunOutcome(
        trial.study_index if seed_index is None else seed_index,
        direction.best([ev.validation_metric for ev in events]),
        direction.best(tests),
    )


def validation_target(reruns: Iterable[RerunOutcome], direction: MetricDirection = None) -> float:
    """Sample median of the reruns' best validation values.

    For an even count this is the mean of the two middle order statistics,
    which is what ``numpy.median`` computes. ``direction`` is accepted for
    symmetry with :func:`test_target`; the median does not depend on it.
    """
    vals = [r.best_validation for r in reruns]
    if not vals:
        raise EmptyReruns("validation_target needs at least one rerun")
    return float(np.median(vals))


def test_target(reruns: Iterable[RerunOutcome], validation_target: float,
                direction: MetricDirection) -> float:
    """Worst best-test value among reruns that meet ``validation_target``."""
    direction = MetricDirection.parse(direction)
    tests = [r.best_test for r in reruns if direction.meets(r.best_validation, validation_target)]
    if not tests:
        raise NoQualifyingReruns(f"no rerun meets the validation target {validation_target}")
    return float(direction.worst(tests))


# not a test function
test_target.__test__ = False


def target_setting_budget(max_runtime: float) -> float:
    if not max_runtime > 0:
        raise ValueError(f"max_runtime must be > 0, got {max_runtime}")
    return TARGET_SETTING_FRACTION * max_runtime


def set_targets(reruns: Sequence[RerunOutcome], direction: MetricDirection) -> tuple:
    """``(validation_target, test_target)`` from one workload's reruns."""
    v = validation_target(reruns, direction)
    return v, test_target(reruns, v, direction)
