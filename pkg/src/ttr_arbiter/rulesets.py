"""Tuning rulesets: per-study scoring and the median-over-studies aggregate.

External tuning
    Each study is a batch of trials. The trial that reaches the validation
    target first is selected, and the study scores that trial's time to the
    test target. Both times are measured against the workload's budget.
Self-tuning
    One trial per study, scored by its time to the test target alone, with the
    budget multiplied (3x by default).

A workload's score is the median over studies.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping, Sequence

from .core import (
    INF,
    Clock,
    ExtendedTime,
    Metric,
    RulesetConfig,
    ScoreMatrix,
    TrialRecord,
    WorkloadSpec,
)
from .curves import time_to_target
from .errors import EvenStudyCount, MixedStudies


def trial_times(trial: TrialRecord, workload: WorkloadSpec, budget: ExtendedTime = None,
                clock: Clock = Clock.RUNTIME) -> tuple:
    """``(t_val, t_test)`` for one trial, each its own first-reach time."""
    if budget is None:
        budget = workload.budget(clock)
    t_val = time_to_target(trial, workload.validation_target, workload.direction,
                           Metric.VALIDATION, budget, clock)
    t_test = time_to_target(trial, workload.test_target, workload.direction,
                            Metric.TEST, budget, clock)
    return t_val, t_test


def _check_one_study(trials: Sequence[TrialRecord]):
    keys = {(t.submission_id, t.workload_id, t.study_index) for t in trials}
    if len(keys) > 1:
        raise MixedStudies(f"trials span {len(keys)} studies: {sorted(keys)}")


def select_trial_external(trials: Sequence[TrialRecord], workload: WorkloadSpec,
                          budget: ExtendedTime = None, clock: Clock = Clock.RUNTIME):
    """The trial with the smallest validation time, or None if none reaches it.

    Returns ``(trial, t_val, t_test)`` or ``None``.
    """
    _check_one_study(trials)
    best = None
    for trial in sorted(trials, key=lambda t: t.trial_index):
        t_val, t_test = trial_times(trial, workload, budget, clock)
        if t_val.is_infinite:
            continue
        if best is None or t_val < best[1]:
            best = (trial, t_val, t_test)
    return best


def score_study_external(trials: Sequence[TrialRecord], workload: WorkloadSpec,
                         budget: ExtendedTime = None, clock: Clock = Clock.RUNTIME) -> ExtendedTime:
    """Select by validation time, score by test time.

    Examples
    --------
    Three trials with (t_val, t_test) of (100, 120), (80, 200) and (inf, inf)
    score 200: the second trial wins selection and its test time counts.
    """
    chosen = select_trial_external(trials, workload, budget, clock)
    return INF if chosen is None else chosen[2]


def score_study_selftuning(trial: TrialRecord, workload: WorkloadSpec, multiplier: float = 3.0,
                           clock: Clock = Clock.RUNTIME) -> ExtendedTime:
    """Test-target time of a single trial under a multiplied budget."""
    return time_to_target(trial, workload.test_target, workload.direction, Metric.TEST,
                          workload.budget(clock, multiplier), clock)


def score_workload(study_scores: Sequence) -> ExtendedTime:
    """Median of an odd number of study scores, Infinite sorting last."""
    scores = sorted(ExtendedTime.coerce(s) for s in study_scores)
    if len(scores) % 2 == 0:
        raise EvenStudyCount(f"need an odd number of studies, got {len(scores)}")
    return scores[len(scores) // 2]


def score_study(trials: Sequence[TrialRecord], workload: WorkloadSpec, ruleset: RulesetConfig,
                clock: Clock = Clock.RUNTIME) -> ExtendedTime:
    if not trials:
        return INF
    if ruleset.is_self_tuning:
        _check_one_study(trials)
        if len(trials) != 1:
            raise ValueError(f"self-tuning study has {len(trials)} trials, expected 1")
        return score_study_selftuning(trials[0], workload, ruleset.budget_multiplier, clock)
    budget = workload.budget(clock, ruleset.budget_multiplier)
    return score_study_external(trials, workload, budget, clock)


def group_trials(trials: Iterable[TrialRecord]) -> dict:
    """``{(submission, workload): {study_index: [trials...]}}``."""
    out = defaultdict(lambda: defaultdict(list))
    for t in trials:
        out[(t.submission_id, t.workload_id)][t.study_index].append(t)
    return {k: {s: sorted(v, key=lambda t: t.trial_index) for s, v in sorted(studies.items())}
            for k, studies in out.items()}


def score_submission_workload(studies: Mapping[int, Sequence[TrialRecord]], workload: WorkloadSpec,
                              ruleset: RulesetConfig, clock: Clock = Clock.RUNTIME) -> ExtendedTime:
    """Median over ``ruleset.studies`` studies; a study with no logs scores Infinite."""
    scores = [score_study(studies.get(i, []), workload, ruleset, clock) for i in range(ruleset.studies)]
    return score_workload(scores)


def build_score_matrix(trials: Iterable[TrialRecord], workloads: Sequence[WorkloadSpec],
                       ruleset: RulesetConfig, submissions: Sequence[str] = None,
                       clock: Clock = Clock.RUNTIME) -> ScoreMatrix:
    """Score every (submission, workload) pair present in ``trials``."""
    grouped = group_trials(trials)
    if submissions is None:
        submissions = sorted({s for s, _ in grouped})
    rows = []
    for s in submissions:
        rows.append([score_submission_workload(grouped.get((s, w.id), {}), w, ruleset, clock)
                     for w in workloads])
    return ScoreMatrix(submissions, [w.id for w in workloads], rows)
