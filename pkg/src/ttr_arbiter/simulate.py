"""Synthetic training curves and mock competitions.

Curves follow ``asymptote + amplitude * exp(-rate * step)`` plus Gaussian
noise. This is enough to make runs cross each other and to make target times
depend on the budget, while every noiseless quantity stays analytic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .arbiter import BenchmarkResult, score_benchmark
from .core import BenchmarkConfig, EvalEvent, MetricDirection, TrialRecord, WorkloadSpec
from .searchspace import OptList, sample_points


@dataclass(frozen=True)
class CurveModel:
    """Parameters of one synthetic metric curve.

    ``test_offset`` shifts the test metric relative to the validation metric
    (the noise is shared), which lets a run hit one target but not the other.
    """

    asymptote: float
    amplitude: float
    rate: float
    noise_scale: float = 0.0
    direction: MetricDirection = MetricDirection.MINIMIZE
    test_offset: float = 0.0

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be > 0, got {self.rate}")
        if self.noise_scale < 0:
            raise ValueError(f"noise_scale must be >= 0, got {self.noise_scale}")
        object.__setattr__(self, "direction", MetricDirection.parse(self.direction))

    def mean(self, step):
        return self.asymptote + self.amplitude * np.exp(-self.rate * np.asarray(step, dtype=float))


def _seed_int(*entropy) -> int:
    return int(np.random.SeedSequence([int(e) for e in entropy]).generate_state(1)[0])


def generate_trial(model: CurveModel, eval_interval: int, num_steps: int, seconds_per_step: float,
                   seed: int, workload_id: str = "w", study_index: int = 0, trial_index: int = 0,
                   submission_id: str = "", point: Optional[dict] = None) -> TrialRecord:
    """One trial with evals at every multiple of ``eval_interval`` up to ``num_steps``."""
    if not 1 <= eval_interval <= num_steps:
        raise ValueError(f"need 1 <= eval_interval <= num_steps, got {eval_interval}, {num_steps}")
    steps = np.arange(eval_interval, num_steps + 1, eval_interval)
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, model.noise_scale, size=steps.size) if model.noise_scale > 0 else np.zeros(steps.size)
    val = model.mean(steps) + noise
    test = val + model.test_offset
    events = tuple(
        EvalEvent(int(s), float(s) * seconds_per_step, float(v), float(t))
        for s, v, t in zip(steps, val, test)
    )
    return TrialRecord(workload_id, study_index, trial_index, point or {}, events,
                       submission_id=submission_id)


@dataclass(frozen=True)
class MockSubmission:
    """A submission described by how its curves depend on the hyperparameters.

    ``family(point, workload)`` returns the curve for a trial. ``space`` is
    used when the config has no search space for this submission.
    ``seconds_per_step`` scales the wall clock relative to the budget: 1.0
    means the final eval lands exactly on the workload's budget.
    """

    id: str
    family: Callable[[dict, WorkloadSpec], CurveModel]
    space: object = None
    seconds_per_step: float = 1.0


@dataclass(frozen=True)
class MockCompetition:
    matrix: object
    leaderboard: tuple
    trials: tuple
    result: BenchmarkResult = field(repr=False)

    def __iter__(self):
        return iter((self.matrix, self.leaderboard))


def run_mock_competition(config: BenchmarkConfig, submissions: Sequence[MockSubmission], seed: int,
                         num_steps: int = 1000, evals: int = 20) -> MockCompetition:
    """Generate logs for every submission, workload, study and trial, then score them.

    Each trial's noise seed is derived from ``(seed, workload index, study,
    trial)`` and each study's hyperparameter sample from ``(seed, workload
    index, study)``. Submissions therefore share random numbers, so two
    submissions with the same curve family and search space score the same.
    """
    rs = config.ruleset
    trials = []
    for sub in submissions:
        space = config.search_spaces.get(sub.id, sub.space)
        for wi, w in enumerate(config.workloads):
            n_steps = w.max_steps or num_steps
            interval = max(1, n_steps // evals)
            sec_per_step = w.max_runtime * rs.budget_multiplier / n_steps * sub.seconds_per_step
            for study in range(rs.studies):
                n_trials = rs.trials_per_study
                if space is None:
                    points = [{} for _ in range(n_trials)]
                else:
                    count = min(n_trials, len(space)) if isinstance(space, OptList) else n_trials
                    points = sample_points(space, count, _seed_int(seed, wi, study))
                for ti, point in enumerate(points):
                    model = sub.family(point, w)
                    trials.append(generate_trial(
                        model, interval, n_steps, sec_per_step, _seed_int(seed, wi, study, ti),
                        w.id, study, ti, sub.id, point))
    result = score_benchmark(config, trials, [s.id for s in submissions])
    return MockCompetition(result.gated, result.leaderboard, tuple(trials), result)
