"""The full scoring pipeline: logs -> study scores -> gated matrix -> profiles -> scores."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import BenchmarkConfig, Clock, ScoreMatrix, TrialRecord
from .rulesets import build_score_matrix
from .scoring import LeaderboardRow, apply_heldout_gate, benchmark_score, profiles_from_matrix


@dataclass(frozen=True)
class BenchmarkResult:
    raw_fixed: ScoreMatrix
    heldout: Optional[ScoreMatrix]
    gated: ScoreMatrix
    profiles: tuple
    leaderboard: tuple

    @property
    def scores(self) -> dict:
        return {r.submission_id: r.score for r in self.leaderboard}


def score_benchmark(config: BenchmarkConfig, trials: Iterable[TrialRecord],
                    submissions: Optional[Sequence[str]] = None,
                    clock: Clock = Clock.RUNTIME) -> BenchmarkResult:
    """Score every submission found in ``trials`` (or the given ids) under ``config``.

    Fixed workloads are scored with the configured ruleset, gated by their
    held-out variants, and turned into profiles and benchmark scores. Only
    fixed workloads enter the profile.
    """
    trials = list(trials)
    if submissions is None:
        submissions = sorted({t.submission_id for t in trials})
    fixed = build_score_matrix(trials, config.fixed_workloads, config.ruleset, submissions, clock)
    heldout = None
    if config.heldout_workloads:
        heldout = build_score_matrix(trials, config.heldout_workloads, config.ruleset, submissions, clock)
    budgets = {w.id: w.budget(clock, config.ruleset.budget_multiplier) for w in config.workloads}
    gated = apply_heldout_gate(fixed, heldout, config.linkage(), config.r_max, budgets)
    profiles = tuple(profiles_from_matrix(gated))
    rows = [LeaderboardRow(p.submission_id, benchmark_score(p, config.r_max).value, gated.row(p.submission_id))
            for p in profiles]
    rows.sort(key=lambda r: (-r.score, r.submission_id))
    return BenchmarkResult(fixed, heldout, gated, profiles, tuple(rows))
