"""Run a small synthetic competition end to end and write its reports.

Three submissions with different convergence speeds are tuned with five
studies of eight quasirandom trials on two workloads plus one held-out
variant. Reports go to ``demo_output/`` (or the directory given as the first
argument). Run with ``python3 demos/mock_competition.py``.
"""
import sys
from pathlib import Path

import numpy as np

from ttr_arbiter.core import BenchmarkConfig, MetricDirection, RulesetConfig, WorkloadSpec
from ttr_arbiter.io import write_score_report, write_trial_log
from ttr_arbiter.searchspace import BoxSearchSpace, LogUniform
from ttr_arbiter.simulate import CurveModel, MockSubmission, run_mock_competition

MIN, MAX = MetricDirection.MINIMIZE, MetricDirection.MAXIMIZE


def family(speed):
    """Curves that converge faster near lr = 1e-3 and scale with ``speed``."""
    def curve(point, w):
        sign = 1 if w.direction is MIN else -1
        quality = 1.0 / (1.0 + abs(np.log10(point["lr"]) + 3))
        return CurveModel(w.validation_target - sign * 0.05 * quality, sign * 0.5, speed * 0.006 * quality,
                          0.003, w.direction, test_offset=w.test_target - w.validation_target)
    return curve


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
    space = BoxSearchSpace((LogUniform("lr", 1e-5, 1e-1),))
    config = BenchmarkConfig(
        (WorkloadSpec("lm", MIN, 0.30, 0.32, 3600.0),
         WorkloadSpec("vision", MAX, 0.70, 0.68, 7200.0),
         WorkloadSpec("lm_variant", MIN, 0.30, 0.32, 3600.0, heldout_of="lm")),
        RulesetConfig.external(5, 8),
        search_spaces={"fast": space, "medium": space, "slow": space},
    )
    subs = [MockSubmission("fast", family(2.0)), MockSubmission("medium", family(1.0)),
            MockSubmission("slow", family(0.7))]
    comp = run_mock_competition(config, subs, seed=2024)

    write_trial_log(comp.trials, out / "logs" / "trials.jsonl")
    write_score_report(comp.leaderboard, comp.matrix.workloads, comp.result.profiles, out)
    for row in comp.leaderboard:
        times = ", ".join(f"{w}={t}" for w, t in zip(comp.matrix.workloads, row.times))
        print(f"{row.submission_id:<8} score {row.score:.4f}  ({times})")
    print(f"reports and logs written to {out}/")
