"""Build trials with prescribed (t_val, t_test) and brute-force rule checkers."""
import math

from ttr_arbiter.core import INF, EvalEvent, ExtendedTime, MetricDirection, TrialRecord, WorkloadSpec

TARGET = 0.5
WORKLOAD = WorkloadSpec("w", MetricDirection.MINIMIZE, TARGET, TARGET, 1000.0)


def trial_with_times(t_val, t_test, *, trial=0, study=0, horizon=2000.0, submission="s", workload="w"):
    """Trial whose validation/test metrics first meet 0.5 at ``t_val``/``t_test`` (inf = never)."""
    marks = sorted({t for t in (t_val, t_test) if math.isfinite(t)} | {horizon})
    times = [0.5 * marks[0]] + marks if marks[0] > 0 else marks
    events = []
    for i, t in enumerate(times):
        val = 0.4 if t >= t_val else 0.6
        test = 0.4 if t >= t_test else 0.6
        events.append(EvalEvent(i + 1, float(t), val, test))
    return TrialRecord(workload, study, trial, {}, tuple(events), submission_id=submission)


def brute_external(pairs, budget):
    """Select min in-budget t_val (lowest index on ties) and return its in-budget t_test."""
    def clip(t):
        return t if t <= budget else math.inf
    best = None
    for i, (tv, tt) in enumerate(pairs):
        tv = clip(tv)
        if math.isinf(tv):
            continue
        if best is None or tv < best[0]:
            best = (tv, clip(tt))
    return math.inf if best is None else best[1]


def brute_median(xs):
    return sorted(xs)[len(xs) // 2]


def brute_gate(fixed, held, r_max):
    """Direct transcription of the four conditions on float arrays (inf = never)."""
    n = len(fixed)
    best_f = min(fixed)
    elig = [held[i] for i in range(n) if math.isfinite(fixed[i])]
    best_h = min(elig) if elig else math.inf
    out = []
    for i in range(n):
        c1 = math.isfinite(fixed[i])
        c2 = fixed[i] <= r_max * best_f
        c3 = math.isfinite(held[i])
        c4 = held[i] <= r_max * best_h
        out.append(fixed[i] if (c1 and c2 and c3 and c4) else math.inf)
    return out


def as_time(x):
    return INF if math.isinf(x) else ExtendedTime(x)
