import pytest

from ttr_arbiter.core import EvalEvent, MetricDirection, TrialRecord, TrialStatus, WorkloadSpec


def make_trial(times_vals, tests=None, *, study=0, trial=0, workload="w", submission="s",
               status=TrialStatus.COMPLETED, steps=None):
    """Trial from ``[(runtime, val), ...]`` with optional parallel test values.

    Steps default to 1, 2, 3, ... so ordering invariants hold.
    """
    events = []
    for i, (rt, val) in enumerate(times_vals):
        step = steps[i] if steps is not None else i + 1
        test = None if tests is None else tests[i]
        events.append(EvalEvent(step, float(rt), float(val), None if test is None else float(test)))
    return TrialRecord(workload, study, trial, {}, tuple(events), status, submission)


@pytest.fixture
def resnet_like():
    return WorkloadSpec("resnet", MetricDirection.MINIMIZE, 0.22569, 0.3440, 63008.0)
