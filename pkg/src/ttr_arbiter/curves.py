"""Training-curve utilities.

Curves are observed only at eval events, so between events a series is held
at its previous value. Nothing here interpolates or smooths.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import INF, Clock, ExtendedTime, Metric, MetricDirection, TrialRecord, TrialStatus
from .errors import EmptySeries, MissingTestMetric


@dataclass(frozen=True)
class MetricSeries:
    """Ordered ``(x, y)`` observations with a metric direction.

    ``x`` is a step count or a runtime and must be strictly increasing.
    """

    x: tuple
    y: tuple
    direction: MetricDirection = MetricDirection.MINIMIZE

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if len(x) != len(y):
            raise ValueError(f"x has {len(x)} values but y has {len(y)}")
        if any(b <= a for a, b in zip(x, x[1:])):
            raise ValueError("series x values must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "direction", MetricDirection.parse(self.direction))

    @classmethod
    def from_points(cls, points: Sequence[tuple], direction=MetricDirection.MINIMIZE) -> "MetricSeries":
        points = list(points)
        return cls(tuple(p[0] for p in points), tuple(p[1] for p in points), direction)

    @classmethod
    def from_trial(cls, trial: TrialRecord, direction: MetricDirection,
                   metric: Metric = Metric.VALIDATION, clock: Clock = Clock.RUNTIME) -> "MetricSeries":
        """Series of one metric of a trial against its clock.

        Events lacking the requested metric are skipped. Runtime clocks may
        repeat (runtime is only nondecreasing), in which case the later event
        at the same runtime replaces the earlier one only if it is better.
        """
        metric, clock = Metric.parse(metric), Clock.parse(clock)
        xs, ys = [], []
        for ev in trial.events:
            y = ev.validation_metric if metric is Metric.VALIDATION else ev.test_metric
            if y is None:
                continue
            x = ev.clock(clock)
            if xs and x == xs[-1]:
                if direction.better(y, ys[-1]):
                    ys[-1] = y
                continue
            xs.append(x)
            ys.append(y)
        return cls(tuple(xs), tuple(ys), direction)

    def __len__(self):
        return len(self.x)

    @property
    def points(self) -> list:
        return list(zip(self.x, self.y))

    def value_at(self, x: float) -> float:
        """Step-function value at ``x``; NaN before the first observation."""
        i = int(np.searchsorted(self.x, x, side="right")) - 1
        return float("nan") if i < 0 else self.y[i]


def best_so_far(series: MetricSeries) -> MetricSeries:
    """Running best of a series under its direction.

    Examples
    --------
    >>> s = MetricSeries((0, 1, 2, 3), (5, 3, 4, 2))
    >>> best_so_far(s).y
    (5.0, 3.0, 3.0, 2.0)
    """
    if len(series) == 0:
        raise EmptySeries("cannot take best-so-far of an empty series")
    return MetricSeries(series.x, tuple(series.direction.accumulate(series.y).tolist()), series.direction)


def time_to_target(
    trial: TrialRecord,
    target: float,
    direction: MetricDirection,
    metric: Metric = Metric.VALIDATION,
    budget: ExtendedTime = INF,
    clock: Clock = Clock.RUNTIME,
) -> ExtendedTime:
    """Clock value of the first in-budget eval event meeting ``target``.

    Parameters
    ----------
    trial : TrialRecord
    target : float
        Compared inclusively: a value equal to the target counts.
    direction : MetricDirection
    metric : Metric
        Which metric of each event is compared.
    budget : ExtendedTime
        Events whose clock value exceeds the budget are ignored entirely.
    clock : Clock
        Credit the runtime (seconds) or the step count.

    Returns
    -------
    ExtendedTime
        Infinite if no event qualifies, or if the trial diverged or crashed.

    Raises
    ------
    MissingTestMetric
        ``metric`` is Test and some in-budget event has no test value.
    """
    metric, clock = Metric.parse(metric), Clock.parse(clock)
    direction = MetricDirection.parse(direction)
    budget = ExtendedTime.coerce(budget)
    if trial.status is not TrialStatus.COMPLETED:
        return INF
    limit = budget.as_float()
    in_budget = [ev for ev in trial.events if ev.clock(clock) <= limit]
    if metric is Metric.TEST:
        missing = [ev.step for ev in in_budget if ev.test_metric is None]
        if missing:
            raise MissingTestMetric(
                f"trial {trial.key}: no test metric at step(s) {missing[:5]}")
    for ev in in_budget:
        value = ev.validation_metric if metric is Metric.VALIDATION else ev.test_metric
        if direction.meets(value, target):
            return ExtendedTime(ev.clock(clock))
    return INF


def crossings(a: MetricSeries, b: MetricSeries) -> list:
    """Intervals ``(lo, hi]`` in which the leading series changes.

    Both series are held constant between their events and compared at every
    event position of either series inside the overlapping x-range. A tie
    keeps the previous leader, so ``a == b`` at a point is not a change. Each
    returned interval runs from the last x with a strict leader to the first x
    where the other series strictly leads.

    Examples
    --------
    >>> a = MetricSeries((1, 2), (2, 0))
    >>> b = MetricSeries((1, 2), (1, 1))
    >>> crossings(a, b)
    [(1.0, 2.0)]
    """
    if len(a) == 0 or len(b) == 0:
        raise EmptySeries("crossings needs two nonempty series")
    lo = max(a.x[0], b.x[0])
    hi = min(a.x[-1], b.x[-1])
    if lo > hi:
        return []
    grid = sorted(v for v in set(a.x) | set(b.x) if lo <= v <= hi)
    out = []
    last_sign, last_x = 0, None
    for x in grid:
        sign = int(np.sign(a.value_at(x) - b.value_at(x)))
        if sign == 0:
            continue
        if last_sign != 0 and sign != last_sign:
            out.append((last_x, x))
        last_sign, last_x = sign, x
    return out
