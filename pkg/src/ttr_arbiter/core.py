"""Domain types shared by the scoring modules, plus config validation."""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from .errors import (
    DanglingHeldOutBase,
    DuplicateHeldOutLink,
    DuplicateWorkloadId,
    EmptyMatrix,
    EvenStudyCount,
    NonPositiveBudget,
)

if TYPE_CHECKING:  # pragma: no cover
    from .searchspace import SearchSpace

#: A hyperparameter point is a flat name -> value map (real, integer or categorical string).
HyperparameterPoint = dict


class MetricDirection(enum.Enum):
    MINIMIZE = "minimize"
    MAXIMIZE = "maximize"

    @classmethod
    def parse(cls, text: Union[str, "MetricDirection"]) -> "MetricDirection":
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower()
        if key in ("min", "minimize", "lower"):
            return cls.MINIMIZE
        if key in ("max", "maximize", "higher"):
            return cls.MAXIMIZE
        raise ValueError(f"unknown metric direction {text!r}")

    def meets(self, value: float, target: float) -> bool:
        """Inclusive target test: equal to the target counts as reached."""
        if self is MetricDirection.MINIMIZE:
            return value <= target
        return value >= target

    def better(self, a: float, b: float) -> bool:
        """True if ``a`` is strictly better than ``b``."""
        if self is MetricDirection.MINIMIZE:
            return a < b
        return a > b

    def best(self, values):
        return min(values) if self is MetricDirection.MINIMIZE else max(values)

    def worst(self, values):
        return max(values) if self is MetricDirection.MINIMIZE else min(values)

    def accumulate(self, values) -> np.ndarray:
        """Running best of ``values``."""
        ufunc = np.minimum if self is MetricDirection.MINIMIZE else np.maximum
        return ufunc.accumulate(np.asarray(values, dtype=float))


@functools.total_ordering
@dataclass(frozen=True)
class ExtendedTime:
    """A nonnegative time (seconds or steps) or the distinguished Infinite value.

    Infinite is stored as ``value=None``; it never appears as a float sentinel.
    Use :meth:`finite` / :data:`INF` to build values and :meth:`as_float` when
    handing data to numpy.
    """

    value: Optional[float] = None

    def __post_init__(self):
        v = self.value
        if v is None:
            return
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            raise ValueError("ExtendedTime values must be finite; use ExtendedTime.INF")
        if v < 0:
            raise ValueError(f"ExtendedTime must be nonnegative, got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def finite(cls, value: float) -> "ExtendedTime":
        if value is None:
            raise ValueError("finite() needs a number")
        return cls(value)

    @classmethod
    def coerce(cls, value) -> "ExtendedTime":
        """Accept an ExtendedTime, a number (``inf`` allowed) or the string ``"inf"``."""
        if isinstance(value, ExtendedTime):
            return value
        if value is None:
            return INF
        if isinstance(value, str):
            return cls.parse(value)
        value = float(value)
        if math.isinf(value) and value > 0:
            return INF
        return cls(value)

    @classmethod
    def parse(cls, text: str) -> "ExtendedTime":
        t = text.strip().lower()
        if t in ("inf", "+inf", "infinity", "infinite"):
            return INF
        return cls(float(t))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def as_float(self) -> float:
        return math.inf if self.value is None else self.value

    def __lt__(self, other):
        if not isinstance(other, ExtendedTime):
            return NotImplemented
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __truediv__(self, other):
        """Ratio of two times. Infinite numerator (or denominator) gives Infinite."""
        other = ExtendedTime.coerce(other)
        if self.value is None or other.value is None:
            return INF
        if other.value == 0.0:
            return ExtendedTime(1.0) if self.value == 0.0 else INF
        return ExtendedTime(self.value / other.value)

    def __mul__(self, factor: float):
        if self.value is None:
            return INF
        return ExtendedTime(self.value * float(factor))

    __rmul__ = __mul__

    def __str__(self):
        return "inf" if self.value is None else repr(self.value)


INF = ExtendedTime(None)
ExtendedTime.INF = INF


@dataclass(frozen=True)
class WorkloadSpec:
    """One scoring unit. ``heldout_of`` is set for held-out variants and names the base."""

    id: str
    direction: MetricDirection
    validation_target: float
    test_target: float
    max_runtime: float
    max_steps: Optional[int] = None
    heldout_of: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "direction", MetricDirection.parse(self.direction))

    @property
    def is_heldout(self) -> bool:
        return self.heldout_of is not None

    def budget(self, clock: "Clock" = None, multiplier: float = 1.0) -> ExtendedTime:
        """Budget in the units of ``clock`` (runtime seconds by default)."""
        if clock is None or clock is Clock.RUNTIME:
            return ExtendedTime(self.max_runtime * multiplier)
        if self.max_steps is None:
            return INF
        return ExtendedTime(self.max_steps * multiplier)


class Clock(enum.Enum):
    RUNTIME = "runtime"
    STEPS = "steps"

    @classmethod
    def parse(cls, text) -> "Clock":
        return text if isinstance(text, cls) else cls(str(text).lower())


class Metric(enum.Enum):
    VALIDATION = "validation"
    TEST = "test"

    @classmethod
    def parse(cls, text) -> "Metric":
        return text if isinstance(text, cls) else cls(str(text).lower())


class TrialStatus(enum.Enum):
    COMPLETED = "completed"
    DIVERGED = "diverged"
    CRASHED = "crashed"

    @classmethod
    def parse(cls, text) -> "TrialStatus":
        if text is None:
            return cls.COMPLETED
        return text if isinstance(text, cls) else cls(str(text).lower())


@dataclass(frozen=True)
class EvalEvent:
    step: int
    runtime: float
    validation_metric: float
    test_metric: Optional[float] = None

    def clock(self, clock: Clock) -> float:
        return float(self.step) if clock is Clock.STEPS else float(self.runtime)


@dataclass(frozen=True)
class TrialRecord:
    """One training run: a hyperparameter point and its ordered eval events."""

    workload_id: str
    study_index: int
    trial_index: int
    point: dict = field(default_factory=dict, hash=False)
    events: tuple = ()
    status: TrialStatus = TrialStatus.COMPLETED
    submission_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "status", TrialStatus.parse(self.status))
        object.__setattr__(self, "point", dict(self.point))
        if self.status is TrialStatus.COMPLETED and not self.events:
            raise ValueError(f"completed trial {self.key} has no eval events")
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.step <= prev.step:
                raise ValueError(f"trial {self.key}: steps not strictly increasing at step {cur.step}")
            if cur.runtime < prev.runtime:
                raise ValueError(f"trial {self.key}: runtime decreases at step {cur.step}")

    @property
    def key(self) -> tuple:
        return (self.submission_id, self.workload_id, self.study_index, self.trial_index)


class ScoreMatrix:
    """Per-(submission, workload) training times, rectangular and immutable."""

    def __init__(self, submissions: Sequence[str], workloads: Sequence[str], times):
        self.submissions = tuple(submissions)
        self.workloads = tuple(workloads)
        if len(set(self.submissions)) != len(self.submissions):
            raise ValueError("duplicate submission ids")
        if len(set(self.workloads)) != len(self.workloads):
            raise ValueError("duplicate workload ids")
        rows = [tuple(ExtendedTime.coerce(t) for t in row) for row in times]
        if len(rows) != len(self.submissions):
            raise ValueError(f"expected {len(self.submissions)} rows, got {len(rows)}")
        for sid, row in zip(self.submissions, rows):
            if len(row) != len(self.workloads):
                raise ValueError(f"row {sid!r} has {len(row)} cells, expected {len(self.workloads)}")
        self._times = tuple(rows)

    @classmethod
    def from_mapping(cls, times: Mapping[str, Mapping[str, Any]], workloads: Sequence[str] = None):
        subs = list(times)
        if workloads is None:
            workloads = list(next(iter(times.values()))) if times else []
        return cls(subs, workloads, [[times[s][w] for w in workloads] for s in subs])

    @classmethod
    def from_array(cls, submissions, workloads, array):
        return cls(submissions, workloads, np.asarray(array, dtype=float).tolist())

    @property
    def shape(self):
        return (len(self.submissions), len(self.workloads))

    def time(self, submission: str, workload: str) -> ExtendedTime:
        return self._times[self.submissions.index(submission)][self.workloads.index(workload)]

    def row(self, submission: str) -> tuple:
        return self._times[self.submissions.index(submission)]

    def column(self, workload: str) -> tuple:
        j = self.workloads.index(workload)
        return tuple(row[j] for row in self._times)

    def rows(self):
        return self._times

    def to_array(self) -> np.ndarray:
        """Float array with ``np.inf`` for Infinite cells."""
        if not self.submissions or not self.workloads:
            raise EmptyMatrix("score matrix has no cells")
        return np.array([[t.as_float() for t in row] for row in self._times], dtype=float)

    def replace(self, updates: Mapping[tuple, Any]) -> "ScoreMatrix":
        rows = [list(r) for r in self._times]
        for (s, w), t in updates.items():
            rows[self.submissions.index(s)][self.workloads.index(w)] = ExtendedTime.coerce(t)
        return ScoreMatrix(self.submissions, self.workloads, rows)

    def __eq__(self, other):
        if not isinstance(other, ScoreMatrix):
            return NotImplemented
        return (self.submissions, self.workloads, self._times) == (
            other.submissions, other.workloads, other._times)

    def __repr__(self):
        return f"ScoreMatrix({len(self.submissions)} submissions x {len(self.workloads)} workloads)"


@dataclass(frozen=True)
class RulesetConfig:
    """External tuning (studies x trials, select by validation) or self-tuning (one trial, longer budget)."""

    kind: str = "external"
    studies: int = 5
    trials_per_study: int = 20
    budget_multiplier: float = 1.0

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind in ("external", "external_tuning"):
            kind = "external"
        elif kind in ("self", "self_tuning", "self-tuning"):
            kind = "self"
        else:
            raise ValueError(f"unknown ruleset kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.studies < 1 or self.studies % 2 == 0:
            raise EvenStudyCount(f"studies must be odd and >= 1, got {self.studies}")
        if self.trials_per_study < 1:
            raise NonPositiveBudget("trials_per_study must be >= 1", field="trials_per_study")
        if self.budget_multiplier < 1:
            raise ValueError(f"budget_multiplier must be >= 1, got {self.budget_multiplier}")

    @classmethod
    def external(cls, studies: int = 5, trials_per_study: int = 20) -> "RulesetConfig":
        return cls("external", studies, trials_per_study, 1.0)

    @classmethod
    def self_tuning(cls, studies: int = 5, budget_multiplier: float = 3.0) -> "RulesetConfig":
        return cls("self", studies, 1, budget_multiplier)

    @property
    def is_self_tuning(self) -> bool:
        return self.kind == "self"


@dataclass(frozen=True)
class BenchmarkConfig:
    workloads: tuple
    ruleset: RulesetConfig = field(default_factory=RulesetConfig.external)
    r_max: float = 4.0
    search_spaces: Mapping[str, "SearchSpace"] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "workloads", tuple(self.workloads))

    def workload(self, workload_id: str) -> WorkloadSpec:
        for w in self.workloads:
            if w.id == workload_id:
                return w
        raise KeyError(workload_id)

    @property
    def fixed_workloads(self) -> tuple:
        return tuple(w for w in self.workloads if not w.is_heldout)

    @property
    def heldout_workloads(self) -> tuple:
        return tuple(w for w in self.workloads if w.is_heldout)

    def linkage(self) -> dict:
        """held-out id -> fixed base id."""
        return {w.id: w.heldout_of for w in self.heldout_workloads}


def validate_benchmark_config(config: BenchmarkConfig) -> BenchmarkConfig:
    """Check workload ids, budgets, held-out linkage and ruleset counts.

    Returns the config unchanged so calls can be chained.
    """
    seen = set()
    for w in config.workloads:
        if w.id in seen:
            raise DuplicateWorkloadId(f"workload id {w.id!r} appears more than once", field=f"workloads.{w.id}")
        seen.add(w.id)
        if not w.max_runtime > 0:
            raise NonPositiveBudget(f"workload {w.id!r}: max_runtime must be > 0, got {w.max_runtime}",
                                    field=f"workloads.{w.id}.max_runtime")
        if w.max_steps is not None and w.max_steps <= 0:
            raise NonPositiveBudget(f"workload {w.id!r}: max_steps must be > 0, got {w.max_steps}",
                                    field=f"workloads.{w.id}.max_steps")

    fixed_ids = {w.id for w in config.fixed_workloads}
    linked = {}
    for w in config.heldout_workloads:
        if w.heldout_of not in fixed_ids:
            raise DanglingHeldOutBase(f"held-out workload {w.id!r} names unknown fixed base {w.heldout_of!r}",
                                      field=f"workloads.{w.id}.heldout_of")
        if w.heldout_of in linked:
            raise DuplicateHeldOutLink(
                f"fixed workload {w.heldout_of!r} has two held-out variants ({linked[w.heldout_of]!r}, {w.id!r})",
                field=f"workloads.{w.id}.heldout_of")
        linked[w.heldout_of] = w.id

    rs = config.ruleset
    if rs.studies < 1:
        raise NonPositiveBudget("ruleset.studies must be positive", field="ruleset.studies")
    if rs.trials_per_study < 1:
        raise NonPositiveBudget("ruleset.trials_per_study must be positive", field="ruleset.trials_per_study")
    if not config.r_max > 1:
        raise NonPositiveBudget(f"r_max must be > 1, got {config.r_max}", field="r_max")
    return config


def sort_times(times: Iterable[ExtendedTime]) -> list:
    return sorted(ExtendedTime.coerce(t) for t in times)
