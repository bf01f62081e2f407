"""Search spaces, quasirandom sampling and OptLists.

A search space is either a box of independent dimensions, sampled with a
scrambled Halton sequence, or an explicit list of points (an OptList) that is
sampled without replacement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping, Sequence, Union

import numpy as np
from scipy.stats import qmc

from .errors import BudgetExceedsList, EmptySpace, InsufficientCandidates


@dataclass(frozen=True)
class LogUniform:
    name: str
    lo: float
    hi: float

    def __post_init__(self):
        if not 0 < self.lo < self.hi:
            raise ValueError(f"{self.name}: need 0 < lo < hi, got [{self.lo}, {self.hi}]")

    def transform(self, u: float) -> float:
        return float(self.lo * (self.hi / self.lo) ** u)

    def contains(self, value) -> bool:
        return isinstance(value, (int, float)) and self.lo <= value <= self.hi


@dataclass(frozen=True)
class LinearUniform:
    name: str
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"{self.name}: need lo < hi, got [{self.lo}, {self.hi}]")

    def transform(self, u: float) -> float:
        return float(self.lo + u * (self.hi - self.lo))

    def contains(self, value) -> bool:
        return isinstance(value, (int, float)) and self.lo <= value <= self.hi


@dataclass(frozen=True)
class Discrete:
    """Equal-width buckets over the unit interval, one per value, clamped at 1."""

    name: str
    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        if not vals:
            raise ValueError(f"{self.name}: discrete dimension needs at least one value")
        if len(set(vals)) != len(vals):
            raise ValueError(f"{self.name}: discrete values must be unique")
        object.__setattr__(self, "values", vals)

    def transform(self, u: float):
        k = len(self.values)
        return self.values[min(int(math.floor(u * k)), k - 1)]

    def contains(self, value) -> bool:
        return value in self.values


@dataclass(frozen=True)
class Fixed:
    name: str
    value: Any

    def transform(self, u: float):
        return self.value

    def contains(self, value) -> bool:
        return value == self.value


DimensionSpec = Union[LogUniform, LinearUniform, Discrete, Fixed]


@dataclass(frozen=True)
class BoxSearchSpace:
    dimensions: tuple

    def __post_init__(self):
        dims = tuple(self.dimensions)
        names = [d.name for d in dims]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate dimension names in {names}")
        object.__setattr__(self, "dimensions", dims)

    @property
    def names(self) -> list:
        return [d.name for d in self.dimensions]

    def point_from_unit(self, u: Sequence[float]) -> dict:
        return {d.name: d.transform(float(x)) for d, x in zip(self.dimensions, u)}

    def contains(self, point: Mapping) -> bool:
        return set(point) == set(self.names) and all(d.contains(point[d.name]) for d in self.dimensions)


@dataclass(frozen=True)
class OptList:
    points: tuple

    def __post_init__(self):
        pts = tuple(dict(p) for p in self.points)
        if pts:
            keys = set(pts[0])
            for i, p in enumerate(pts):
                if set(p) != keys:
                    raise ValueError(f"OptList point {i} has keys {sorted(p)}, expected {sorted(keys)}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


SearchSpace = Union[BoxSearchSpace, OptList]


def sample_quasirandom(space: BoxSearchSpace, count: int, seed: int) -> list:
    """Draw ``count`` points from a scrambled Halton sequence.

    Coordinate ``j`` of each Halton point drives dimension ``j``. The Halton
    generator uses one prime base per coordinate and seed-derived digit
    permutations (scipy's ``qmc.Halton`` with ``scramble=True``). Fixed
    dimensions still consume a coordinate so that adding or removing a fixed
    value does not reshuffle the others.

    Raises
    ------
    EmptySpace
        The space has no dimensions.
    """
    if not space.dimensions:
        raise EmptySpace("search space has no dimensions")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    sampler = qmc.Halton(d=len(space.dimensions), scramble=True, seed=np.random.default_rng(seed))
    unit = sampler.random(count)
    return [space.point_from_unit(row) for row in unit]


def sample_optlist(space: OptList, count: int, seed: int) -> list:
    """Seeded sample of ``count`` distinct OptList entries, in shuffled order."""
    if count > len(space):
        raise BudgetExceedsList(f"asked for {count} points from a list of {len(space)}")
    if count < 0:
        raise ValueError("count must be nonnegative")
    order = np.random.default_rng(seed).permutation(len(space))[:count]
    return [dict(space.points[i]) for i in order]


def sample_points(space: SearchSpace, count: int, seed: int) -> list:
    if isinstance(space, OptList):
        return sample_optlist(space, count, seed)
    return sample_quasirandom(space, count, seed)


def build_optlist(rankings: Union[Mapping[str, Sequence], Sequence[Sequence]], budget: int) -> list:
    """Greedy round-robin OptList construction.

    Workloads are visited in the given order, cyclically. Each visit adds that
    workload's best-ranked candidate not already chosen. A workload whose
    ranking is exhausted is skipped.

    Examples
    --------
    >>> build_optlist({"A": ["p1", "p2"], "B": ["p1", "p3"]}, 3)
    ['p1', 'p3', 'p2']
    """
    lists = list(rankings.values()) if isinstance(rankings, Mapping) else list(rankings)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    if any(len(r) == 0 for r in lists):
        raise ValueError("every ranking must be nonempty")
    union = set()
    for r in lists:
        union.update(r)
    if len(union) < budget:
        raise InsufficientCandidates(f"only {len(union)} distinct candidates for a budget of {budget}")

    chosen, seen = [], set()
    cursors = [0] * len(lists)
    while len(chosen) < budget:
        for i, ranking in enumerate(lists):
            if len(chosen) == budget:
                break
            while cursors[i] < len(ranking) and ranking[cursors[i]] in seen:
                cursors[i] += 1
            if cursors[i] < len(ranking):
                pick = ranking[cursors[i]]
                chosen.append(pick)
                seen.add(pick)
    return chosen
