"""Methodology analyses built on tuning-trial tables.

* :func:`phi_metric`: how much a single shared hyperparameter point loses, in
  the worst case over workloads, against each workload's own best point.
* :func:`simulate_tuning`: bootstrap estimate of best-of-T random search.
* :func:`transfer_ranks`: how well the optimum of a workload transfers to a
  variant of it and back.
* :func:`estimate_costs`: accelerator-hours needed to run the benchmark.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import MetricDirection, RulesetConfig
from .errors import (
    EmptyPool,
    EmptyWorkloadColumn,
    MismatchedPointSets,
    UnknownWorkloadInSubset,
    ZeroBestValue,
)


@dataclass(frozen=True)
class ValidationTable:
    """Validation values ``val(w, h)`` for workloads ``w`` and points ``h``.

    ``values`` has shape ``(n_points, n_workloads)``; NaN marks a missing cell
    (for example a diverged trial).
    """

    workloads: tuple
    directions: tuple
    points: tuple
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "workloads", tuple(self.workloads))
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "directions", tuple(MetricDirection.parse(d) for d in self.directions))
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if len(self.directions) != len(self.workloads):
            raise ValueError("one direction per workload is required")
        if vals.shape != (len(self.points), len(self.workloads)):
            raise ValueError(f"values shape {vals.shape} does not match "
                             f"{len(self.points)} points x {len(self.workloads)} workloads")

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def best_per_workload(self) -> np.ndarray:
        """``val_H(w)``: min or max over points by each workload's direction."""
        out = np.empty(len(self.workloads))
        for j, d in enumerate(self.directions):
            col = self.values[:, j]
            if np.all(np.isnan(col)):
                raise EmptyWorkloadColumn(f"workload {self.workloads[j]!r} has no values")
            out[j] = np.nanmin(col) if d is MetricDirection.MINIMIZE else np.nanmax(col)
        return out


@dataclass(frozen=True)
class PhiResult:
    phi: np.ndarray = field(compare=False)     # per point
    Phi: float = 0.0
    best_point: object = None
    best_index: int = 0
    per_workload: np.ndarray = field(default=None, compare=False)  # phi_w for the best point


def phi_metric(table: ValidationTable) -> PhiResult:
    """Worst-case relative degradation of each point, and its minimum.

    ``phi(h) = max_w |val(w, h) - val_H(w)| / |val_H(w)|`` with a missing value
    counting as Infinite. ``Phi`` is the minimum over points, attained at the
    lowest-indexed minimizer.
    """
    best = table.best_per_workload()
    if np.any(best == 0):
        j = int(np.flatnonzero(best == 0)[0])
        raise ZeroBestValue(f"best value on {table.workloads[j]!r} is zero")
    rel = np.abs(table.values - best) / np.abs(best)
    rel = np.where(np.isnan(rel), np.inf, rel)
    phi = rel.max(axis=1)
    i = int(np.argmin(phi))
    return PhiResult(phi, float(phi[i]), table.points[i], i, rel[i].copy())


def simulate_tuning(pool: Sequence[float], T: int, n_sims: int = 1000, seed: int = 0,
                    direction: MetricDirection = MetricDirection.MINIMIZE) -> tuple:
    """Bootstrap best-of-``T`` random search.

    Each simulation draws ``T`` values from ``pool`` with replacement and keeps
    the best. Returns ``(median, Q1, Q3)`` over the ``n_sims`` bests, with
    quartiles from ``numpy.percentile``'s default linear interpolation.
    """
    arr = np.asarray(pool, dtype=float)
    if arr.size == 0:
        raise EmptyPool("simulate_tuning needs a nonempty pool")
    if T < 1 or n_sims < 1:
        raise ValueError(f"T and n_sims must be >= 1, got {T}, {n_sims}")
    direction = MetricDirection.parse(direction)
    rng = np.random.default_rng(seed)
    draws = arr[rng.integers(0, arr.size, size=(n_sims, T))]
    bests = draws.min(axis=1) if direction is MetricDirection.MINIMIZE else draws.max(axis=1)
    q1, med, q3 = np.percentile(bests, [25, 50, 75])
    return float(med), float(q1), float(q3)


def rank_of(index: int, values: Sequence[float], direction: MetricDirection) -> int:
    """Number of entries strictly better than ``values[index]``."""
    vals = np.asarray(values, dtype=float)
    v = vals[index]
    if direction is MetricDirection.MINIMIZE:
        return int(np.sum(vals < v))
    return int(np.sum(vals > v))


def _optimum(vals: np.ndarray, direction: MetricDirection) -> int:
    return int(np.argmin(vals) if direction is MetricDirection.MINIMIZE else np.argmax(vals))


def transfer_ranks(base, variant, direction: MetricDirection = MetricDirection.MINIMIZE) -> tuple:
    """Ranks of each workload's optimum on the other workload.

    ``base`` and ``variant`` are either equal-length sequences indexed by the
    same points, or mappings from point id to value with identical keys.

    Returns
    -------
    (int, int, int)
        Rank of the base optimum on the variant, rank of the variant optimum
        on the base, and the smaller of the two. Ranks count strictly better
        points, so the best point has rank 0.
    """
    direction = MetricDirection.parse(direction)
    if isinstance(base, Mapping) or isinstance(variant, Mapping):
        if not (isinstance(base, Mapping) and isinstance(variant, Mapping)) or set(base) != set(variant):
            raise MismatchedPointSets("base and variant must cover the same point ids")
        keys = list(base)
        b = np.array([base[k] for k in keys], dtype=float)
        v = np.array([variant[k] for k in keys], dtype=float)
    else:
        b, v = np.asarray(base, dtype=float), np.asarray(variant, dtype=float)
        if b.shape != v.shape:
            raise MismatchedPointSets(f"base has {b.size} points, variant has {v.size}")
    if b.size == 0:
        raise MismatchedPointSets("empty point sets")
    to_variant = rank_of(_optimum(b, direction), v, direction)
    to_base = rank_of(_optimum(v, direction), b, direction)
    return to_variant, to_base, min(to_variant, to_base)


@dataclass(frozen=True)
class CostEstimate:
    one_hyperparameter: float
    scoring: float
    tuning: Optional[float]


def estimate_costs(budgets: Mapping[str, float], ruleset: RulesetConfig = None,
                   include_heldout: bool = True, subset: Optional[Sequence[str]] = None) -> CostEstimate:
    """Hours needed for one point, one scored submission, and a full tuning run.

    ``one_hyperparameter`` runs every selected workload once at its budget
    (twice with held-out variants, times the budget multiplier for
    self-tuning). Scoring repeats that once per study; external tuning then
    repeats scoring once per trial. Self-tuning has no tuning figure.
    """
    ruleset = ruleset or RulesetConfig.external()
    ids = list(budgets) if subset is None else list(subset)
    unknown = [w for w in ids if w not in budgets]
    if unknown:
        raise UnknownWorkloadInSubset(f"unknown workloads in subset: {unknown}")
    if any(not budgets[w] > 0 for w in ids):
        raise ValueError("budgets must be positive")
    seconds = math.fsum(budgets[w] for w in ids)
    seconds *= 2 if include_heldout else 1
    seconds *= ruleset.budget_multiplier if ruleset.is_self_tuning else 1
    one = seconds / 3600.0
    scoring = ruleset.studies * one
    tuning = None if ruleset.is_self_tuning else ruleset.trials_per_study * scoring
    return CostEstimate(one, scoring, tuning)
