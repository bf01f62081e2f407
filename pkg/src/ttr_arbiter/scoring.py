"""Performance ratios, performance profiles and integrated benchmark scores.

For each workload, a submission's time is divided by the fastest time any
submission achieved on it. A submission's profile ``rho(tau)`` is the fraction
of workloads on which its ratio is at most ``tau``. The benchmark score is the
area under the profile on ``[1, r_max]``, normalized to ``[0, 1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import INF, ExtendedTime, ScoreMatrix
from .errors import DanglingLinkage, EmptyMatrix, InfiniteTime, InvalidRMax, NonPositiveTime

DEFAULT_R_MAX = 4.0


def performance_ratios(matrix: ScoreMatrix) -> np.ndarray:
    """Ratio of each time to its workload's fastest time.

    Returns
    -------
    numpy.ndarray
        Shape ``(n_submissions, n_workloads)``; Infinite times (and every entry
        of a column with no finite time) become ``np.inf``.

    Examples
    --------
    >>> m = ScoreMatrix(["a", "b"], ["w"], [[30822], [29962]])
    >>> performance_ratios(m).round(4).tolist()
    [[1.0287], [1.0]]
    """
    times = matrix.to_array()
    best = times.min(axis=0)
    out = np.full_like(times, np.inf)
    for j, m in enumerate(best):
        col = times[:, j]
        finite = np.isfinite(col)
        if not np.isfinite(m):
            continue
        if m == 0:
            out[finite & (col == 0), j] = 1.0
        else:
            out[finite, j] = col[finite] / m
    return out


@dataclass(frozen=True)
class PerformanceProfile:
    """Right-continuous step function given by its jump points.

    ``breakpoints`` holds ``(tau, rho)`` pairs with strictly increasing
    ``tau``; ``rho(t)`` is the ``rho`` of the last breakpoint with
    ``tau <= t``, or 0 before the first one.
    """

    submission_id: str
    breakpoints: tuple
    n_workloads: int

    def __call__(self, tau):
        taus = np.array([b[0] for b in self.breakpoints], dtype=float)
        rhos = np.concatenate([[0.0], [b[1] for b in self.breakpoints]])
        idx = np.searchsorted(taus, np.asarray(tau, dtype=float), side="right")
        out = rhos[idx]
        return float(out) if np.ndim(out) == 0 else out

    @property
    def taus(self) -> list:
        return [b[0] for b in self.breakpoints]

    @property
    def rhos(self) -> list:
        return [b[1] for b in self.breakpoints]


def performance_profile(ratios: Sequence, n_workloads: int = None, submission_id: str = "") -> PerformanceProfile:
    """Empirical CDF of the finite ratios, scaled by ``1/n_workloads``.

    Infinite ratios count toward ``n_workloads`` but never add a jump.
    """
    vals = [ExtendedTime.coerce(r).as_float() for r in ratios]
    n = len(vals) if n_workloads is None else n_workloads
    if n != len(vals):
        raise ValueError(f"got {len(vals)} ratios for {n} workloads")
    if n < 1:
        raise EmptyMatrix("profile needs at least one workload")
    finite = sorted(v for v in vals if math.isfinite(v))
    breakpoints = []
    for i, tau in enumerate(finite):
        rho = (i + 1) / n
        if breakpoints and breakpoints[-1][0] == tau:
            breakpoints[-1] = (tau, rho)
        else:
            breakpoints.append((tau, rho))
    return PerformanceProfile(submission_id, tuple(breakpoints), n)


@dataclass(frozen=True)
class BenchmarkScore:
    submission_id: str
    value: float
    r_max: float = DEFAULT_R_MAX


def integrate_profile(profile: PerformanceProfile, r_max: float = DEFAULT_R_MAX) -> float:
    """Exact normalized area under the profile on ``[1, r_max]``.

    Each jump of height ``d`` at ``tau < r_max`` adds ``d * (r_max - max(tau, 1))``.
    """
    area, prev = 0.0, 0.0
    for tau, rho in profile.breakpoints:
        if tau >= r_max:
            break
        area += (rho - prev) * (r_max - max(tau, 1.0))
        prev = rho
    return area / (r_max - 1.0)


def benchmark_score(profile: PerformanceProfile, r_max: float = DEFAULT_R_MAX) -> BenchmarkScore:
    if not r_max > 1:
        raise InvalidRMax(f"r_max must be > 1, got {r_max}")
    return BenchmarkScore(profile.submission_id, integrate_profile(profile, r_max), r_max)


def profiles_from_matrix(matrix: ScoreMatrix) -> list:
    ratios = performance_ratios(matrix)
    n = len(matrix.workloads)
    return [performance_profile(row.tolist(), n, sid) for sid, row in zip(matrix.submissions, ratios)]


def score_matrix(matrix: ScoreMatrix, r_max: float = DEFAULT_R_MAX) -> dict:
    """``{submission: score}`` straight from a time matrix."""
    return {p.submission_id: benchmark_score(p, r_max).value for p in profiles_from_matrix(matrix)}


def _within(t: ExtendedTime, budget: Optional[ExtendedTime]) -> bool:
    return t.is_finite and (budget is None or t <= budget)


def apply_heldout_gate(
    fixed: ScoreMatrix,
    heldout: Optional[ScoreMatrix],
    linkage: Mapping[str, str],
    r_max: float = DEFAULT_R_MAX,
    budgets: Optional[Mapping[str, float]] = None,
) -> ScoreMatrix:
    """Void fixed-workload times that fail the held-out conditions.

    A fixed cell ``(s, w)`` with linked held-out workload ``h`` survives only if

    1. ``t(s, w)`` is finite and within budget;
    2. ``t(s, w) <= r_max * min_s' t(s', w)``;
    3. ``t(s, h)`` is finite and within budget;
    4. ``t(s, h) <= r_max * min t(s', h)`` over submissions ``s'`` whose fixed
       time on ``w`` is finite.

    Fixed workloads without a held-out variant are checked with 1 and 2 only.
    Failing cells become Infinite; the minima are taken over the ungated input.

    Parameters
    ----------
    budgets : mapping, optional
        Per-workload budgets (fixed and held-out ids). Times in the matrices
        are normally already budget-limited, so this is an extra guard.
    """
    if not r_max > 1:
        raise InvalidRMax(f"r_max must be > 1, got {r_max}")
    budgets = {k: ExtendedTime.coerce(v) for k, v in (budgets or {}).items()}
    inverse = {}
    for h, w in linkage.items():
        if w not in fixed.workloads:
            raise DanglingLinkage(f"held-out workload {h!r} links to unknown fixed workload {w!r}")
        if heldout is None or h not in heldout.workloads:
            raise DanglingLinkage(f"held-out workload {h!r} has no column in the held-out matrix")
        inverse[w] = h

    updates = {}
    for w in fixed.workloads:
        col = dict(zip(fixed.submissions, fixed.column(w)))
        fastest = min(col.values())
        h = inverse.get(w)
        if h is not None:
            hcol = dict(zip(heldout.submissions, heldout.column(h)))
            eligible = [hcol.get(s, INF) for s, t in col.items() if t.is_finite]
            fastest_h = min(eligible, default=INF)
        for s, t in col.items():
            ok = _within(t, budgets.get(w)) and t <= fastest * r_max
            if ok and h is not None:
                th = hcol.get(s, INF)
                ok = _within(th, budgets.get(h)) and th <= fastest_h * r_max
            if not ok and t.is_finite:
                updates[(s, w)] = INF
    return fixed.replace(updates) if updates else fixed


def geometric_mean_time(times: Sequence) -> float:
    """Geometric mean of finite positive times, computed in log space."""
    vals = [ExtendedTime.coerce(t) for t in times]
    if not vals:
        raise ValueError("geometric mean of an empty list")
    if any(v.is_infinite for v in vals):
        raise InfiniteTime("geometric mean needs finite times")
    arr = np.array([v.as_float() for v in vals])
    if np.any(arr <= 0):
        raise NonPositiveTime("geometric mean needs positive times")
    return float(np.exp(np.mean(np.log(arr))))


@dataclass(frozen=True)
class LeaderboardRow:
    submission_id: str
    score: float
    times: tuple


def leaderboard(matrix: ScoreMatrix, r_max: float = DEFAULT_R_MAX) -> list:
    """Rows sorted by descending score, ties by submission id."""
    scores = score_matrix(matrix, r_max)
    rows = [LeaderboardRow(s, scores[s], matrix.row(s)) for s in matrix.submissions]
    return sorted(rows, key=lambda r: (-r.score, r.submission_id))
