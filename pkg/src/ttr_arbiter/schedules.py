"""Learning-rate schedules: warmup + cosine decay, and warmup + linear decay to a constant.

Both specs are stored in absolute steps. The ``from_relative`` constructors take
the usual tuning parameterization (warmup as a fraction of the run, decay length
as a fraction of the post-warmup steps) and round to whole steps, half up.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OutOfRangeStep


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class WarmupCosineSpec:
    base_lr: float
    num_steps: int
    warmup_steps: int

    def __post_init__(self):
        if not self.base_lr > 0:
            raise ValueError(f"base_lr must be > 0, got {self.base_lr}")
        if not 0 < self.warmup_steps < self.num_steps:
            raise ValueError(
                f"need 0 < warmup_steps < num_steps, got {self.warmup_steps}, {self.num_steps}")

    @classmethod
    def from_relative(cls, base_lr: float, num_steps: int, warmup_fraction: float) -> "WarmupCosineSpec":
        return cls(base_lr, num_steps, _round_half_up(warmup_fraction * num_steps))


@dataclass(frozen=True)
class WarmupLinearConstantSpec:
    base_lr: float
    num_steps: int
    warmup_steps: int
    decay_factor: float
    decay_steps: int

    def __post_init__(self):
        if not self.base_lr > 0:
            raise ValueError(f"base_lr must be > 0, got {self.base_lr}")
        if not 0 < self.decay_factor <= 1:
            raise ValueError(f"decay_factor must lie in (0, 1], got {self.decay_factor}")
        if not 0 < self.warmup_steps <= self.decay_steps <= self.num_steps:
            raise ValueError("need 0 < warmup_steps <= decay_steps <= num_steps, got "
                             f"{self.warmup_steps}, {self.decay_steps}, {self.num_steps}")

    @property
    def reduced_lr(self) -> float:
        return self.base_lr * self.decay_factor

    @classmethod
    def from_relative(cls, base_lr: float, num_steps: int, warmup_fraction: float,
                      decay_factor: float, decay_fraction: float) -> "WarmupLinearConstantSpec":
        """``decay_fraction`` is measured on the steps left after warmup."""
        warmup = _round_half_up(warmup_fraction * num_steps)
        decay = warmup + _round_half_up(decay_fraction * (num_steps - warmup))
        return cls(base_lr, num_steps, warmup, decay_factor, decay)


def _check_step(t, num_steps):
    if not 0 <= t <= num_steps:
        raise OutOfRangeStep(f"step {t} outside [0, {num_steps}]")


def warmup_cosine(t: float, spec: WarmupCosineSpec) -> float:
    """Learning rate at step ``t``.

    Rises linearly from 0 to ``base_lr`` over the warmup, then follows a half
    cosine down to 0 at ``num_steps``.
    """
    _check_step(t, spec.num_steps)
    w, n = spec.warmup_steps, spec.num_steps
    if t <= w:
        return spec.base_lr * t / w
    return spec.base_lr / 2.0 * (1.0 + math.cos(math.pi * (t - w) / (n - w)))


def warmup_linear_constant(t: float, spec: WarmupLinearConstantSpec) -> float:
    """Learning rate at step ``t``: warmup, linear decay to ``reduced_lr``, then flat."""
    _check_step(t, spec.num_steps)
    w, d = spec.warmup_steps, spec.decay_steps
    if t <= w:
        return spec.base_lr * t / w
    if t <= d:
        return (spec.base_lr * (d - t) + spec.reduced_lr * (t - w)) / (d - w)
    return spec.reduced_lr
