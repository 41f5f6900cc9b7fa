"""Bernoulli reward schedules: piecewise-constant with breakpoints, and periodic.

Means are exposed analytically (``mean_at``); rewards are only drawn for the arm
actually played.  Rounds and arms are 1-based.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Sequence

import numpy as np


class Environment:
    """Shared machinery; subclasses provide ``K``, ``T``, ``B`` and ``_build_means``."""

    K: int
    T: int
    B: float = 1.0

    def _build_means(self) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def means(self) -> np.ndarray:
        """(T, K) read-only table, row t-1 holds mu_t(1..K)."""
        table = np.ascontiguousarray(self._build_means(), dtype=float)
        table.setflags(write=False)
        return table

    @cached_property
    def _best(self) -> tuple[np.ndarray, np.ndarray]:
        # np.argmax returns the first maximiser: lowest-index tie-break
        arms = np.argmax(self.means, axis=1)
        best = self.means[np.arange(self.T), arms]
        arms = arms + 1
        arms.setflags(write=False)
        best.setflags(write=False)
        return arms, best

    @property
    def best_arms(self) -> np.ndarray:
        return self._best[0]

    @property
    def best_means(self) -> np.ndarray:
        return self._best[1]

    def _check_round(self, t: int) -> None:
        if not 1 <= t <= self.T:
            raise ValueError(f"round {t} outside 1..{self.T}")

    def _check_arm(self, i: int) -> None:
        if not 1 <= i <= self.K:
            raise ValueError(f"arm {i} outside 1..{self.K}")

    def mean_at(self, t: int, i: int) -> float:
        self._check_round(t)
        self._check_arm(i)
        return float(self.means[t - 1, i - 1])

    def best_arm(self, t: int) -> tuple[int, float]:
        self._check_round(t)
        return int(self.best_arms[t - 1]), float(self.best_means[t - 1])

    def reward_from_uniform(self, t: int, i: int, u: float) -> float:
        """Bernoulli reward driven by a supplied U[0,1) variate."""
        return self.B if u < self.means[t - 1, i - 1] else 0.0

    def sample_reward(self, t: int, i: int, rng: np.random.Generator) -> float:
        self._check_round(t)
        self._check_arm(i)
        return self.reward_from_uniform(t, i, rng.random())

    def breakpoints(self, T: int | None = None) -> tuple[int, ...]:
        """Rounds 2..T at which at least one arm's mean differs from the previous round."""
        T = self.T if T is None else min(T, self.T)
        if T < 2:
            return ()
        changed = np.any(self.means[1:T] != self.means[: T - 1], axis=1)
        return tuple(int(r) + 2 for r in np.flatnonzero(changed))

    def breakpoint_count(self, T: int | None = None) -> int:
        return len(self.breakpoints(T))

    def delta_mu(self, i: int, T: int | None = None) -> float:
        """Smallest gap mu_t(*) - mu_t(i) over rounds t <= T where i is not the best arm."""
        self._check_arm(i)
        T = self.T if T is None else min(T, self.T)
        mask = self.best_arms[:T] != i
        if not mask.any():
            raise ValueError(f"arm {i} is optimal at every round up to {T}; gap undefined")
        gaps = self.best_means[:T][mask] - self.means[:T, i - 1][mask]
        return float(gaps.min())


@dataclass(frozen=True, eq=False)
class PiecewiseConstantBernoulli(Environment):
    """Per-arm list of ``(start_round, probability)`` segments, first start is 1."""

    segments: tuple[tuple[tuple[int, float], ...], ...]
    T: int
    B: float = field(default=1.0, init=False)

    def __post_init__(self):
        segs = tuple(tuple((int(s), float(p)) for s, p in arm) for arm in self.segments)
        object.__setattr__(self, "segments", segs)
        if len(segs) < 2:
            raise ValueError("need at least two arms")
        if self.T < 1:
            raise ValueError("horizon must be positive")
        for k, arm in enumerate(segs, start=1):
            if not arm or arm[0][0] != 1:
                raise ValueError(f"arm {k}: first segment must start at round 1")
            starts = [s for s, _ in arm]
            if any(b <= a for a, b in zip(starts, starts[1:])):
                raise ValueError(f"arm {k}: segment starts must be strictly increasing")
            if any(not 0.0 <= p <= 1.0 for _, p in arm):
                raise ValueError(f"arm {k}: probabilities must lie in [0, 1]")

    @property
    def K(self) -> int:
        return len(self.segments)

    def _build_means(self) -> np.ndarray:
        table = np.empty((self.T, self.K))
        for k, arm in enumerate(self.segments):
            for n, (start, p) in enumerate(arm):
                stop = arm[n + 1][0] - 1 if n + 1 < len(arm) else self.T
                if start <= self.T:
                    table[start - 1 : min(stop, self.T), k] = p
        return table

    def segment_mean(self, t: int, i: int) -> float:
        """Direct segment lookup, independent of the cached table."""
        arm = self.segments[i - 1]
        n = bisect.bisect_right([s for s, _ in arm], t) - 1
        return arm[n][1]

    @classmethod
    def constant(cls, probabilities: Sequence[float], T: int) -> "PiecewiseConstantBernoulli":
        return cls(tuple(((1, p),) for p in probabilities), T)


@dataclass(frozen=True, eq=False)
class PeriodicBernoulli(Environment):
    """Two arms; arm 1 follows ``baseline + amplitude * cos(6 pi R t / T)``, arm 2 is fixed."""

    T: int
    R: float = 1.0
    amplitude: float = 0.4
    baseline: float = 0.5
    B: float = field(default=1.0, init=False)

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("horizon must be positive")
        lo, hi = self.baseline - abs(self.amplitude), self.baseline + abs(self.amplitude)
        if lo < 0.0 or hi > 1.0:
            raise ValueError("baseline +/- amplitude must stay within [0, 1]")

    @property
    def K(self) -> int:
        return 2

    def _build_means(self) -> np.ndarray:
        t = np.arange(1, self.T + 1, dtype=float)
        arm1 = self.baseline + self.amplitude * np.cos(6.0 * math.pi * self.R * t / self.T)
        return np.column_stack([arm1, np.full(self.T, self.baseline)])


def abrupt_scenario(T: int = 10_000) -> PiecewiseConstantBernoulli:
    """Three arms, arm 3 jumps from 0.4 to 0.9 on rounds 3000..4999."""
    return PiecewiseConstantBernoulli(
        (((1, 0.5),), ((1, 0.3),), ((1, 0.4), (3000, 0.9), (5000, 0.4))), T
    )


def periodic_scenario(T: int = 10_000, R: float = 1.0) -> PeriodicBernoulli:
    return PeriodicBernoulli(T=T, R=R)


def environment_from_dict(spec: dict[str, Any] | str, T: int) -> Environment:
    """Build an environment from a config entry.

    Accepts the preset names ``"abrupt"`` and ``"periodic"`` or a mapping with
    ``type`` of ``"piecewise"`` (``segments``: per-arm ``[[start, p], ...]``),
    ``"constant"`` (``means``) or ``"periodic"`` (``R``, ``amplitude``, ``baseline``).
    """
    if isinstance(spec, str):
        spec = {"type": spec}
    kind = spec.get("type")
    if kind == "abrupt":
        return abrupt_scenario(T)
    if kind == "periodic":
        return PeriodicBernoulli(
            T=T,
            R=float(spec.get("R", 1.0)),
            amplitude=float(spec.get("amplitude", 0.4)),
            baseline=float(spec.get("baseline", 0.5)),
        )
    if kind == "piecewise":
        return PiecewiseConstantBernoulli(
            tuple(tuple((int(s), float(p)) for s, p in arm) for arm in spec["segments"]), T
        )
    if kind == "constant":
        return PiecewiseConstantBernoulli.constant(spec["means"], T)
    raise ValueError(f"unknown environment type {kind!r}")
