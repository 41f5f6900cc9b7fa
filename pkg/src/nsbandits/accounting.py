"""Dynamic (pseudo-)regret, bad-play counts and aggregation over replications."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import EpisodeTrace


def regret_series(trace: EpisodeTrace, env=None) -> np.ndarray:
    """Cumulative expected regret ``r_t = sum_{s<=t} mu_s(*) - mu_s(I_s)``, t = 1..T.

    Uses the analytic means recorded in the trace.  When ``env`` is given the
    means are re-read from it instead, which lets one trace be scored against
    another schedule.
    """
    if env is None:
        gaps = trace.oracle_means - trace.arm_means
    else:
        T = trace.T
        gaps = env.best_means[:T] - env.means[np.arange(T), trace.arms - 1]
    return np.cumsum(gaps)


def realized_regret_series(trace: EpisodeTrace) -> np.ndarray:
    """Oracle mean minus the reward actually collected; diagnostic only."""
    return np.cumsum(trace.oracle_means - trace.rewards)


def bad_play_count(trace: EpisodeTrace, env=None, K: int | None = None) -> np.ndarray:
    """Per-arm count of rounds where the arm was played while not the best arm.

    Returns an integer array indexed by ``arm - 1``.
    """
    best = trace.oracle_arms if env is None else env.best_arms[: trace.T]
    if K is None:
        K = env.K if env is not None else int(max(trace.arms.max(), best.max()))
    bad = trace.arms[trace.arms != best]
    return np.bincount(bad - 1, minlength=K).astype(np.int64)


def arm_frequency(trace: EpisodeTrace, arm: int) -> np.ndarray:
    """``f_t = (1/t) * #{s <= t : I_s = arm}``."""
    t = np.arange(1, trace.T + 1)
    return np.cumsum(trace.arms == arm) / t


@dataclass
class AggregateSummary:
    policy_name: str
    replications: int
    mean_regret: np.ndarray
    stderr_regret: np.ndarray
    mean_bad_plays: np.ndarray
    freq_arm: int
    mean_frequency: np.ndarray
    final_regrets: np.ndarray

    @property
    def T(self) -> int:
        return len(self.mean_regret)

    @property
    def final_mean(self) -> float:
        return float(self.mean_regret[-1])

    @property
    def final_stderr(self) -> float:
        return float(self.stderr_regret[-1])


def mean_and_stderr(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column means and standard errors (unbiased sd / sqrt(n)); stderr is 0 for n = 1."""
    rows = np.asarray(rows, dtype=float)
    n = rows.shape[0]
    mean = rows.mean(axis=0)
    if n < 2:
        return mean, np.zeros_like(mean)
    # sd is shift-invariant; shifting by the first row makes identical rows give exactly 0
    return mean, (rows - rows[0]).std(axis=0, ddof=1) / np.sqrt(n)


def aggregate(traces: Sequence[EpisodeTrace], env, freq_arm: int = 1) -> AggregateSummary:
    if not traces:
        raise ValueError("need at least one trace")
    T = traces[0].T
    names = {tr.policy_name for tr in traces}
    if any(tr.T != T for tr in traces):
        raise ValueError("traces have inconsistent horizons")
    if len(names) != 1:
        raise ValueError(f"traces mix policies: {sorted(names)}")
    regrets = np.stack([regret_series(tr) for tr in traces])
    freqs = np.stack([arm_frequency(tr, freq_arm) for tr in traces])
    bad = np.stack([bad_play_count(tr, env) for tr in traces])
    mean, se = mean_and_stderr(regrets)
    return AggregateSummary(
        policy_name=names.pop(),
        replications=len(traces),
        mean_regret=mean,
        stderr_regret=se,
        mean_bad_plays=bad.mean(axis=0),
        freq_arm=freq_arm,
        mean_frequency=freqs.mean(axis=0),
        final_regrets=regrets[:, -1],
    )
