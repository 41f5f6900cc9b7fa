"""Counting bounds on plays of an arm while its recent (windowed or discounted) count is small.

The window at round t is rounds ``t - tau + 1 .. t`` (current round included);
``include_current=False`` shifts it to ``t - tau .. t - 1``.  Sums run over all
rounds 1..T, which dominates the sum from K+1 used in the bandit proofs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass
class CountingCheck:
    lhs: float
    rhs: float
    rhs_with_K: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def holds_with_K(self) -> bool:
        return self.lhs <= self.rhs_with_K


def windowed_play_counts(plays: Sequence[int], arm: int, tau: int, include_current: bool = True) -> list[int]:
    """Direct scan: number of plays of ``arm`` in the window attached to each round."""
    T = len(plays)
    out = []
    for t in range(1, T + 1):
        hi = t if include_current else t - 1
        lo = max(1, hi - tau + 1)
        out.append(sum(1 for s in range(lo, hi + 1) if plays[s - 1] == arm))
    return out


def counting_lemma_check(
    plays: Sequence[int],
    tau: int,
    m: float,
    arm: int,
    K: int | None = None,
    include_current: bool = True,
) -> CountingCheck:
    """``#{t : I_t = arm, windowed count < m}`` against ``ceil(T/tau) m`` (and K times that)."""
    if not m > 0 or tau < 1:
        raise ValueError("need m > 0 and tau >= 1")
    T = len(plays)
    K = K if K is not None else max(max(plays), arm)
    counts = windowed_play_counts(plays, arm, tau, include_current)
    lhs = sum(1 for t in range(T) if plays[t] == arm and counts[t] < m)
    rhs = math.ceil(T / tau) * m
    return CountingCheck(lhs, rhs, K * rhs)


def discounted_play_counts(plays: Sequence[int], arm: int, gamma: float) -> list[float]:
    """``N_t(gamma, arm) = sum_{s<=t} gamma^(t-s) 1{I_s = arm}`` by direct summation."""
    return [
        math.fsum(gamma ** (t - s) for s in range(1, t + 1) if plays[s - 1] == arm)
        for t in range(1, len(plays) + 1)
    ]


def counting_corollary_check(
    plays: Sequence[int], gamma: float, tau: int, A: float, arm: int, K: int | None = None
) -> CountingCheck:
    """``#{t : I_t = arm, N_t(gamma, arm) < A}`` against ``ceil(T/tau) A gamma^(-tau)``."""
    if not 0.0 < gamma < 1.0 or not A > 0 or tau < 1:
        raise ValueError("need gamma in (0, 1), A > 0 and tau >= 1")
    T = len(plays)
    K = K if K is not None else max(max(plays), arm)
    counts = discounted_play_counts(plays, arm, gamma)
    lhs = sum(1 for t in range(T) if plays[t] == arm and counts[t] < A)
    rhs = math.ceil(T / tau) * A * gamma ** (-tau)
    return CountingCheck(lhs, rhs, K * rhs)


# --- batch (vectorised) versions ------------------------------------------


def all_play_sequences(K: int, T: int) -> np.ndarray:
    """Every sequence in {1..K}^T as rows of a (K^T, T) array."""
    idx = np.arange(K**T)
    digits = (idx[:, None] // K ** np.arange(T - 1, -1, -1)[None, :]) % K
    return digits + 1


def batch_windowed_counts(plays: np.ndarray, arm: int, tau: int, include_current: bool = True) -> np.ndarray:
    hits = (plays == arm).astype(np.int64)
    csum = np.concatenate([np.zeros((len(plays), 1), np.int64), np.cumsum(hits, axis=1)], axis=1)
    T = plays.shape[1]
    t = np.arange(1, T + 1)
    hi = t if include_current else t - 1
    lo = np.maximum(hi - tau, 0)
    return csum[:, hi] - csum[:, lo]


def batch_lemma_lhs(plays: np.ndarray, tau: int, m: float, arm: int, include_current: bool = True) -> np.ndarray:
    counts = batch_windowed_counts(plays, arm, tau, include_current)
    return np.sum((plays == arm) & (counts < m), axis=1)


def batch_discounted_counts(plays: np.ndarray, arm: int, gamma: float) -> np.ndarray:
    hits = (plays == arm).astype(float)
    out = np.empty_like(hits)
    acc = np.zeros(len(plays))
    for k in range(plays.shape[1]):
        acc = gamma * acc + hits[:, k]
        out[:, k] = acc
    return out


@dataclass
class ExhaustiveRow:
    tau: int
    m: float
    max_lhs: int
    rhs: float
    rhs_with_K: float
    sequences: int

    @property
    def holds(self) -> bool:
        return self.max_lhs <= self.rhs


def exhaustive_counting_lemma(
    K: int,
    T: int,
    taus: Sequence[int],
    ms: Sequence[float],
    arm: int = 1,
    include_current: bool = True,
) -> list[ExhaustiveRow]:
    """Maximum left-hand side over all K^T play sequences for each (tau, m)."""
    plays = all_play_sequences(K, T)
    rows = []
    for tau in taus:
        for m in ms:
            lhs = batch_lemma_lhs(plays, tau, m, arm, include_current)
            rhs = math.ceil(T / tau) * m
            rows.append(ExhaustiveRow(tau, m, int(lhs.max()), rhs, K * rhs, len(plays)))
    return rows


def randomized_corollary_check(
    K: int,
    T: int,
    gamma: float,
    tau: int,
    A: float,
    n_sequences: int,
    rng: np.random.Generator,
    arm: int = 1,
) -> tuple[int, float, int]:
    """Uniform random play sequences; returns ``(max_lhs, rhs, violations)`` for the K-free form."""
    plays = rng.integers(1, K + 1, size=(n_sequences, T))
    counts = batch_discounted_counts(plays, arm, gamma)
    lhs = np.sum((plays == arm) & (counts < A), axis=1)
    rhs = math.ceil(T / tau) * A * gamma ** (-tau)
    return int(lhs.max()), rhs, int(np.sum(lhs > rhs))
