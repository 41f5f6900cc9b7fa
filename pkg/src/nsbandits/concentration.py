"""Monte Carlo frequencies of self-normalised deviations, paired with their bounds.

For i.i.d. ``X_s`` in [0, B] and a previsible selection sequence ``eps_s``
the statistic is ``(R_t - E R_t) / sqrt(N_t(gamma^2))`` with

    R_t = sum gamma^(t-s) X_s eps_s,   E R_t = sum gamma^(t-s) mu eps_s,
    N_t(gamma^2) = sum gamma^(2(t-s)) eps_s.

When nothing has been selected yet the statistic is taken as -inf (no deviation).
All replications are simulated together as numpy vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import theory

RULES = ("always", "below_threshold")


@dataclass(frozen=True)
class StreamSpec:
    """Bernoulli(p) rewards scaled to {0, B} and a built-in selection rule.

    ``below_threshold`` selects round t iff nothing has been selected yet or the
    plain running mean of the previously selected rewards is below
    ``threshold`` (default: the mean ``p B``).  It depends only on the strict
    past, so it is previsible by construction.
    """

    p: float = 0.5
    B: float = 1.0
    rule: str = "always"
    threshold: float | None = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown selection rule {self.rule!r}; choose from {RULES}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def mean(self) -> float:
        return self.p * self.B


@dataclass
class ExceedanceResult:
    empirical: float
    bound: float
    sharp_bound: float
    replications: int

    @property
    def stderr(self) -> float:
        p = self.empirical
        return math.sqrt(p * (1.0 - p) / self.replications)

    @property
    def holds(self) -> bool:
        """Empirical frequency within three binomial standard errors of the bound."""
        return self.empirical <= self.bound + 3.0 * self.stderr


def deviation_paths(
    spec: StreamSpec, gamma: float, T: int, replications: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate ``replications`` independent streams for T rounds.

    Returns ``(final, running_sup)``: the statistic at t = T and its maximum
    over 1 <= t <= T, one entry per replication.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    n = int(replications)
    R = np.zeros(n)
    ER = np.zeros(n)
    N2 = np.zeros(n)
    sel_sum = np.zeros(n)
    sel_cnt = np.zeros(n)
    sup = np.full(n, -np.inf)
    stat = np.full(n, -np.inf)
    mu, B = spec.mean, spec.B
    thr = spec.mean if spec.threshold is None else spec.threshold
    g2 = gamma * gamma
    for _ in range(T):
        if spec.rule == "always":
            eps = np.ones(n)
        else:
            eps = ((sel_cnt == 0) | (sel_sum < thr * sel_cnt)).astype(float)
        x = np.where(rng.random(n) < spec.p, B, 0.0) * eps
        R = gamma * R + x
        ER = gamma * ER + mu * eps
        N2 = g2 * N2 + eps
        sel_sum += x
        sel_cnt += eps
        stat = np.full(n, -np.inf)
        pos = N2 > 0
        stat[pos] = (R[pos] - ER[pos]) / np.sqrt(N2[pos])
        np.maximum(sup, stat, out=sup)
    return stat, sup


def exceedance_estimate(
    spec: StreamSpec,
    gamma: float,
    delta: float,
    t: int,
    replications: int,
    rng: np.random.Generator,
    eta: float = 0.3,
) -> ExceedanceResult:
    """Frequency of ``statistic_t > delta`` next to the fixed-t deviation bound."""
    final, _ = deviation_paths(spec, gamma, t, replications, rng)
    n = theory.discounted_total(gamma, t)
    return ExceedanceResult(
        float(np.mean(final > delta)),
        theory.deviation_bound(delta, eta, spec.B, n),
        theory.deviation_bound(delta, eta, spec.B, n, sharp=True),
        replications,
    )


def sup_exceedance_estimate(
    spec: StreamSpec,
    gamma: float,
    delta: float,
    T: int,
    replications: int,
    rng: np.random.Generator,
    eta: float = 0.3,
) -> ExceedanceResult:
    """Frequency of ``max_{t<=T} statistic_t > delta`` next to the maximal bound."""
    _, sup = deviation_paths(spec, gamma, T, replications, rng)
    return ExceedanceResult(
        float(np.mean(sup > delta)),
        theory.maximal_bound(delta, eta, spec.B, gamma, T),
        theory.maximal_bound(delta, eta, spec.B, gamma, T, sharp=True),
        replications,
    )


def exceedance_pair(
    spec: StreamSpec,
    gamma: float,
    delta: float,
    T: int,
    replications: int,
    rng: np.random.Generator,
    eta: float = 0.3,
) -> tuple[ExceedanceResult, ExceedanceResult]:
    """Fixed-t (at t = T) and running-sup results from one shared simulation."""
    final, sup = deviation_paths(spec, gamma, T, replications, rng)
    n = theory.discounted_total(gamma, T)
    fixed = ExceedanceResult(
        float(np.mean(final > delta)),
        theory.deviation_bound(delta, eta, spec.B, n),
        theory.deviation_bound(delta, eta, spec.B, n, sharp=True),
        replications,
    )
    maximal = ExceedanceResult(
        float(np.mean(sup > delta)),
        theory.maximal_bound(delta, eta, spec.B, gamma, T),
        theory.maximal_bound(delta, eta, spec.B, gamma, T, sharp=True),
        replications,
    )
    return fixed, maximal


def exceedance_grid(
    spec: StreamSpec,
    gamma: float,
    deltas,
    T: int,
    replications: int,
    rng: np.random.Generator,
    eta: float = 0.3,
) -> list[tuple[float, ExceedanceResult, ExceedanceResult]]:
    """``(delta, fixed, sup)`` for every delta, all read off one simulation."""
    final, sup = deviation_paths(spec, gamma, T, replications, rng)
    n = theory.discounted_total(gamma, T)
    out = []
    for delta in deltas:
        fixed = ExceedanceResult(
            float(np.mean(final > delta)),
            theory.deviation_bound(delta, eta, spec.B, n),
            theory.deviation_bound(delta, eta, spec.B, n, sharp=True),
            replications,
        )
        maximal = ExceedanceResult(
            float(np.mean(sup > delta)),
            theory.maximal_bound(delta, eta, spec.B, gamma, T),
            theory.maximal_bound(delta, eta, spec.B, gamma, T, sharp=True),
            replications,
        )
        out.append((float(delta), fixed, maximal))
    return out
