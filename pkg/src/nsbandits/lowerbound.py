"""Period-shifted perturbations of a stationary Bernoulli bandit and the mixture regret.

The base environment has constant means ``mu(1) > mu(2) >= ... >= mu(K)``.
Perturbation j (1 <= j <= M = floor(T / period)) raises arm K to ``nu > mu(1)``
on rounds ``(j-1) period + 1 .. j period``.  The mixture regret is the
uniform average over j of the regret under perturbation j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .accounting import mean_and_stderr, regret_series
from .core import EpisodeConfig, run_episode, derive_stream
from .environments import Environment, PiecewiseConstantBernoulli
from .policies import Oracle, Policy

PolicyFactory = Callable[[Environment], Policy]


def kl_bernoulli(p: float, q: float) -> float:
    """``KL(Bernoulli(p) || Bernoulli(q))`` with ``0 log 0 = 0``."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    if (q == 0.0 and p > 0.0) or (q == 1.0 and p < 1.0):
        raise ValueError(f"KL({p} || {q}) is infinite")
    total = 0.0
    if p > 0.0:
        total += p * math.log(p / q)
    if p < 1.0:
        total += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return total


@dataclass(frozen=True)
class LowerBoundConfig:
    base_means: tuple[float, ...]
    nu: float
    T: int
    period: int
    replications: int = 50
    seed: int = 0

    def __post_init__(self):
        mu = tuple(float(m) for m in self.base_means)
        object.__setattr__(self, "base_means", mu)
        if len(mu) < 2:
            raise ValueError("need at least two arms")
        if any(not mu[0] > m for m in mu[1:]):
            raise ValueError("arm 1 must be the unique best arm of the base environment")
        if not mu[0] < self.nu <= 1.0:
            raise ValueError("nu must satisfy mu(1) < nu <= 1")
        if not 1 <= self.period <= self.T:
            raise ValueError("period must lie in 1..T")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")

    @classmethod
    def with_periods(cls, base_means, nu, T, M, **kw) -> "LowerBoundConfig":
        """Split the horizon into ``M`` periods of length ``T // M``."""
        return cls(tuple(base_means), nu, T, T // M, **kw)

    @property
    def K(self) -> int:
        return len(self.base_means)

    @property
    def M(self) -> int:
        return self.T // self.period

    @property
    def gap(self) -> float:
        """``nu - mu(1)``."""
        return self.nu - self.base_means[0]

    @property
    def alpha(self) -> float:
        """KL divergence from the base law of arm K to the perturbed law."""
        return kl_bernoulli(self.base_means[-1], self.nu)

    @property
    def C_mu(self) -> float:
        return lower_bound_constant(self.base_means, self.nu)


def lower_bound_constant(base_means: Sequence[float], nu: float) -> float:
    """``32 (nu - mu(1)) (mu(1) - mu(K)) / (27 KL(mu(K), nu))``."""
    mu1, muK = base_means[0], base_means[-1]
    return 32.0 * (nu - mu1) * (mu1 - muK) / (27.0 * kl_bernoulli(muK, nu))


def base_env(config: LowerBoundConfig) -> PiecewiseConstantBernoulli:
    return PiecewiseConstantBernoulli.constant(config.base_means, config.T)


def modified_env(config: LowerBoundConfig, j: int) -> PiecewiseConstantBernoulli:
    if not 1 <= j <= config.M:
        raise ValueError(f"period index {j} outside 1..{config.M}")
    lo, hi = (j - 1) * config.period + 1, j * config.period
    muK, nu = config.base_means[-1], config.nu
    last = [(1, nu)] if lo == 1 else [(1, muK), (lo, nu)]
    if hi < config.T:
        last.append((hi + 1, muK))
    segments = tuple(((1, m),) for m in config.base_means[:-1]) + (tuple(last),)
    return PiecewiseConstantBernoulli(segments, config.T)


def policy_class(policy: Policy) -> str:
    if isinstance(policy, Oracle):
        return "oracle (not admissible)"
    return "randomized" if policy.randomized else "deterministic"


@dataclass
class MixtureRegretReport:
    policy_name: str
    policy_class: str
    T: int
    M: int
    period: int
    replications: int
    base_regret: float
    base_regret_se: float
    base_pulls_K: float
    mixture_regret: float
    mixture_regret_se: float
    period_regrets: list[float]
    alpha: float
    C_mu: float
    gap: float
    base_means: tuple[float, ...]
    runs: list[tuple[int, int, float]] = field(default_factory=list, repr=False)

    @property
    def admissible(self) -> bool:
        return not self.policy_class.startswith("oracle")

    @property
    def theorem_bound(self) -> float:
        """``C(mu) T / E[R_T]`` on the base environment (inf when the base regret is 0)."""
        if self.base_regret <= 0:
            return math.inf
        return self.C_mu * self.T / self.base_regret

    @property
    def proof_bound(self) -> float:
        """Bound before dropping the correction factors in ``E[N_T(K)]``."""
        n, a = self.base_pulls_K, self.alpha
        if n <= 0 or self.base_regret <= 0:
            return math.nan
        return (
            self.C_mu
            * (1.0 - a * n / self.T) ** 2
            * (1.0 - 16.0 / (9.0 * a * n))
            * self.T
            / self.base_regret
        )

    @property
    def corollary_bound(self) -> float:
        """``sqrt(C(mu) T)``."""
        return math.sqrt(self.C_mu * self.T)

    @property
    def condition_stated(self) -> bool:
        """``64/(9 alpha) <= E[N_T(K)] <= T/(4 alpha)``."""
        n, a = self.base_pulls_K, self.alpha
        return 64.0 / (9.0 * a) <= n <= self.T / (4.0 * a)

    @property
    def condition_proof(self) -> bool:
        """``16/(9 alpha) <= E[N_T(K)] <= T/alpha``."""
        n, a = self.base_pulls_K, self.alpha
        return 16.0 / (9.0 * a) <= n <= self.T / a

    def corollary_max(self) -> tuple[float, float]:
        """Larger of the base and mixture regret, with its standard error."""
        if self.mixture_regret >= self.base_regret:
            return self.mixture_regret, self.mixture_regret_se
        return self.base_regret, self.base_regret_se

    def corollary_holds(self, n_se: float = 3.0) -> bool:
        value, se = self.corollary_max()
        return value >= self.corollary_bound - n_se * se

    def summary(self) -> dict:
        return {
            "policy": self.policy_name,
            "policy_class": self.policy_class,
            "T": self.T,
            "M": self.M,
            "period": self.period,
            "replications": self.replications,
            "base_regret": self.base_regret,
            "base_regret_se": self.base_regret_se,
            "base_pulls_K": self.base_pulls_K,
            "mixture_regret": self.mixture_regret,
            "mixture_regret_se": self.mixture_regret_se,
            "alpha": self.alpha,
            "C_mu": self.C_mu,
            "theorem_bound": self.theorem_bound,
            "proof_bound": self.proof_bound,
            "corollary_bound": self.corollary_bound,
            "condition_stated": self.condition_stated,
            "condition_proof": self.condition_proof,
            "corollary_holds": self.corollary_holds() if self.admissible else None,
        }


def _final_regrets(
    factory: PolicyFactory, env: Environment, config: LowerBoundConfig, tag: str
) -> tuple[np.ndarray, np.ndarray]:
    ep = EpisodeConfig(config.K, config.T, 1.0, config.seed, config.replications)
    regrets = np.empty(config.replications)
    pulls_K = np.empty(config.replications)
    for r in range(config.replications):
        trace = run_episode(
            ep,
            env,
            factory(env),
            derive_stream(config.seed, r, f"{tag}-env"),
            policy_rng=derive_stream(config.seed, r, f"{tag}-policy"),
            replication=r,
        )
        regrets[r] = regret_series(trace)[-1]
        pulls_K[r] = np.count_nonzero(trace.arms == config.K)
    return regrets, pulls_K


def mixture_regret(factory: PolicyFactory, config: LowerBoundConfig) -> MixtureRegretReport:
    """Estimate the base regret, ``E[N_T(K)]`` and the mixture regret of ``factory``'s policy."""
    base = base_env(config)
    probe = factory(base)
    base_regrets, pulls = _final_regrets(factory, base, config, "lb-base")
    b_mean, b_se = mean_and_stderr(base_regrets[:, None])
    runs = [(0, r, float(x)) for r, x in enumerate(base_regrets)]
    period_means, period_vars = [], []
    for j in range(1, config.M + 1):
        regrets, _ = _final_regrets(factory, modified_env(config, j), config, f"lb-{j}")
        runs.extend((j, r, float(x)) for r, x in enumerate(regrets))
        period_means.append(float(regrets.mean()))
        period_vars.append(float(regrets.var(ddof=1)) / len(regrets) if len(regrets) > 1 else 0.0)
    M = config.M
    return MixtureRegretReport(
        policy_name=probe.name,
        policy_class=policy_class(probe),
        T=config.T,
        M=M,
        period=config.period,
        replications=config.replications,
        base_regret=float(b_mean[0]),
        base_regret_se=float(b_se[0]),
        base_pulls_K=float(pulls.mean()),
        mixture_regret=float(np.mean(period_means)),
        mixture_regret_se=math.sqrt(sum(period_vars)) / M,
        period_regrets=period_means,
        alpha=config.alpha,
        C_mu=config.C_mu,
        gap=config.gap,
        base_means=config.base_means,
        runs=runs,
    )


def auto_period(factory: PolicyFactory, config: LowerBoundConfig, pilot_replications: int = 10) -> int:
    """Period ``16 T / (9 alpha E[N_T(K)])`` from a pilot estimate on the base environment."""
    pilot = LowerBoundConfig(config.base_means, config.nu, config.T, config.period, pilot_replications, config.seed)
    _, pulls = _final_regrets(factory, base_env(pilot), pilot, "lb-pilot")
    n = float(pulls.mean())
    if n <= 0:
        return config.T
    return int(min(config.T, max(1, round(16.0 * config.T / (9.0 * config.alpha * n)))))


@dataclass
class ScanRow:
    T: int
    M: int
    period: int
    mixture_regret: float
    mixture_regret_se: float
    base_pulls_K: float

    @property
    def ratio(self) -> float:
        """``E*[R_T] log T / T``; bounded away from 0 when ``E[N_T(K)]`` grows like ``log T``."""
        return self.mixture_regret * math.log(self.T) / self.T


def mixture_scan(
    factory: PolicyFactory,
    base_means: Sequence[float],
    nu: float,
    T_grid: Sequence[int],
    M: int,
    replications: int,
    seed: int = 0,
) -> list[ScanRow]:
    rows = []
    for T in sorted(T_grid):
        cfg = LowerBoundConfig.with_periods(base_means, nu, T, M, replications=replications, seed=seed)
        rep = mixture_regret(factory, cfg)
        rows.append(ScanRow(T, cfg.M, cfg.period, rep.mixture_regret, rep.mixture_regret_se, rep.base_pulls_K))
    return rows


def ucb1_mixture_scan(
    base_means: Sequence[float],
    nu: float,
    T_grid: Sequence[int],
    M: int = 10,
    replications: int = 20,
    seed: int = 0,
    xi: float = 0.5,
) -> list[ScanRow]:
    from .policies import UCB1

    return mixture_scan(lambda env: UCB1(xi), base_means, nu, T_grid, M, replications, seed)
