"""Episode types, deterministic RNG streams and the simulation loop."""
from __future__ import annotations

import hashlib
import zlib
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator

import numpy as np

if TYPE_CHECKING:
    from .environments import Environment
    from .policies import Policy


class ConfigurationError(ValueError):
    """Invalid episode or experiment configuration."""


@dataclass(frozen=True)
class EpisodeConfig:
    K: int
    T: int
    B: float = 1.0
    seed: int = 0
    replication_count: int = 1

    def __post_init__(self):
        if self.K < 2:
            raise ConfigurationError("K must be at least 2")
        if self.T < self.K:
            raise ConfigurationError("horizon T must be at least K")
        if not self.B > 0:
            raise ConfigurationError("reward bound B must be positive")
        if self.replication_count < 1:
            raise ConfigurationError("replication_count must be >= 1")


@dataclass(frozen=True)
class RoundRecord:
    t: int
    arm: int
    reward: float
    oracle_arm: int
    oracle_mean: float
    arm_mean: float


@dataclass(frozen=True, eq=False)
class EpisodeTrace:
    """Column-oriented record of one episode; ``records`` gives the row view."""

    policy_name: str
    replication: int
    arms: np.ndarray
    rewards: np.ndarray
    oracle_arms: np.ndarray
    oracle_means: np.ndarray
    arm_means: np.ndarray

    @property
    def T(self) -> int:
        return len(self.arms)

    def record(self, t: int) -> RoundRecord:
        k = t - 1
        return RoundRecord(
            t,
            int(self.arms[k]),
            float(self.rewards[k]),
            int(self.oracle_arms[k]),
            float(self.oracle_means[k]),
            float(self.arm_means[k]),
        )

    @property
    def records(self) -> list[RoundRecord]:
        return [self.record(t) for t in range(1, self.T + 1)]

    def __iter__(self) -> Iterator[RoundRecord]:
        return (self.record(t) for t in range(1, self.T + 1))

    def digest(self) -> str:
        """SHA-256 over the raw columns; equal digests mean byte-identical traces."""
        h = hashlib.sha256(self.policy_name.encode())
        h.update(np.int64(self.replication).tobytes())
        for col in (self.arms, self.rewards, self.oracle_arms, self.oracle_means, self.arm_means):
            h.update(np.ascontiguousarray(col).tobytes())
        return h.hexdigest()


def derive_stream(seed: int, replication: int, tag: str) -> np.random.Generator:
    """Philox generator keyed by ``(seed, replication, tag)``.

    Streams for distinct keys are independent and may be created in any order,
    so replications can run in parallel.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replication), zlib.crc32(tag.encode())))
    return np.random.Generator(np.random.Philox(ss))


def run_episode(
    config: EpisodeConfig,
    env: "Environment",
    policy: "Policy",
    rng: np.random.Generator,
    *,
    policy_rng: np.random.Generator | None = None,
    replication: int = 0,
) -> EpisodeTrace:
    """Play ``config.T`` rounds of ``policy`` against ``env``.

    Rewards are drawn from ``rng`` (one uniform per round, for the played arm
    only).  Policies flagged ``round_robin_init`` play arms 1..K on rounds
    1..K; the rest choose from round 1.
    """
    K, T = config.K, config.T
    if env.K != K:
        raise ConfigurationError(f"environment has {env.K} arms, config says {K}")
    if env.T < T:
        raise ConfigurationError(f"environment horizon {env.T} shorter than T={T}")
    if env.B != config.B:
        raise ConfigurationError(f"environment reward bound {env.B} differs from config B={config.B}")

    policy.reset(K, T, config.B, rng=policy_rng if policy_rng is not None else rng)
    means = env.means[:T]
    mean_rows = means.tolist()
    uniforms = rng.random(T).tolist()
    B = config.B
    init = K if policy.round_robin_init else 0

    arms = np.empty(T, dtype=np.int64)
    rewards = np.empty(T)
    for t in range(1, T + 1):
        arm = t if t <= init else policy.select(t)
        # built-in environments are Bernoulli on {0, B}
        reward = B if uniforms[t - 1] < mean_rows[t - 1][arm - 1] else 0.0
        policy.update(arm, reward)
        arms[t - 1] = arm
        rewards[t - 1] = reward

    oracle_arms = np.array(env.best_arms[:T])
    oracle_means = np.array(env.best_means[:T])
    arm_means = means[np.arange(T), arms - 1]
    return EpisodeTrace(policy.name, replication, arms, rewards, oracle_arms, oracle_means, arm_means)


def run_replication(
    config: EpisodeConfig, env: "Environment", policy: "Policy", replication: int
) -> EpisodeTrace:
    """``run_episode`` with the env/policy streams derived from ``config.seed``."""
    return run_episode(
        config,
        env,
        policy,
        derive_stream(config.seed, replication, "env"),
        policy_rng=derive_stream(config.seed, replication, "policy"),
        replication=replication,
    )
