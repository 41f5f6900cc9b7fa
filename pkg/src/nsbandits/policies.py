"""UCB-1, discounted UCB, sliding-window UCB, EXP3.S and the dynamic oracle.

Arms are 1-based in every public method.  Indices are computed from the rounds
completed so far: at decision round ``t`` the statistics cover rounds 1..t-1.
Logarithms are natural; a log of an argument below 1 is clamped to 0.
"""
from __future__ import annotations

import math
from collections import deque
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .tuning import exp3s_gamma

if TYPE_CHECKING:
    from .environments import Environment

INF = math.inf
# discounted counts below this are treated as zero (underflow guard)
DUCB_ZERO_COUNT = 1e-300
# EXP3.S weights are rescaled once their total exceeds this
EXP3S_RESCALE_AT = 1e200


def select_arm(indices: Sequence[float]) -> int:
    """1-based argmax with lowest-index tie-break; +inf beats every finite value."""
    best, best_value = 0, -INF
    for k, value in enumerate(indices):
        if value != value:
            raise ValueError(f"NaN index for arm {k + 1}")
        if value > best_value:
            best, best_value = k, value
    return best + 1


def _log_clamped(x: float) -> float:
    return math.log(x) if x > 1.0 else 0.0


class Policy:
    """Base class.  ``reset`` is called once per episode before round 1."""

    name = "policy"
    round_robin_init = True
    randomized = False

    def reset(self, K: int, T: int, B: float = 1.0, rng: np.random.Generator | None = None) -> None:
        self.K, self.T, self.B = K, T, B
        self.rng = rng

    def select(self, t: int) -> int:
        raise NotImplementedError

    def update(self, arm: int, reward: float) -> None:
        raise NotImplementedError

    def params(self) -> dict:
        return {}


class UCB1(Policy):
    """Empirical mean plus ``B * sqrt(xi * log t / N_t(i))``."""

    name = "UCB-1"

    def __init__(self, xi: float = 0.5, name: str | None = None):
        if not xi > 0:
            raise ValueError("xi must be positive")
        self.xi = float(xi)
        if name:
            self.name = name

    def reset(self, K, T, B=1.0, rng=None):
        super().reset(K, T, B, rng)
        self.t = 0
        self.counts = [0] * K
        self.sums = [0.0] * K

    def index(self, i: int) -> float:
        n = self.counts[i - 1]
        if n == 0:
            return INF
        return self.sums[i - 1] / n + self.B * math.sqrt(self.xi * _log_clamped(self.t) / n)

    def indices(self) -> list[float]:
        return [self.index(i) for i in range(1, self.K + 1)]

    def select(self, t):
        return select_arm(self.indices())

    def update(self, arm, reward):
        self.t += 1
        self.counts[arm - 1] += 1
        self.sums[arm - 1] += reward

    def params(self):
        return {"xi": self.xi}


class DiscountedUCB(Policy):
    """D-UCB: statistics discounted by ``gamma`` each round, padding ``2B sqrt(xi log n_t / N_t)``."""

    name = "D-UCB"

    def __init__(self, gamma: float, xi: float = 0.5, name: str | None = None):
        if not 0.0 < gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if not xi > 0:
            raise ValueError("xi must be positive")
        self.gamma = float(gamma)
        self.xi = float(xi)
        if name:
            self.name = name

    def reset(self, K, T, B=1.0, rng=None):
        super().reset(K, T, B, rng)
        self.t = 0
        self.counts = [0.0] * K
        self.sums = [0.0] * K
        self.total = 0.0

    def index(self, i: int) -> float:
        n = self.counts[i - 1]
        if n < DUCB_ZERO_COUNT:
            return INF
        return self.sums[i - 1] / n + 2 * self.B * math.sqrt(self.xi * _log_clamped(self.total) / n)

    def indices(self) -> list[float]:
        return [self.index(i) for i in range(1, self.K + 1)]

    def select(self, t):
        return select_arm(self.indices())

    def update(self, arm, reward):
        g = self.gamma
        counts, sums = self.counts, self.sums
        for k in range(self.K):
            counts[k] *= g
            sums[k] *= g
        counts[arm - 1] += 1.0
        sums[arm - 1] += reward
        self.total = g * self.total + 1.0
        self.t += 1

    def params(self):
        return {"gamma": self.gamma, "xi": self.xi}


class SlidingWindowUCB(Policy):
    """SW-UCB: statistics over the last ``tau`` plays, padding ``B sqrt(xi log(t ^ tau) / N_t(tau, i))``."""

    name = "SW-UCB"

    def __init__(self, tau: int, xi: float = 0.5, name: str | None = None):
        if int(tau) != tau or tau < 1:
            raise ValueError("tau must be a positive integer")
        if not xi > 0:
            raise ValueError("xi must be positive")
        self.tau = int(tau)
        self.xi = float(xi)
        if name:
            self.name = name

    def reset(self, K, T, B=1.0, rng=None):
        super().reset(K, T, B, rng)
        self.t = 0
        self.window: deque[tuple[int, float]] = deque()
        self.counts = [0] * K
        self.sums = [0.0] * K

    def index(self, i: int) -> float:
        n = self.counts[i - 1]
        if n == 0:
            return INF
        return self.sums[i - 1] / n + self.B * math.sqrt(
            self.xi * _log_clamped(min(self.t, self.tau)) / n
        )

    def indices(self) -> list[float]:
        return [self.index(i) for i in range(1, self.K + 1)]

    def select(self, t):
        return select_arm(self.indices())

    def update(self, arm, reward):
        if len(self.window) == self.tau:
            old_arm, old_reward = self.window.popleft()
            self.counts[old_arm - 1] -= 1
            if self.counts[old_arm - 1] == 0:
                self.sums[old_arm - 1] = 0.0
            else:
                self.sums[old_arm - 1] -= old_reward
        self.window.append((arm, reward))
        self.counts[arm - 1] += 1
        self.sums[arm - 1] += reward
        self.t += 1

    def params(self):
        return {"tau": self.tau, "xi": self.xi}


def exp3s_probabilities(weights: Sequence[float], gamma: float) -> list[float]:
    """Mixture of normalised weights and the uniform distribution."""
    if not all(0.0 < w < INF for w in weights):
        raise ValueError("EXP3.S weights must be positive and finite")
    K = len(weights)
    total = math.fsum(weights)
    return [(1.0 - gamma) * w / total + gamma / K for w in weights]


def exp3s_update(
    weights: Sequence[float],
    played: int,
    reward: float,
    p_played: float,
    gamma: float,
    alpha: float,
    B: float = 1.0,
) -> list[float]:
    """Importance-weighted exponential update with fixed-share mixing.

    ``w'(i) = w(i) exp(gamma xhat(i) / K) + (e alpha / K) sum_j w(j)`` where
    ``xhat`` is ``(reward / B) / p_played`` on the played arm and 0 elsewhere.
    Weights are rescaled by a common factor when they grow too large.
    """
    if not p_played > 0:
        raise ValueError("probability of the played arm must be positive")
    K = len(weights)
    share = math.e * alpha / K * math.fsum(weights)
    new = [w + share for w in weights]
    new[played - 1] = weights[played - 1] * math.exp(gamma * (reward / B) / p_played / K) + share
    total = math.fsum(new)
    if total > EXP3S_RESCALE_AT:
        new = [w / total for w in new]
    return new


class EXP3S(Policy):
    """Randomised exponential weights with fixed share; chooses from round 1."""

    name = "EXP3.S"
    round_robin_init = False
    randomized = True

    def __init__(self, gamma: float, alpha: float, name: str | None = None):
        if not 0.0 < gamma <= 1.0:
            raise ValueError("EXP3.S mixing gamma must lie in (0, 1]")
        if alpha < 0:
            raise ValueError("EXP3.S sharing alpha must be >= 0")
        self.gamma = float(gamma)
        self.alpha = float(alpha)
        if name:
            self.name = name

    @classmethod
    def tuned(cls, K: int, T: int, breakpoints: int, name: str | None = None) -> "EXP3S":
        """Mixing rate from ``tuning.exp3s_gamma`` and sharing rate ``1/T``."""
        return cls(exp3s_gamma(K, T, breakpoints), 1.0 / T, name=name)

    def reset(self, K, T, B=1.0, rng=None):
        if rng is None:
            raise ValueError("EXP3.S needs a random generator")
        super().reset(K, T, B, rng)
        self.weights = [1.0] * K
        self._probs = None

    def probabilities(self) -> list[float]:
        return exp3s_probabilities(self.weights, self.gamma)

    def select(self, t):
        self._probs = probs = self.probabilities()
        u = self.rng.random() * math.fsum(probs)
        acc = 0.0
        for k, p in enumerate(probs):
            acc += p
            if u < acc:
                return k + 1
        return self.K

    def update(self, arm, reward):
        probs = self._probs if self._probs is not None else self.probabilities()
        self.weights = exp3s_update(
            self.weights, arm, reward, probs[arm - 1], self.gamma, self.alpha, self.B
        )
        self._probs = None

    def params(self):
        return {"gamma": self.gamma, "alpha": self.alpha}


class Oracle(Policy):
    """Plays the instantaneous best arm; needs the environment, so it is not an admissible policy."""

    name = "Oracle"
    round_robin_init = False

    def __init__(self, env: "Environment", name: str | None = None):
        self.env = env
        if name:
            self.name = name

    def select(self, t):
        return int(self.env.best_arms[t - 1])

    def update(self, arm, reward):
        pass


def oracle_select(env: "Environment", t: int) -> int:
    return env.best_arm(t)[0]
