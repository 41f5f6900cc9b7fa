"""Upper-confidence-bound policies for non-stationary bandits, their bounds and a simulation harness."""
from .accounting import aggregate, bad_play_count, regret_series
from .core import ConfigurationError, EpisodeConfig, EpisodeTrace, derive_stream, run_episode, run_replication
from .environments import (
    PeriodicBernoulli,
    PiecewiseConstantBernoulli,
    abrupt_scenario,
    periodic_scenario,
)
from .policies import EXP3S, UCB1, DiscountedUCB, Oracle, SlidingWindowUCB, select_arm

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DiscountedUCB",
    "EXP3S",
    "EpisodeConfig",
    "EpisodeTrace",
    "Oracle",
    "PeriodicBernoulli",
    "PiecewiseConstantBernoulli",
    "SlidingWindowUCB",
    "UCB1",
    "abrupt_scenario",
    "aggregate",
    "bad_play_count",
    "derive_stream",
    "periodic_scenario",
    "regret_series",
    "run_episode",
    "run_replication",
    "select_arm",
]
