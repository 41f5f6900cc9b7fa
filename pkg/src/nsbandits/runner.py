"""Experiment configs, the two simulation presets, batch execution and CSV output.

Config is one JSON document::

    {"scenario": "abrupt",
     "T": 10000, "replications": 100, "seed": 0, "freq_arm": 1,
     "breakpoints": 2,
     "policies": [{"type": "ucb1", "xi": 0.5},
                  {"type": "ducb", "xi": 0.5, "gamma": "preset"},
                  {"type": "swucb", "xi": 0.5, "tau": "preset"},
                  {"type": "exp3s", "gamma": "tuned"}]}

``scenario`` is a preset name or an inline schedule (see
``environments.environment_from_dict``).  Discount factors and windows may be
numbers, ``"preset"`` (horizon-only forms) or ``"tuned"`` (from ``breakpoints``).
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import tuning
from .accounting import AggregateSummary, aggregate
from .core import ConfigurationError, EpisodeConfig, EpisodeTrace, run_replication
from .environments import Environment, environment_from_dict
from .policies import EXP3S, UCB1, DiscountedUCB, Oracle, Policy, SlidingWindowUCB

OUTPUT_DIR_ENV = "NSBANDITS_OUTPUT_DIR"
ROUNDS_FILE = "rounds.csv"
SUMMARY_FILE = "summary.csv"

_DEFAULT_NAMES = {"ucb1": "UCB-1", "ducb": "D-UCB", "swucb": "SW-UCB", "exp3s": "EXP3.S", "oracle": "Oracle"}


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class ExperimentConfig:
    scenario: str | dict
    policies: list[dict]
    T: int = 10_000
    replications: int = 100
    seed: int = 0
    freq_arm: int = 1
    B: float = 1.0
    breakpoints: int | None = None
    out_dir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if not self.policies:
            raise ConfigurationError("at least one policy is required")
        if self.replications < 1:
            raise ConfigurationError("replications must be >= 1")
        names = [policy_name(p) for p in self.policies]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"policy names must be unique, got {names}")

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        if "scenario" not in d or "policies" not in d:
            raise ConfigurationError("config needs 'scenario' and 'policies'")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | os.PathLike) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def environment(self) -> Environment:
        env = environment_from_dict(self.scenario, self.T)
        if env.B != self.B:
            raise ConfigurationError("built-in environments have B = 1")
        if self.T < env.K:
            raise ConfigurationError("T must be at least K")
        if not 1 <= self.freq_arm <= env.K:
            raise ConfigurationError(f"freq_arm must lie in 1..{env.K}")
        return env


def preset_config(name: str, T: int = 10_000, replications: int = 100, seed: int = 0) -> ExperimentConfig:
    """``fig1-left``: abrupt three-arm schedule; ``fig1-right``: periodic two-arm schedule."""
    policies = [
        {"type": "ucb1", "xi": 0.5},
        {"type": "exp3s", "gamma": "tuned", "alpha": "tuned"},
        {"type": "ducb", "xi": 0.5, "gamma": "preset"},
        {"type": "swucb", "xi": 0.5, "tau": "preset"},
    ]
    if name == "fig1-left":
        scenario = "abrupt"
    elif name == "fig1-right":
        scenario = {"type": "periodic", "R": 1.0}
    else:
        raise ConfigurationError(f"unknown preset {name!r}; choose fig1-left or fig1-right")
    return ExperimentConfig(scenario, policies, T=T, replications=replications, seed=seed, breakpoints=2)


PRESETS = ("fig1-left", "fig1-right")


def policy_name(spec: dict) -> str:
    return spec.get("name") or _DEFAULT_NAMES.get(spec.get("type"), str(spec.get("type")))


def _breakpoints(config: ExperimentConfig, env: Environment) -> int:
    return config.breakpoints if config.breakpoints is not None else env.breakpoint_count(config.T)


def build_policy(spec: dict, config: ExperimentConfig, env: Environment) -> Policy:
    kind = spec.get("type")
    name = policy_name(spec)
    T, B = config.T, config.B
    xi = float(spec.get("xi", 0.5))
    if kind == "ucb1":
        return UCB1(xi, name=name)
    if kind == "ducb":
        g = spec.get("gamma", "preset")
        if g == "preset":
            g = tuning.preset_gamma(T)
        elif g == "tuned":
            g = tuning.tune_gamma(T, _breakpoints(config, env), B)
        return DiscountedUCB(float(g), xi, name=name)
    if kind == "swucb":
        tau = spec.get("tau", "preset")
        if tau == "preset":
            tau = tuning.preset_tau(T)
        elif tau == "tuned":
            tau = tuning.tune_tau(T, _breakpoints(config, env), B)
        return SlidingWindowUCB(int(tau), xi, name=name)
    if kind == "exp3s":
        g, a = spec.get("gamma", "tuned"), spec.get("alpha", "tuned")
        if g == "tuned":
            g = tuning.exp3s_gamma(env.K, T, _breakpoints(config, env))
        if a == "tuned":
            a = 1.0 / T
        return EXP3S(float(g), float(a), name=name)
    if kind == "oracle":
        return Oracle(env, name=name)
    raise ConfigurationError(f"unknown policy type {kind!r}")


def _run_chunk(args) -> list[EpisodeTrace]:
    spec, config, env, reps = args
    ep = EpisodeConfig(env.K, config.T, config.B, config.seed, config.replications)
    return [run_replication(ep, env, build_policy(spec, config, env), r) for r in reps]


def run_policy(spec: dict, config: ExperimentConfig, env: Environment | None = None) -> list[EpisodeTrace]:
    """All replications of one policy, ordered by replication index."""
    env = env if env is not None else config.environment()
    reps = list(range(config.replications))
    if config.jobs <= 1:
        return _run_chunk((spec, config, env, reps))
    chunks = [reps[k :: config.jobs] for k in range(config.jobs)]
    with ProcessPoolExecutor(config.jobs) as pool:
        parts = list(pool.map(_run_chunk, [(spec, config, env, c) for c in chunks]))
    traces = [tr for part in parts for tr in part]
    return sorted(traces, key=lambda tr: tr.replication)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    summaries: dict[str, AggregateSummary] = field(default_factory=dict)
    paths: dict[str, Path] = field(default_factory=dict)


def simulate(config: ExperimentConfig) -> ExperimentResult:
    env = config.environment()
    result = ExperimentResult(config)
    for spec in config.policies:
        traces = run_policy(spec, config, env)
        result.summaries[policy_name(spec)] = aggregate(traces, env, config.freq_arm)
    return result


def rounds_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "policy", "mean_regret", "stderr_regret", "freq_arm"])
    for name, s in result.summaries.items():
        for t in range(s.T):
            w.writerow([t + 1, name, fmt(s.mean_regret[t]), fmt(s.stderr_regret[t]), fmt(s.mean_frequency[t])])
    return buf.getvalue()


def summary_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    K = max(len(s.mean_bad_plays) for s in result.summaries.values())
    w.writerow(["policy", "T", "final_mean_regret", "final_stderr"] + [f"bad_plays_arm{k}" for k in range(1, K + 1)])
    for name, s in result.summaries.items():
        w.writerow([name, s.T, fmt(s.final_mean), fmt(s.final_stderr)] + [fmt(x) for x in s.mean_bad_plays])
    return buf.getvalue()


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "results"))


def run(config: ExperimentConfig, out_dir: str | os.PathLike | None = None) -> ExperimentResult:
    """Simulate and write ``rounds.csv`` and ``summary.csv`` (plus the resolved config)."""
    out = Path(out_dir or config.out_dir or default_output_dir())
    result = simulate(config)
    out.mkdir(parents=True, exist_ok=True)
    for fname, body in ((ROUNDS_FILE, rounds_csv(result)), (SUMMARY_FILE, summary_csv(result))):
        path = out / fname
        path.write_text(body)
        result.paths[fname] = path
    cfg_path = out / "config.json"
    cfg_path.write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
    result.paths["config.json"] = cfg_path
    return result
