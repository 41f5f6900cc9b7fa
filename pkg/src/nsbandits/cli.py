"""Command line entry point: ``nsbandits {simulate,bounds,concentration,lowerbound,tune}``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

from . import runner, theory, tuning
from .concentration import StreamSpec, exceedance_grid
from .core import ConfigurationError, derive_stream
from .lowerbound import LowerBoundConfig, mixture_regret, mixture_scan
from .policies import EXP3S, UCB1, DiscountedUCB, Oracle, SlidingWindowUCB


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(float(x)) for x in text.split(",") if x.strip()]


def _out_dir(args) -> Path:
    return Path(args.out) if args.out else runner.default_output_dir()


def cmd_simulate(args) -> int:
    if args.preset:
        config = runner.preset_config(args.preset)
    elif args.config:
        config = runner.ExperimentConfig.from_json(args.config)
    else:
        raise ConfigurationError("give a config path or --preset")
    for key in ("seed", "replications", "T", "jobs"):
        value = getattr(args, key)
        if value is not None:
            setattr(config, key, value)
    config.__post_init__()
    result = runner.run(config, args.out)
    for name, s in result.summaries.items():
        print(f"{name:>8s}  final regret {s.final_mean:10.2f} +/- {s.final_stderr:.2f}")
    print(f"wrote {result.paths[runner.ROUNDS_FILE]} and {result.paths[runner.SUMMARY_FILE]}")
    return 0


def cmd_bounds(args) -> int:
    reports = []
    if args.gamma is not None or args.tau is None:
        gamma = args.gamma if args.gamma is not None else tuning.tune_gamma(args.T, max(args.breakpoints, 1), args.B)
        reports.append(
            theory.ducb_regret_bound(gamma, args.xi, args.B, args.T, args.breakpoints, args.delta, args.K)
        )
    if args.tau is not None or args.gamma is None:
        tau = args.tau if args.tau is not None else tuning.tune_tau(args.T, max(args.breakpoints, 1), args.B)
        reports.append(theory.swucb_regret_bound(tau, args.xi, args.B, args.T, args.breakpoints, args.delta))
    payload = [
        {"policy": r.name, "T": r.horizon, "rhs": r.rhs, "vacuous": r.vacuous, **r.values, "flags": r.flags}
        for r in reports
    ]
    print(json.dumps(payload, indent=2))
    return 0


def cmd_concentration(args) -> int:
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "concentration.csv"
    header = ["rule", "gamma", "delta", "T", "replications", "kind", "empirical", "stderr", "bound", "sharp_bound", "holds"]
    rows = []
    for rule in args.rules.split(","):
        spec = StreamSpec(p=args.p, rule=rule)
        for g_idx, gamma in enumerate(_floats(args.gammas)):
            rng = derive_stream(args.seed, 0, f"conc-{rule}-{g_idx}")
            grid = exceedance_grid(spec, gamma, _floats(args.deltas), args.T, args.replications, rng, eta=args.eta)
            for delta, fixed, sup in grid:
                for kind, r in (("fixed", fixed), ("sup", sup)):
                    rows.append(
                        [rule, gamma, delta, args.T, args.replications, kind,
                         runner.fmt(r.empirical), runner.fmt(r.stderr), runner.fmt(r.bound),
                         runner.fmt(r.sharp_bound), r.holds]
                    )
                    print(f"{rule:16s} gamma={gamma:<6g} delta={delta:<4g} {kind:5s} "
                          f"p={r.empirical:.5f} bound={r.bound:.4f} holds={r.holds}")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}")
    return 0 if all(r[-1] for r in rows) else 1


def _lb_factory(name: str, xi: float):
    if name == "ucb1":
        return lambda env: UCB1(xi)
    if name == "oracle":
        return lambda env: Oracle(env)
    if name == "ducb":
        return lambda env: DiscountedUCB(tuning.preset_gamma(env.T), xi)
    if name == "swucb":
        return lambda env: SlidingWindowUCB(tuning.preset_tau(env.T), xi)
    if name == "exp3s":
        return lambda env: EXP3S.tuned(env.K, env.T, 2)
    raise ConfigurationError(f"unknown policy {name!r}")


def cmd_lowerbound(args) -> int:
    out = _out_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    factory = _lb_factory(args.policy, args.xi)
    means = _floats(args.means)
    if args.scan:
        rows = mixture_scan(factory, means, args.nu, _ints(args.scan), args.M, args.replications, args.seed)
        path = out / "lowerbound_scan.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["T", "M", "period", "mixture_regret", "mixture_regret_se", "base_pulls_K", "ratio"])
            for r in rows:
                w.writerow([r.T, r.M, r.period, runner.fmt(r.mixture_regret), runner.fmt(r.mixture_regret_se),
                            runner.fmt(r.base_pulls_K), runner.fmt(r.ratio)])
                print(f"T={r.T:<8d} mixture={r.mixture_regret:10.2f} ratio={r.ratio:.4f}")
        print(f"wrote {path}")
        return 0
    config = LowerBoundConfig.with_periods(means, args.nu, args.T, args.M, replications=args.replications, seed=args.seed)
    report = mixture_regret(factory, config)
    runs_path = out / "lowerbound_runs.csv"
    with open(runs_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["policy", "T", "j", "replication", "regret"])
        for j, rep, regret in report.runs:
            w.writerow([report.policy_name, report.T, j, rep, runner.fmt(regret)])
    summary = report.summary()
    summary_path = out / "lowerbound_summary.csv"
    with open(summary_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(summary))
        w.writerow([runner.fmt(v) if isinstance(v, float) else v for v in summary.values()])
    print(json.dumps({k: (None if isinstance(v, float) and math.isnan(v) else v) for k, v in summary.items()}, indent=2))
    print(f"wrote {runs_path} and {summary_path}")
    return 0


def cmd_tune(args) -> int:
    out = {}
    if args.breakpoints is not None:
        out["gamma"] = tuning.tune_gamma(args.T, args.breakpoints, args.B)
        out["tau"] = tuning.tune_tau(args.T, args.breakpoints, args.B)
    if args.density is not None:
        out["gamma_density"] = tuning.tune_gamma_density(args.density, args.B)
        out["tau_density"] = tuning.tune_tau_density(args.density, args.B)
    if args.beta is not None:
        out["gamma_doubling"] = tuning.doubling_gamma(args.T, args.beta, args.B)
    out["gamma_preset"] = tuning.preset_gamma(args.T)
    out["tau_preset"] = tuning.preset_tau(args.T)
    print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nsbandits", description="Non-stationary bandit simulations and bounds.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run an experiment config or preset and write CSVs")
    s.add_argument("config", nargs="?", help="JSON experiment config")
    s.add_argument("--preset", choices=runner.PRESETS)
    s.add_argument("--out", help=f"output directory (default ${runner.OUTPUT_DIR_ENV} or ./results)")
    s.add_argument("--seed", type=int)
    s.add_argument("--replications", type=int)
    s.add_argument("--T", type=int)
    s.add_argument("--jobs", type=int)
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="evaluate the D-UCB / SW-UCB bad-play bounds")
    b.add_argument("--T", type=int, default=10_000)
    b.add_argument("--K", type=int, default=3)
    b.add_argument("--B", type=float, default=1.0)
    b.add_argument("--xi", type=float, default=0.6)
    b.add_argument("--delta", type=float, default=0.2, help="gap of the arm")
    b.add_argument("--breakpoints", type=int, default=2)
    b.add_argument("--gamma", type=float, help="discount factor (default: tuned)")
    b.add_argument("--tau", type=int, help="window (default: tuned)")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("concentration", help="Monte Carlo check of the deviation inequalities")
    c.add_argument("--gammas", default="0.9,0.99,1")
    c.add_argument("--deltas", default="0.5,1.0,1.5")
    c.add_argument("--rules", default="always,below_threshold")
    c.add_argument("--T", type=int, default=500)
    c.add_argument("--p", type=float, default=0.5)
    c.add_argument("--eta", type=float, default=0.3)
    c.add_argument("--replications", type=int, default=100_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_concentration)

    lb = sub.add_parser("lowerbound", help="mixture-regret lower-bound lab")
    lb.add_argument("--policy", default="ucb1", choices=["ucb1", "ducb", "swucb", "exp3s", "oracle"])
    lb.add_argument("--means", default="0.5,0.3")
    lb.add_argument("--nu", type=float, default=0.7)
    lb.add_argument("--T", type=int, default=10_000)
    lb.add_argument("--M", type=int, default=10)
    lb.add_argument("--xi", type=float, default=0.5)
    lb.add_argument("--replications", type=int, default=50)
    lb.add_argument("--seed", type=int, default=0)
    lb.add_argument("--scan", help="comma-separated horizons for the ratio scan")
    lb.add_argument("--out")
    lb.set_defaults(func=cmd_lowerbound)

    t = sub.add_parser("tune", help="print tuned discount factors and windows")
    t.add_argument("--T", type=int, default=10_000)
    t.add_argument("--B", type=float, default=1.0)
    t.add_argument("--breakpoints", type=int)
    t.add_argument("--density", type=float)
    t.add_argument("--beta", type=float)
    t.set_defaults(func=cmd_tune)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"nsbandits: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
