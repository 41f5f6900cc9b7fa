"""Run both abrupt and periodic presets and print final regrets.

    python3 scripts/run_fig1.py --replications 100 --out results
"""
import argparse
from pathlib import Path

from nsbandits import runner


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--replications", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    base = Path(args.out) if args.out else runner.default_output_dir()
    for name in runner.PRESETS:
        cfg = runner.preset_config(name, replications=args.replications, seed=args.seed)
        cfg.jobs = args.jobs
        res = runner.run(cfg, base / name)
        print(f"[{name}]")
        for pol, s in res.summaries.items():
            print(f"  {pol:>8s}  {s.final_mean:9.2f} +/- {s.final_stderr:.2f}")


if __name__ == "__main__":
    main()
