"""Final regret of D-UCB on the abrupt scenario as the exploration constant varies.

Used to see how much of the D-UCB / SW-UCB gap comes from the padding constant
(D-UCB pads with 2B, SW-UCB with B, so xi/4 puts them on the same footing).
"""
import argparse

import numpy as np

from nsbandits.accounting import regret_series
from nsbandits.core import EpisodeConfig, run_replication
from nsbandits.environments import abrupt_scenario
from nsbandits.policies import DiscountedUCB, SlidingWindowUCB
from nsbandits.tuning import preset_gamma, preset_tau


def final_regret(env, make, reps, seed):
    cfg = EpisodeConfig(env.K, env.T, seed=seed)
    r = np.array([regret_series(run_replication(cfg, env, make(), k))[-1] for k in range(reps)])
    return r.mean(), r.std(ddof=1) / np.sqrt(reps)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--xis", default="0.5,0.25,0.125")
    ap.add_argument("--replications", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    env = abrupt_scenario()
    gamma, tau = preset_gamma(env.T), preset_tau(env.T)
    m, se = final_regret(env, lambda: SlidingWindowUCB(tau, 0.5), args.replications, args.seed)
    print(f"SW-UCB tau={tau} xi=0.5: {m:.1f} +/- {se:.1f}")
    for xi in map(float, args.xis.split(",")):
        m, se = final_regret(env, lambda: DiscountedUCB(gamma, xi), args.replications, args.seed)
        print(f"D-UCB gamma={gamma} xi={xi}: {m:.1f} +/- {se:.1f}")


if __name__ == "__main__":
    main()
