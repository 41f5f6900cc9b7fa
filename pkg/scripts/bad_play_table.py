"""Empirical bad-play counts against the D-UCB and SW-UCB upper bounds on the abrupt scenario."""
import argparse

import numpy as np

from nsbandits import theory, tuning
from nsbandits.accounting import bad_play_count
from nsbandits.core import EpisodeConfig, run_replication
from nsbandits.environments import abrupt_scenario
from nsbandits.policies import DiscountedUCB, SlidingWindowUCB


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--xi", type=float, default=0.6)
    ap.add_argument("--replications", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    env = abrupt_scenario()
    T, U, K = env.T, env.breakpoint_count(), env.K
    gamma, tau = tuning.tune_gamma(T, U), tuning.tune_tau(T, U)
    cfg = EpisodeConfig(K, T, seed=args.seed)
    print("policy,arm,delta_mu,mean_bad_plays,bound,vacuous")
    for name, make, bound in (
        ("D-UCB", lambda: DiscountedUCB(gamma, args.xi),
         lambda g: theory.ducb_regret_bound(gamma, args.xi, 1.0, T, U, g, K)),
        ("SW-UCB", lambda: SlidingWindowUCB(tau, args.xi),
         lambda g: theory.swucb_regret_bound(tau, args.xi, 1.0, T, U, g)),
    ):
        bad = np.mean([bad_play_count(run_replication(cfg, env, make(), r), env)
                       for r in range(args.replications)], axis=0)
        for i in range(1, K + 1):
            g = env.delta_mu(i, T)
            rep = bound(g)
            print(f"{name},{i},{g:.3g},{bad[i - 1]:.1f},{rep.rhs:.1f},{rep.vacuous}")


if __name__ == "__main__":
    main()
