import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nsbandits.core import EpisodeConfig, run_replication
from nsbandits.environments import PiecewiseConstantBernoulli, abrupt_scenario
from nsbandits.policies import (
    EXP3S,
    UCB1,
    DiscountedUCB,
    Oracle,
    SlidingWindowUCB,
    exp3s_probabilities,
    exp3s_update,
    oracle_select,
    select_arm,
)

from conftest import random_piecewise_env

# frozen from an mpmath evaluation at 40 digits
UCB1_PAD_EXAMPLE = 0.47985259121880812  # sqrt(0.5 ln 100 / 10)
DUCB_PAD_EXAMPLE = 1.2238734153404083  # 2 sqrt(0.5 ln 20 / 4)


def feed(policy, K, history, B=1.0):
    policy.reset(K, len(history) + 1, B, rng=np.random.default_rng(0))
    for arm, reward in history:
        policy.update(arm, reward)
    return policy


# --- select_arm -------------------------------------------------------------


def test_select_arm():
    assert select_arm((0.3, 0.9, 0.5)) == 2
    assert select_arm((0.7, 0.7, 0.1)) == 1
    assert select_arm((0.2, math.inf, math.inf)) == 2
    assert select_arm((-math.inf, -math.inf)) == 1
    with pytest.raises(ValueError):
        select_arm((0.1, math.nan))


# --- UCB-1 -------------------------------------------------------------------


def test_ucb1_index_examples():
    p = feed(UCB1(0.5), 2, [(1, 0.7)])
    assert p.t == 1
    assert p.index(1) == pytest.approx(0.7)  # ln 1 = 0
    assert p.index(2) == math.inf
    # t = 100, arm 1 played 10 times with reward 0
    p = feed(UCB1(0.5), 2, [(1, 0.0)] * 10 + [(2, 0.0)] * 90)
    assert p.index(1) == pytest.approx(UCB1_PAD_EXAMPLE, rel=1e-14)


def test_ucb1_invariants():
    rng = np.random.default_rng(3)
    p = UCB1(0.5)
    p.reset(4, 500, 1.0)
    for t in range(500):
        p.update(int(rng.integers(1, 5)), float(rng.random()))
        assert sum(p.counts) == p.t == t + 1


# --- D-UCB -------------------------------------------------------------------


def test_ducb_update_example():
    p = feed(DiscountedUCB(0.5), 2, [(1, 1.0)] * 3)
    assert p.counts[0] == pytest.approx(1.75)
    assert p.total == pytest.approx(1.75)


def test_ducb_gamma_one_counts_are_integers():
    rng = np.random.default_rng(0)
    hist = [(int(rng.integers(1, 4)), float(rng.random())) for _ in range(300)]
    p = feed(DiscountedUCB(1.0), 3, hist)
    counts = np.bincount([a for a, _ in hist], minlength=4)[1:]
    assert p.counts == counts.tolist()
    assert p.total == 300


def test_ducb_index_example():
    # n_t(gamma) = 20, N = 4, mean 0; gamma = 1 makes these exact integers
    p = feed(DiscountedUCB(1.0, 0.5), 2, [(1, 0.0)] * 4 + [(2, 0.0)] * 16)
    assert p.index(1) == pytest.approx(DUCB_PAD_EXAMPLE, rel=1e-14)
    single = feed(DiscountedUCB(1.0, 0.5), 2, [(1, 0.3)])
    assert single.index(1) == pytest.approx(0.3)


def test_ducb_underflow_forces_play():
    p = feed(DiscountedUCB(0.01), 2, [(1, 1.0)] + [(2, 1.0)] * 200)
    assert p.counts[0] < 1e-300
    assert p.index(1) == math.inf


def direct_discounted(hist, gamma, K):
    t = len(hist)
    counts = [math.fsum(gamma ** (t - s) for s, (a, _) in enumerate(hist, 1) if a == i) for i in range(1, K + 1)]
    sums = [math.fsum(gamma ** (t - s) * r for s, (a, r) in enumerate(hist, 1) if a == i) for i in range(1, K + 1)]
    return counts, sums


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), gamma=st.floats(0.5, 0.9999), K=st.integers(2, 5))
def test_ducb_incremental_matches_direct(seed, gamma, K):
    rng = np.random.default_rng(seed)
    hist = [(int(rng.integers(1, K + 1)), float(rng.random())) for _ in range(300)]
    p = feed(DiscountedUCB(gamma), K, hist)
    counts, sums = direct_discounted(hist, gamma, K)
    np.testing.assert_allclose(p.counts, counts, rtol=1e-9, atol=1e-300)
    np.testing.assert_allclose(p.sums, sums, rtol=1e-9, atol=1e-12)
    assert p.total == pytest.approx(math.fsum(p.counts), rel=1e-9)
    cap = (1 - gamma**300) / (1 - gamma)
    assert all(c <= cap * (1 + 1e-12) for c in p.counts)


# --- SW-UCB ------------------------------------------------------------------


def test_swucb_window_example():
    p = feed(SlidingWindowUCB(3), 3, [(1, 1.0), (1, 0.0), (2, 1.0), (3, 1.0)])
    assert sorted(a for a, _ in p.window) == [1, 2, 3]
    assert p.counts == [1, 1, 1]
    assert p.sums[0] == 0.0


def test_swucb_no_eviction_before_tau():
    hist = [(1, 1.0), (2, 0.0), (1, 0.5)]
    p = feed(SlidingWindowUCB(10), 2, hist)
    q = feed(UCB1(), 2, hist)
    assert p.counts == q.counts and p.sums == q.sums


def test_swucb_index_examples():
    p = feed(SlidingWindowUCB(100), 2, [(1, 0.4)])
    assert p.index(1) == pytest.approx(0.4)
    p = feed(SlidingWindowUCB(100), 2, [(2, 0.0)] * 90 + [(1, 0.0)] * 10)
    assert p.index(1) == pytest.approx(UCB1_PAD_EXAMPLE, rel=1e-14)
    # window caps the log argument: t = 400, tau = 100
    p = feed(SlidingWindowUCB(100), 2, [(2, 0.0)] * 390 + [(1, 0.0)] * 10)
    assert p.index(1) == pytest.approx(UCB1_PAD_EXAMPLE, rel=1e-14)


def test_swucb_evicted_arm_is_infinite():
    p = feed(SlidingWindowUCB(5), 2, [(1, 1.0)] + [(2, 0.0)] * 5)
    assert p.counts[0] == 0 and p.index(1) == math.inf


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), tau=st.integers(1, 60), K=st.integers(2, 5))
def test_swucb_incremental_matches_suffix(seed, tau, K):
    rng = np.random.default_rng(seed)
    hist = [(int(rng.integers(1, K + 1)), float(rng.integers(0, 2))) for _ in range(500)]
    p = feed(SlidingWindowUCB(tau), K, hist)
    suffix = hist[-tau:]
    assert len(p.window) == min(len(hist), tau)
    assert p.counts == [sum(1 for a, _ in suffix if a == i) for i in range(1, K + 1)]
    # 0/1 rewards keep the running sums exact
    assert p.sums == [float(sum(r for a, r in suffix if a == i)) for i in range(1, K + 1)]
    assert sum(p.counts) == min(500, tau)


# --- reductions and homogeneity -----------------------------------------------


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), xi=st.sampled_from([0.25, 0.5, 1.0, 2.0, 0.6]))
def test_reductions_on_random_env(seed, xi):
    env = random_piecewise_env(np.random.default_rng(seed), 400)
    cfg = EpisodeConfig(env.K, 400, seed=seed % 1000)
    ucb = run_replication(cfg, env, UCB1(xi), 0).arms
    sw = run_replication(cfg, env, SlidingWindowUCB(400, xi), 0).arms
    du = run_replication(cfg, env, DiscountedUCB(1.0, xi / 4), 0).arms
    assert np.array_equal(ucb, sw)
    assert np.array_equal(ucb, du)


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    c=st.sampled_from([0.25, 0.5, 2.0, 4.0, 1024.0]),
    which=st.sampled_from(["ucb1", "ducb", "swucb"]),
)
def test_positive_homogeneity(seed, c, which):
    make = {
        "ucb1": lambda: UCB1(0.5),
        "ducb": lambda: DiscountedUCB(0.97, 0.5),
        "swucb": lambda: SlidingWindowUCB(25, 0.5),
    }[which]
    rng = np.random.default_rng(seed)
    K = 3
    a, b = make(), make()
    a.reset(K, 300, 1.0)
    b.reset(K, 300, c)
    for t in range(1, 301):
        ia, ib = a.indices(), b.indices()
        assert select_arm(ia) == select_arm(ib)
        for x, y in zip(ia, ib):
            assert y == x * c or (x == y == math.inf)
        arm = t if t <= K else select_arm(ia)
        r = float(rng.random())
        a.update(arm, r)
        b.update(arm, r * c)


# --- EXP3.S --------------------------------------------------------------------


def test_exp3s_probabilities():
    assert exp3s_probabilities([2.0, 2.0, 2.0], 0.1) == pytest.approx([1 / 3] * 3)
    assert exp3s_probabilities([5.0, 1.0, 1e-3], 1.0) == pytest.approx([1 / 3] * 3)
    assert exp3s_probabilities([3.0, 1.0], 0.2) == pytest.approx([0.7, 0.3])
    with pytest.raises(ValueError):
        exp3s_probabilities([1.0, 0.0], 0.1)


def test_exp3s_update():
    assert exp3s_update([1.0, 2.0], 1, 0.0, 0.5, 0.2, 0.0) == [1.0, 2.0]
    w = exp3s_update([1.0, 1.0], 1, 1.0, 0.5, 0.2, 0.0)
    assert w[0] == pytest.approx(math.exp(0.2)) and w[1] == 1.0
    # reward normalised by B
    assert exp3s_update([1.0, 1.0], 1, 4.0, 0.5, 0.2, 0.0, B=4.0) == pytest.approx(w)
    shared = exp3s_update([1.0, 1.0, 1.0], 2, 0.0, 1 / 3, 0.3, 0.01)
    assert exp3s_probabilities(shared, 0.3) == pytest.approx([1 / 3] * 3)
    with pytest.raises(ValueError):
        exp3s_update([1.0, 1.0], 1, 1.0, 0.0, 0.2, 0.0)


def test_exp3s_rescales_on_overflow():
    w = [1e199, 1e199]
    new = exp3s_update(w, 1, 1.0, 0.01, 1.0, 0.0)
    assert math.isfinite(sum(new)) and sum(new) <= 1.0 + 1e-12
    assert new[0] > new[1]


def test_exp3s_episode_probabilities_valid():
    env = abrupt_scenario(2000)
    p = EXP3S.tuned(3, 2000, 2)
    assert p.alpha == 1 / 2000
    tr = run_replication(EpisodeConfig(3, 2000), env, p, 0)
    assert set(np.unique(tr.arms)) <= {1, 2, 3}
    probs = p.probabilities()
    assert math.fsum(probs) == pytest.approx(1.0, abs=1e-12)
    assert all(x > 0 for x in p.weights)


def test_exp3s_needs_rng():
    with pytest.raises(ValueError):
        EXP3S(0.1, 0.0).reset(2, 10)


# --- oracle ------------------------------------------------------------------


def test_oracle_select():
    env = abrupt_scenario()
    assert oracle_select(env, 4000) == 3
    assert oracle_select(env, 9000) == 1
    const = PiecewiseConstantBernoulli.constant((0.1, 0.6, 0.3), 50)
    assert {oracle_select(const, t) for t in range(1, 51)} == {2}
    tr = run_replication(EpisodeConfig(3, 10_000), env, Oracle(env), 0)
    assert np.array_equal(tr.arms, tr.oracle_arms)


@pytest.mark.parametrize("bad", [lambda: UCB1(0), lambda: DiscountedUCB(0.0), lambda: DiscountedUCB(1.1),
                                 lambda: SlidingWindowUCB(0), lambda: SlidingWindowUCB(2.5),
                                 lambda: EXP3S(0.0, 0.1), lambda: EXP3S(0.5, -1)])
def test_parameter_validation(bad):
    with pytest.raises(ValueError):
        bad()
