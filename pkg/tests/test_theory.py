import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nsbandits import theory as th

# mpmath (40 digits) reference values
DUCB_A_EXAMPLE = 1271.5961679715288  # B=1, xi=0.6, gamma=0.995, T=1e4, gap 0.2
DUCB_D_EXAMPLE = 500.59096904827200  # gamma=0.99, xi=0.6, K=3
SW_C_EXAMPLE = 62.316237236817343  # xi=0.6, gap 0.2, tau=1000, T=1e4
SW_RHS_EXAMPLE = 6352.3702503835878  # ... with 2 breakpoints
SW_C_LIMIT_06 = 62.065856865514079
DUCB_B_LIMIT_06 = 655.65577627114021
WINDOWED_EXAMPLE = 2.4635952281725742  # delta=1, eta=0.3, min(t, tau)=100
SHARP_EXP_03 = 1.9914202424904313


def test_ducb_A():
    assert th.ducb_A(1, 0.6, 0.995, 10_000, 0.2) == pytest.approx(DUCB_A_EXAMPLE, rel=1e-12)
    assert th.ducb_A(1, 0.6, 0.5, 1, 0.2) == 0.0
    assert th.ducb_A(1, 0.6, 0.995, 10_000, 0.4) == pytest.approx(DUCB_A_EXAMPLE / 4, rel=1e-12)
    with pytest.raises(th.DomainError):
        th.ducb_A(1, 0.6, 0.995, 100, 0.0)


def test_ducb_D():
    assert th.ducb_D(0.99, 0.6, 3) == pytest.approx(DUCB_D_EXAMPLE, rel=1e-12)
    for g in (0.9, 0.99, 0.999):
        assert 0 < th.ducb_D(g, 0.6, 3) * (1 - g) < 10


def test_ducb_D_zero_when_argument_one():
    # choose xi so that (1-gamma) xi log n_K = 1
    g, K = 0.9, 3
    xi = 1 / ((1 - g) * math.log(th.discounted_total(g, K)))
    assert th.ducb_D(g, xi, K) == pytest.approx(0.0, abs=1e-12)


def test_ducb_D_domain():
    with pytest.raises(th.DomainError):
        th.ducb_D(0.9, 0.6, 1)  # n_1 = 1, log 0
    with pytest.raises(th.DomainError):
        th.ducb_D(1.0, 0.6, 3)


def test_ducb_regret_bound_report():
    rep = th.ducb_regret_bound(0.995, 0.6, 1.0, 10_000, 2, 0.2, 3)
    v = rep.values
    L = -math.log(0.005)
    assert rep.rhs == pytest.approx(v["B_gamma"] * 10_000 * 0.005 * L + v["C_gamma"] * 2 / 0.005 * L)
    assert v["C_gamma"] * 2 / 0.005 * L == pytest.approx(2 * v["D"])
    assert rep.vacuous and any("vacuous" in f for f in rep.flags)
    with pytest.raises(th.DomainError):
        th.ducb_regret_bound(0.995, 0.5, 1.0, 100, 2, 0.2, 3)


def test_ducb_regret_bound_clamps_negative_D():
    # large xi at small discount makes the inner log argument exceed 1
    rep = th.ducb_regret_bound(0.5, 50.0, 1.0, 1000, 2, 0.2, 3)
    assert rep.values["D"] == 0.0 and rep.values["C_gamma"] == 0.0
    assert any("clamped" in f for f in rep.flags)


def test_ducb_rhs_linear_in_T():
    a = th.ducb_regret_bound(0.99, 0.6, 1.0, 10_000, 0, 0.2, 3).rhs
    b = th.ducb_regret_bound(0.99, 0.6, 1.0, 20_000, 0, 0.2, 3).rhs
    assert b / a == pytest.approx(2.0, rel=1e-12)


def test_ducb_B_limit():
    assert th.ducb_B_limit(0.6, 1, 0.2) == pytest.approx(DUCB_B_LIMIT_06, rel=1e-13)
    for g in (0.999, 0.9999):
        assert th.ducb_B(g, 0.6, 1, 10_000, 0.2) == pytest.approx(DUCB_B_LIMIT_06, rel=0.01)


def test_C_gamma_slow_convergence_for_small_xi():
    # relative error behaves like |log(xi log n_K)| / |log(1-gamma)|
    errs = [abs(th.ducb_C(1 - 10.0**-k, 0.6, 3) - 1) for k in (3, 4, 6, 9)]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 0.03


def test_swucb_examples():
    assert th.swucb_C(1000, 0.6, 1, 10_000, 0.2) == pytest.approx(SW_C_EXAMPLE, rel=1e-12)
    rep = th.swucb_regret_bound(1000, 0.6, 1, 10_000, 2, 0.2)
    assert rep.rhs == pytest.approx(SW_RHS_EXAMPLE, rel=1e-12)
    assert not rep.vacuous
    assert th.swucb_C_limit(0.6, 1, 0.2) == pytest.approx(SW_C_LIMIT_06, rel=1e-13)
    zero = th.swucb_regret_bound(1000, 0.6, 1, 1000, 0, 0.2)
    assert zero.rhs == pytest.approx(zero.values["C_tau"] * math.log(1000) + math.log(1000) ** 2)
    with pytest.raises(th.DomainError):
        th.swucb_C(1, 0.6, 1, 100, 0.2)


def test_ceil_guard():
    assert th._ceil(10_000 * (1 - 0.999)) == 10
    assert th._ceil(10.01) == 11
    assert th._ceil(2.0) == 2


def test_deviation_bound_eta03_remark():
    # ceil(ln n / ln 1.3) <= 4 ln n at n = 10
    n = 10
    f = th.ceiling_factor(math.log(n), 0.3)
    assert f == 9 and f <= 4 * math.log(n)
    assert th.loose_exponent(0.3) == pytest.approx(1.98875)
    assert th.sharp_exponent(0.3) == pytest.approx(SHARP_EXP_03, rel=1e-14)
    assert th.deviation_bound(1.0, 0.3, 1, n) == pytest.approx(9 * math.exp(-1.98875))


def test_sharp_not_larger_than_loose():
    for eta in np.linspace(0.01, 2.0, 200):
        assert th.sharp_exponent(eta) >= th.loose_exponent(eta)
        for d in (0.1, 0.5, 1, 2):
            assert th.deviation_bound(d, eta, 1, 50, sharp=True) <= th.deviation_bound(d, eta, 1, 50)


def test_deviation_bound_small_delta_vacuous():
    assert th.deviation_bound(1e-6, 0.3, 1, 100) >= 1
    with pytest.raises(th.DomainError):
        th.deviation_bound(0.0, 0.3, 1, 100)
    with pytest.raises(th.DomainError):
        th.deviation_bound(1.0, 0.3, 1, 0.5)


@settings(max_examples=60, deadline=None)
@given(d1=st.floats(0.01, 3), d2=st.floats(0.01, 3), n1=st.floats(1, 1e6), n2=st.floats(1, 1e6),
       eta=st.floats(0.05, 2), sharp=st.booleans())
def test_deviation_bound_monotone(d1, d2, n1, n2, eta, sharp):
    lo_d, hi_d = sorted((d1, d2))
    lo_n, hi_n = sorted((n1, n2))
    assert th.deviation_bound(hi_d, eta, 1, lo_n, sharp) <= th.deviation_bound(lo_d, eta, 1, lo_n, sharp)
    assert th.deviation_bound(lo_d, eta, 1, lo_n, sharp) <= th.deviation_bound(lo_d, eta, 1, hi_n, sharp)


def test_maximal_bound():
    assert th.maximal_log_argument(1.0, 500) == math.log(500)
    assert th.maximal_bound(1.0, 0.3, 1, 1.0, 500) == th.deviation_bound(1.0, 0.3, 1, 500)
    for g in (0.5, 0.9, 0.99, 0.999):
        for T in (10, 100, 1000):
            arg = th.maximal_log_argument(g, T)
            assert arg <= 2 * T * (1 - g) / g + math.log(1 / (1 - g * g)) + 1e-12
            for d in (0.5, 1.0, 1.5):
                assert th.maximal_bound(d, 0.3, 1, g, T) >= th.deviation_bound(d, 0.3, 1, th.discounted_total(g, T))


def test_windowed_bound():
    assert th.windowed_deviation_bound(1.0, 0.3, 1, 100, 1000) == pytest.approx(WINDOWED_EXAMPLE, rel=1e-13)
    assert th.windowed_deviation_bound(1.0, 0.3, 1, 500, 100) == pytest.approx(WINDOWED_EXAMPLE, rel=1e-13)
    # min(t, tau) = 1: factor clamped to 1
    assert th.windowed_deviation_bound(1.0, 0.3, 1, 1, 50) == pytest.approx(math.exp(-1.98875))
    for t in (2, 17, 300):
        assert th.windowed_deviation_bound(0.7, 0.3, 1, t, 10_000) == th.deviation_bound(0.7, 0.3, 1, t)


def test_eta_from_xi():
    assert 2 * 0.8 * (1 - th.eta_from_xi(0.8) ** 2 / 16) == pytest.approx(1.0)
    with pytest.raises(th.DomainError):
        th.eta_from_xi(0.5)
