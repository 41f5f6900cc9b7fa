"""Closed-form bounds for D-UCB and SW-UCB bad plays and the self-normalised deviation inequalities.

All logarithms are natural.  Bound evaluators refuse ``xi <= 1/2``; the
simulators do not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


class DomainError(ValueError):
    """Parameters outside the region where a bound is defined."""


def _ceil(x: float) -> int:
    # absorb float noise like 10.000000000000009 before taking the ceiling
    r = round(x)
    if abs(x - r) <= 1e-9 * max(1.0, abs(x)):
        return int(r)
    return math.ceil(x)


def _check_xi(xi: float) -> None:
    if not xi > 0.5:
        raise DomainError(f"bounds require xi > 1/2, got xi={xi}")


def _check_gap(delta_mu: float) -> None:
    if not delta_mu > 0:
        raise DomainError(f"gap must be positive, got {delta_mu}")


def eta_from_xi(xi: float) -> float:
    """Grid parameter ``4 sqrt(1 - 1/(2 xi))``, which makes ``2 xi (1 - eta^2/16) = 1``."""
    _check_xi(xi)
    return 4.0 * math.sqrt(1.0 - 1.0 / (2.0 * xi))


def discounted_total(gamma: float, t: int) -> float:
    """``n_t(gamma) = sum_{s=1}^t gamma^(t-s)``."""
    if gamma == 1.0:
        return float(t)
    return (1.0 - gamma**t) / (1.0 - gamma)


@dataclass
class BoundReport:
    name: str
    horizon: int
    rhs: float
    values: dict[str, float] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)
    empirical: dict[str, float] = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return self.rhs > self.horizon


# --- discounted UCB -------------------------------------------------------


def ducb_A(B: float, xi: float, gamma: float, T: int, delta_mu: float) -> float:
    """Discounted-count threshold ``16 B^2 xi log n_T(gamma) / delta_mu^2``."""
    _check_gap(delta_mu)
    n = discounted_total(gamma, T)
    return 16.0 * B**2 * xi * max(math.log(n), 0.0) / delta_mu**2


def ducb_D(gamma: float, xi: float, K: int) -> float:
    """Rounds after a breakpoint before the discounted bias is dominated.

    ``log((1 - gamma) xi log n_K(gamma)) / log gamma``; negative when the inner
    argument exceeds 1 (left to the caller to clamp).
    """
    if not 0.0 < gamma < 1.0:
        raise DomainError("gamma must lie in (0, 1)")
    arg = (1.0 - gamma) * xi * math.log(discounted_total(gamma, K))
    if not arg > 0:
        raise DomainError(f"log argument (1-gamma) xi log n_K(gamma) = {arg} is not positive")
    return math.log(arg) / math.log(gamma)


def ducb_B(gamma: float, xi: float, B: float, T: int, delta_mu: float) -> float:
    _check_xi(xi)
    _check_gap(delta_mu)
    if not 0.0 < gamma < 1.0:
        raise DomainError("gamma must lie in (0, 1)")
    eta = eta_from_xi(xi)
    g = gamma ** (1.0 / (1.0 - gamma))
    x = T * (1.0 - gamma)
    L = -math.log(1.0 - gamma)
    first = 16.0 * B**2 * xi / (g * delta_mu**2) * _ceil(x) / x
    second = 2.0 * _ceil(L / math.log1p(eta)) / (L * (1.0 - g))
    return first + second


def ducb_C(gamma: float, xi: float, K: int) -> float:
    if not 0.0 < gamma < 1.0:
        raise DomainError("gamma must lie in (0, 1)")
    arg = (1.0 - gamma) * xi * math.log(discounted_total(gamma, K))
    if not arg > 0:
        raise DomainError(f"log argument (1-gamma) xi log n_K(gamma) = {arg} is not positive")
    return (gamma - 1.0) / (math.log(1.0 - gamma) * math.log(gamma)) * math.log(arg)


def ducb_B_limit(xi: float, B: float, delta_mu: float) -> float:
    """Value of ``ducb_B`` as gamma -> 1."""
    eta = eta_from_xi(xi)
    return 16.0 * math.e * B**2 * xi / delta_mu**2 + 2.0 / ((1.0 - math.exp(-1.0)) * math.log1p(eta))


def ducb_regret_bound(
    gamma: float, xi: float, B: float, T: int, breakpoints: int, delta_mu: float, K: int
) -> BoundReport:
    """Upper bound on the expected number of bad plays of one arm under D-UCB.

    ``B(gamma) T (1-gamma) log(1/(1-gamma)) + C(gamma) U/(1-gamma) log(1/(1-gamma))``
    """
    _check_xi(xi)
    flags = []
    D = ducb_D(gamma, xi, K)
    C = ducb_C(gamma, xi, K)
    if D < 0:
        flags.append("D(gamma) < 0 (inner log argument > 1); D and C clamped to 0")
        D, C = 0.0, 0.0
    Bg = ducb_B(gamma, xi, B, T, delta_mu)
    L = -math.log(1.0 - gamma)
    rhs = Bg * T * (1.0 - gamma) * L + C * breakpoints / (1.0 - gamma) * L
    report = BoundReport(
        "D-UCB",
        T,
        rhs,
        {
            "A": ducb_A(B, xi, gamma, T, delta_mu),
            "D": D,
            "B_gamma": Bg,
            "C_gamma": C,
            "eta": eta_from_xi(xi),
            "gamma": gamma,
        },
        flags,
    )
    if report.vacuous:
        report.flags.append("vacuous: bound exceeds T")
    return report


# --- sliding-window UCB ---------------------------------------------------


def swucb_A(B: float, xi: float, tau: int, delta_mu: float) -> float:
    _check_gap(delta_mu)
    return 4.0 * B**2 * xi * math.log(tau) / delta_mu**2


def swucb_C(tau: int, xi: float, B: float, T: int, delta_mu: float) -> float:
    _check_xi(xi)
    _check_gap(delta_mu)
    if tau < 2:
        raise DomainError("window must be at least 2")
    eta = eta_from_xi(xi)
    x = T / tau
    lt = math.log(tau)
    return 4.0 * B**2 * xi / delta_mu**2 * _ceil(x) / x + 2.0 / lt * _ceil(lt / math.log1p(eta))


def swucb_C_limit(xi: float, B: float, delta_mu: float) -> float:
    """Value of ``swucb_C`` as tau -> infinity (with T a multiple of tau)."""
    return 4.0 * B**2 * xi / delta_mu**2 + 2.0 / math.log1p(eta_from_xi(xi))


def swucb_regret_bound(
    tau: int, xi: float, B: float, T: int, breakpoints: int, delta_mu: float
) -> BoundReport:
    """``C(tau) T log(tau) / tau + tau U + log(tau)^2``."""
    C = swucb_C(tau, xi, B, T, delta_mu)
    lt = math.log(tau)
    rhs = C * T * lt / tau + tau * breakpoints + lt**2
    report = BoundReport(
        "SW-UCB",
        T,
        rhs,
        {"A": swucb_A(B, xi, tau, delta_mu), "C_tau": C, "eta": eta_from_xi(xi), "tau": tau},
    )
    if report.vacuous:
        report.flags.append("vacuous: bound exceeds T")
    return report


# --- deviation inequalities -----------------------------------------------


def ceiling_factor(log_arg: float, eta: float) -> int:
    """``ceil(log_arg / log(1 + eta))`` clamped to at least 1."""
    if not eta > 0:
        raise DomainError("eta must be positive")
    return max(1, _ceil(max(log_arg, 0.0) / math.log1p(eta)))


def loose_exponent(eta: float) -> float:
    """Coefficient ``2 (1 - eta^2/16)`` multiplying ``delta^2 / B^2``."""
    return 2.0 * (1.0 - eta**2 / 16.0)


def sharp_exponent(eta: float) -> float:
    """Coefficient ``8 / ((1+eta)^(1/4) + (1+eta)^(-1/4))^2``; never smaller than ``loose_exponent``."""
    a = (1.0 + eta) ** 0.25
    return 8.0 / (a + 1.0 / a) ** 2


def _tail(delta: float, eta: float, B: float, sharp: bool) -> float:
    if not delta > 0:
        raise DomainError("delta must be positive")
    c = sharp_exponent(eta) if sharp else loose_exponent(eta)
    return math.exp(-c * delta**2 / B**2)


def deviation_bound(delta: float, eta: float, B: float, n: float, sharp: bool = False) -> float:
    """Bound on ``P((R_t - E R_t) / sqrt(N_t(gamma^2)) > delta)`` given ``n = n_t(gamma)``."""
    if n < 1:
        raise DomainError("n_t(gamma) must be >= 1")
    return ceiling_factor(math.log(n), eta) * _tail(delta, eta, B, sharp)


def maximal_log_argument(gamma: float, T: int) -> float:
    """``log(gamma^(-2T) n_T(gamma^2))``; equals ``log T`` at gamma = 1."""
    if not 0.0 < gamma <= 1.0:
        raise DomainError("gamma must lie in (0, 1]")
    if gamma == 1.0:
        return math.log(T)
    return -2.0 * T * math.log(gamma) + math.log(discounted_total(gamma * gamma, T))


def maximal_bound(delta: float, eta: float, B: float, gamma: float, T: int, sharp: bool = False) -> float:
    """Bound on the probability that the self-normalised deviation exceeds ``delta`` at some t <= T."""
    return ceiling_factor(maximal_log_argument(gamma, T), eta) * _tail(delta, eta, B, sharp)


def windowed_deviation_bound(
    delta: float, eta: float, B: float, t: int, tau: int, sharp: bool = False
) -> float:
    """Window form: the ceiling factor uses ``log(min(t, tau))``."""
    return ceiling_factor(math.log(min(t, tau)), eta) * _tail(delta, eta, B, sharp)
