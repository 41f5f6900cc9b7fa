"""Discount factor and window size choices from the horizon and breakpoint budget."""
from __future__ import annotations

import math


class TuningError(ValueError):
    pass


def _check_gamma(gamma: float) -> float:
    if not 0.0 < gamma < 1.0:
        raise TuningError(f"tuned discount factor {gamma} is outside (0, 1)")
    return gamma


def tune_gamma(T: int, breakpoints: int, B: float = 1.0) -> float:
    """``1 - sqrt(U/T) / (4B)`` for a known number of breakpoints U."""
    if breakpoints < 1:
        raise TuningError("need at least one breakpoint")
    return _check_gamma(1.0 - math.sqrt(breakpoints / T) / (4.0 * B))


def tune_gamma_density(r: float, B: float = 1.0) -> float:
    """``1 - sqrt(r) / (4B)`` when breakpoints occur at rate r per round."""
    if not 0.0 < r < 1.0:
        raise TuningError("density r must lie in (0, 1)")
    return _check_gamma(1.0 - math.sqrt(r) / (4.0 * B))


def _round_window(x: float) -> int:
    return max(2, int(round(x)))


def tune_tau(T: int, breakpoints: int, B: float = 1.0) -> int:
    """``2B sqrt(T log T / U)`` rounded, at least 2."""
    if breakpoints < 1:
        raise TuningError("need at least one breakpoint")
    return _round_window(2.0 * B * math.sqrt(T * math.log(T) / breakpoints))


def tune_tau_density(r: float, B: float = 1.0) -> int:
    """``2B sqrt(-log r / r)`` rounded, at least 2."""
    if not 0.0 < r < 1.0:
        raise TuningError("density r must lie in (0, 1)")
    return _round_window(2.0 * B * math.sqrt(-math.log(r) / r))


def doubling_gamma(t: int, beta: float, B: float = 1.0) -> float:
    """Horizon-free schedule: on the block ``2^k <= t < 2^(k+1)`` use ``1 - (2^k)^((beta-1)/2) / (4B)``."""
    if t < 1:
        raise TuningError("t must be >= 1")
    if not 0.0 <= beta < 1.0:
        raise TuningError("beta must lie in [0, 1)")
    k = t.bit_length() - 1
    return _check_gamma(1.0 - (2.0**k) ** ((beta - 1.0) / 2.0) / (4.0 * B))


# The simulation presets use these horizon-only forms (the "n" of the window
# expression read as T).


def preset_gamma(T: int) -> float:
    """``1 - 1/(4 sqrt(T))``."""
    return 1.0 - 1.0 / (4.0 * math.sqrt(T))


def preset_tau(T: int) -> int:
    """``4 sqrt(T log T)`` rounded."""
    return _round_window(4.0 * math.sqrt(T * math.log(T)))


def exp3s_gamma(K: int, T: int, breakpoints: int) -> float:
    """``min(1, sqrt(K (U log(KT) + e) / ((e - 1) T)))``; the sharing rate is ``1/T``."""
    return min(1.0, math.sqrt(K * (breakpoints * math.log(K * T) + math.e) / ((math.e - 1.0) * T)))
