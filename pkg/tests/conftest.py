import numpy as np
import pytest

from nsbandits.environments import PiecewiseConstantBernoulli

ACCEPTANCE_LINES: dict[int, str] = {}


def random_piecewise_env(rng: np.random.Generator, T: int, K: int | None = None, max_changes: int = 4):
    """Random piecewise-constant Bernoulli schedule."""
    K = K if K is not None else int(rng.integers(2, 6))
    arms = []
    for _ in range(K):
        n = int(rng.integers(0, max_changes + 1))
        starts = sorted(set(int(s) for s in rng.integers(2, T + 1, size=n)))
        segs = [(1, float(rng.random()))] + [(s, float(rng.random())) for s in starts]
        arms.append(tuple(segs))
    return PiecewiseConstantBernoulli(tuple(arms), T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
