import numpy as np
import pytest

from hhexp import FinitePopulation, PopulationParams, literature_params


@pytest.fixture
def lit():
    return literature_params()


@pytest.fixture
def six_unit_pop():
    # four respondents, two non-respondents
    return FinitePopulation.from_arrays(
        x=[10.0, 12.0, 15.0, 11.0, 14.0, 18.0],
        y=[20.0, 25.0, 31.0, 22.0, 27.0, 35.0],
        nonrespondent=[0, 0, 0, 0, 1, 1],
    )


def random_params(rng: np.random.Generator):
    """Random admissible parameter set plus a design ``(n, f, w)``."""
    N = int(rng.integers(10, 1000))
    N2 = int(rng.integers(2, N - 1))
    s_y, s_x, s_y2, s_x2 = rng.uniform(0.1, 50, size=4)
    rho, rho2 = rng.uniform(-1, 1, size=2)
    p = PopulationParams.from_moments(
        N, N2,
        mean_y=rng.uniform(1, 100), mean_x=rng.uniform(1, 100),
        s_y=s_y, s_x=s_x, s_xy=rho * s_x * s_y,
        s_y2=s_y2, s_x2=s_x2, s_xy2=rho2 * s_x2 * s_y2,
    )
    # n < N: at a census every estimator coincides with HH
    n = int(rng.integers(2, N))
    f = float(rng.uniform(1, 5))
    w = float(rng.uniform(0, 1))
    return p, n, f, w


_ACCEPTANCE_LINES = []


def record_acceptance(line: str):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
