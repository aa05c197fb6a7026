import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from pvoros import Constraints, DatasetProfile, region_polygon  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fig2_profile():
    return DatasetProfile(1000, 9000)


@pytest.fixture
def case1(fig2_profile):
    return region_polygon(fig2_profile, Constraints(0.15, 900))


@pytest.fixture
def case2(fig2_profile):
    return region_polygon(fig2_profile, Constraints(0.15, 3000))


@pytest.fixture
def case3(fig2_profile):
    return region_polygon(fig2_profile, Constraints(0.15, 9100))


def random_region_params(rng):
    """Class counts and bounds satisfying the practical assumptions."""
    n_pos = int(rng.integers(20, 3000))
    n_neg = n_pos + int(rng.integers(1, 20 * n_pos))
    p = n_pos / (n_pos + n_neg)
    alpha = float(rng.uniform(p + 1e-3 * (1 - p), 0.99))
    kappa = float(rng.uniform(1e-3, 0.999) * (n_pos + n_neg))
    return DatasetProfile(n_pos, n_neg), Constraints(alpha, kappa)


def random_feasible_point(rng, region):
    xs = [v[0] for v in region.vertices]
    ys = [v[1] for v in region.vertices]
    while True:
        x = rng.uniform(min(xs), max(xs))
        y = rng.uniform(min(ys), max(ys))
        if region.contains(x, y):
            return float(x), float(y)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
