"""Shared fixtures: the two reference fronts, solved once per session.

The front solves are the only expensive setup the suite needs, so they are
session-scoped and their wall-clock times are recorded in ``SOLVE_SECONDS``
for the acceptance tests that put a budget on them.
"""

import time

import pytest

from wavestab.model import DEFAULT_PARAMS, ModelParams
from wavestab.profile import solve_profile

#: wall-clock seconds of each session solve, keyed by fixture name.
SOLVE_SECONDS: dict[str, float] = {}


def _timed_solve(key: str, params: ModelParams):
    start = time.perf_counter()
    profile = solve_profile(params, L=200.0, n_nodes=4001)
    SOLVE_SECONDS[key] = time.perf_counter() - start
    return profile


@pytest.fixture(scope="session")
def solve_seconds():
    """Read access to the recorded solve times."""
    return SOLVE_SECONDS


@pytest.fixture(scope="session")
def paper_profile():
    """The front at the reference parameter set."""
    return _timed_solve("paper_profile", DEFAULT_PARAMS)


@pytest.fixture(scope="session")
def alpha1_profile():
    """The front with the fitness-cost ratio dialled back to alpha = 1."""
    params = ModelParams(
        F=DEFAULT_PARAMS.F,
        mu=DEFAULT_PARAMS.mu,
        s_h=DEFAULT_PARAMS.s_h,
        alpha=1.0,
    )
    return _timed_solve("alpha1_profile", params)
