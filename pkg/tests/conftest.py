import math

import numpy as np
import pytest

from phasekick import _backend
from phasekick.noise import Branch, DiscreteDistribution, MarkovKickKernel

ACCEPTANCE_LINES: list[str] = []


def random_dist(rng, pool, max_atoms=4):
    k = int(rng.integers(1, max_atoms + 1))
    angles = rng.choice(pool, size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    return DiscreteDistribution(tuple(zip(angles.tolist(), w.tolist())))


def random_kernel(rng, max_branches=3, max_atoms=4):
    """Random one-step kernel whose atoms and conditioning angles share a
    small pool, so branch lookups actually fire."""
    pool = np.array([k * math.pi / 6 for k in range(-5, 7)] + rng.uniform(-3, 3, 4).tolist())
    n_br = int(rng.integers(0, max_branches + 1))
    cond_pool = rng.permutation(pool)
    branches, used = [], 0
    for _ in range(n_br):
        size = int(rng.integers(1, 4))
        conds = tuple(cond_pool[used : used + size].tolist())
        used += size
        branches.append(Branch(conds, random_dist(rng, pool, max_atoms)))
    return MarkovKickKernel(tuple(branches), random_dist(rng, pool, max_atoms)), pool


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    return request.param


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
