import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


def random_li_set(rng, n, m, max_cond=1e6):
    """Uniform [-1, 1] entries, redrawn until the condition number is below max_cond."""
    while True:
        Y = rng.uniform(-1.0, 1.0, (n, m))
        s = np.linalg.svd(Y, compute_uv=False)
        if s[-1] > 0 and s[0] / s[-1] < max_cond:
            return Y


def random_trials(count, seed):
    """The acceptance trial population: n in 2..8, m in n..16."""
    rng = np.random.default_rng(seed)
    trials = []
    for _ in range(count):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(n, 17))
        trials.append(random_li_set(rng, n, m))
    return trials


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
