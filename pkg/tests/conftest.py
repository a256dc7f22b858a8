import numpy as np
import pytest

from globalsnmf.data import load_wine


@pytest.fixture(scope="session")
def wine():
    return load_wine()


@pytest.fixture(scope="session")
def wine_X(wine):
    return wine.data


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_corpus(count=100, seed=7, max_m=12, max_n=30):
    """Seeded random matrices with m <= 12, m <= n <= 30."""
    gen = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        m = int(gen.integers(1, max_m + 1))
        n = int(gen.integers(m, max_n + 1))
        out.append(gen.standard_normal((m, n)) * gen.uniform(0.1, 10.0))
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
