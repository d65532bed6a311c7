import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def random_pair(rng: np.random.Generator, k: int, alpha: float = 1.0):
    """Full-support Dirichlet pair, renormalized to kill rounding."""
    P = rng.dirichlet(np.full(k, alpha))
    Q = rng.dirichlet(np.full(k, alpha))
    P = np.clip(P, 1e-300, None)
    Q = np.clip(Q, 1e-300, None)
    return P / P.sum(), Q / Q.sum()


@pytest.fixture
def rng():
    return np.random.default_rng(20161016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
