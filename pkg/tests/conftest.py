import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_hermitian(n, rng):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    # Echo the acceptance-gate verdicts where plain `pytest -v` shows them.
    try:
        import test_acceptance
    except ImportError:
        return

    if test_acceptance.CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.CRITERION_LINES:
            terminalreporter.write_line(line)
