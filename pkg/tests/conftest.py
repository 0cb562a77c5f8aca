import numpy as np
import pytest

from ringcover.ring import FiniteRing

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def f2_algebra(flat, k):
    """GF(2)-algebra from a flat bitmask table (entry i*k+j is e_i e_j)."""
    flat = np.asarray(flat).reshape(k, k)
    tab = (flat[:, :, None] >> np.arange(k)[None, None, :]) & 1
    return FiniteRing([2] * k, tab)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
