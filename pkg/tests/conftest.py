import numpy as np
import pytest

from cpdetect import build_network, sample_er


@pytest.fixture
def star():
    """Center c with three leaves."""
    return build_network([("c", "a"), ("c", "b"), ("c", "d")])


@pytest.fixture
def triangle():
    return build_network([("a", "b"), ("b", "c"), ("c", "a")])


def random_graphs(count, n=8, m_range=(8, 20), base=0):
    """Seeded G(n, m) instances with m drawn uniformly from ``m_range`` (inclusive)."""
    out = []
    for s in range(count):
        rng = np.random.default_rng(base + s)
        m = int(rng.integers(m_range[0], m_range[1] + 1))
        out.append(sample_er(n, m, rng))
    return out


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def verdict(request):
    """Record the outcome line of an acceptance criterion; printed in the terminal summary."""

    def record(number: int, passed: bool, detail: str) -> bool:
        _ACCEPTANCE[number] = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[number])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[n])
