import numpy as np
import pytest

_ACCEPTANCE = []


def random_mixed_state(n, seed, rank=None):
    """Full-rank (or given-rank) mixed state from a complex Ginibre matrix."""
    dim = 1 << n
    rng = np.random.default_rng(seed)
    k = dim if rank is None else rank
    a = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def record_criterion():
    """Record one acceptance line; printed in the terminal summary."""
    def record(name, passed, detail):
        _ACCEPTANCE.append((name, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{name}: {'PASS' if passed else 'FAIL'} | {detail}")
