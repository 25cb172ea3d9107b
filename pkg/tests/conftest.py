import numpy as np
import pytest

from kickwalk.lattice import MomentumLattice, QuantumState


def random_state(lattice, coin_dim=1, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(coin_dim, lattice.N)) + 1j * rng.normal(size=(coin_dim, lattice.N))
    return QuantumState(lattice, a / np.linalg.norm(a))


@pytest.fixture
def lat64():
    return MomentumLattice(64)


# one line per acceptance criterion, printed after the run whatever the capture mode
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
