import numpy as np
import pytest

from multiport import anglesolve, bsnet, occsim


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def cnot_condition_G():
    """Network built from the published CNOT sign conditions."""
    return bsnet.compose(anglesolve.CNOT_SIGNS.angles())


@pytest.fixture(scope="session")
def swap_condition_G():
    """Network built from the published SWAP sign conditions."""
    return bsnet.compose(anglesolve.SWAP_SIGNS.angles())


@pytest.fixture(scope="session")
def cnot_block_G():
    """A network whose scaled block equals A_CNOT (first exhaustive solution)."""
    sol = anglesolve.enumerate_sign_solutions(occsim.CNOT)[0]
    return bsnet.compose(sol.angles())


@pytest.fixture(scope="session")
def swap_block_G():
    """A network whose scaled block equals A_SWAP."""
    sol = anglesolve.enumerate_sign_solutions(occsim.SWAP)[0]
    return bsnet.compose(sol.angles())


def embed_bs(theta, a=0, b=1, n=8):
    """A single beam splitter on lines (a, b) of an otherwise idle n-mode network."""
    g = np.eye(n)
    c, s = np.cos(theta), np.sin(theta)
    g[a, a], g[a, b], g[b, a], g[b, b] = c, s, -s, c
    return g


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    def _record(name: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
