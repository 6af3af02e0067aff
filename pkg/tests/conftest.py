import numpy as np
import pytest

from graphsim import DirectedGraph

ACCEPTANCE_LINES: list[str] = []


def random_graph(rng: np.random.Generator, n: int, density: float = 0.4, weighted: bool = False,
                 loops: bool = True) -> DirectedGraph:
    """Random digraph with at least one edge."""
    while True:
        mask = rng.random((n, n)) < density
        if not loops:
            np.fill_diagonal(mask, False)
        if mask.any():
            break
    w = rng.uniform(0.5, 2.0, (n, n)) if weighted else np.ones((n, n))
    return DirectedGraph(np.where(mask, w, 0.0))


def random_symmetric_graph(rng: np.random.Generator, n: int, density: float = 0.5) -> DirectedGraph:
    while True:
        upper = np.triu(rng.random((n, n)) < density)
        if upper.any():
            break
    a = upper.astype(float)
    return DirectedGraph(a + np.triu(a, 1).T)


def random_circulant(rng: np.random.Generator, n: int) -> DirectedGraph:
    k = rng.integers(1, n) if n > 1 else 1
    shifts = rng.choice(np.arange(n), size=min(k, n), replace=False)
    edges = [(i, (i + s) % n) for i in range(n) for s in shifts]
    return DirectedGraph.from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
