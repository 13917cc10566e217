import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from quasirandom.graph import Graph  # noqa: E402

settings.register_profile(
    "repo", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@st.composite
def small_graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    edges = [e for e, keep in zip(((u, v) for u in range(n) for v in range(u + 1, n)), bits) if keep]
    return Graph.from_edges(n, edges)


@pytest.fixture
def k4():
    return Graph.complete(4)


def random_graph(rng: np.random.Generator, n: int, q: float) -> Graph:
    upper = np.triu(rng.random((n, n)) < q, 1)
    return Graph.from_matrix(upper | upper.T)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
