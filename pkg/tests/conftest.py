import random

import pytest
from hypothesis import strategies as st

from hyperconn.hypergraph import Hypergraph, unrank
from math import comb


def random_hypergraph(rng: random.Random, n: int, d: int, m: int | None = None) -> Hypergraph:
    N = comb(n, d)
    if m is None:
        m = rng.randint(0, N)
    ranks = rng.sample(range(N), m)
    return Hypergraph(d, range(1, n + 1), [unrank(r, d) for r in ranks])


@st.composite
def hypergraphs(draw, max_n=8, ds=(2, 3, 4)):
    d = draw(st.sampled_from(ds))
    n = draw(st.integers(min_value=d, max_value=max_n))
    N = comb(n, d)
    ranks = draw(st.sets(st.integers(min_value=0, max_value=N - 1), max_size=N))
    return Hypergraph(d, range(1, n + 1), [unrank(r, d) for r in ranks])


@pytest.fixture
def rng():
    return random.Random(20240601)


# one summary line per acceptance criterion
_results = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _results.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _results:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
