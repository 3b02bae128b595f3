import pytest
from hypothesis import settings, strategies as st

from rcmatch import _backend
from rcmatch.multigraph import MultiGraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

BACKENDS = _backend.available()

# criterion number -> (passed, message); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {msg}")


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def graph(n, edges):
    return MultiGraph.from_edges(n, edges)


@st.composite
def multigraphs(draw, max_n=9, max_m=16, min_n=1):
    """Loop-free multigraphs on 0..n-1, parallel edges allowed."""
    n = draw(st.integers(min_n, max_n))
    if n < 2:
        return MultiGraph.from_edges(n, [])
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pair, max_size=max_m))
    return MultiGraph.from_edges(n, edges)
