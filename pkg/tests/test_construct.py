import io

import pytest
from hypothesis import given, strategies as st

from rcmatch.actions import MAX_EDGE, ActionLog, Contraction, MaxEdgeRemoval, VertexOne
from rcmatch.construct import (
    InconsistentLog,
    Matching,
    read_matching,
    unwind,
    validate_matching,
    write_matching,
)
from rcmatch.genmodel import random_regular
from rcmatch.oracle import brute_force_matching, max_matching_exact
from rcmatch.pipeline import reduce_construct
from rcmatch.reduce import Monitors, run_reduce
from rcmatch.rng import SplitMix64

from conftest import graph, multigraphs


@given(multigraphs(max_n=12, max_m=24), st.integers(0, 2**31), st.sampled_from(["match", "contract"]))
def test_output_is_a_valid_matching(g, seed, rule):
    res = reduce_construct(g, SplitMix64(seed), monitors=Monitors(double_edge=rule), backend="python")
    chk = validate_matching(res.matching, g)
    assert chk.valid
    assert chk.size <= brute_force_matching(g)


@given(multigraphs(max_n=12, max_m=24), st.integers(0, 2**31))
def test_runs_without_max_edge_removal_are_optimal(g, seed):
    # pendant matching and degree-2 contraction never lose an edge, so a run
    # that never removes a max-degree edge must reach the maximum
    res = reduce_construct(g, SplitMix64(seed), backend="python")
    if res.log.count(MAX_EDGE) == 0:
        assert len(res.matching) == brute_force_matching(g)


def test_pendant_path_is_matched_exactly():
    for n in range(2, 12):
        g = graph(n, [(i, i + 1) for i in range(n - 1)])
        for s in range(5):
            m = reduce_construct(g, SplitMix64(s)).matching
            assert len(m) == n // 2


def test_regular_graphs_against_blossom(backend):
    hits = 0
    for s in range(60):
        g = random_regular(40, 3, SplitMix64(s))
        m = reduce_construct(g, SplitMix64(1000 + s), backend=backend).matching
        assert validate_matching(m, g).valid
        hits += len(m) == len(max_matching_exact(g))
    assert hits >= 55


def test_unwind_is_deterministic_for_a_seed():
    g = random_regular(200, 4, SplitMix64(2))
    log, _ = run_reduce(g.copy(), SplitMix64(3))
    a = unwind(log, g, SplitMix64(9))
    b = unwind(log, g, SplitMix64(9))
    assert a == b
    assert validate_matching(a, g).perfect


def test_unwind_rejects_a_doubly_matched_vertex():
    # two pendant removals that both claim vertex 1
    g = graph(3, [(0, 1), (1, 2)])
    log = ActionLog.from_actions([VertexOne(0, 1, 0, ((0, 0, 1),)), VertexOne(2, 1, 1, ((1, 1, 2),))])
    with pytest.raises(InconsistentLog):
        unwind(log, g)


def test_validate_flags_shared_vertex_and_missing_edge():
    g = graph(3, [(0, 1), (1, 2)])
    assert not validate_matching(Matching(frozenset({0, 1}), frozenset()), g).valid
    assert not validate_matching(Matching(frozenset({7}), frozenset()), g).valid
    assert validate_matching(Matching.from_edges([0], g), g) == (True, 1, True)  # floor(3/2) = 1
    path = graph(4, [(0, 1), (1, 2), (2, 3)])
    assert validate_matching(Matching.from_edges([1], path), path) == (True, 1, False)


def test_matching_file_round_trip(tmp_path):
    g = random_regular(20, 3, SplitMix64(4))
    m = reduce_construct(g, SplitMix64(5)).matching
    buf = io.StringIO()
    write_matching(m, g, buf)
    rows = read_matching(io.StringIO(buf.getvalue()))
    assert [e for *_, e in rows] == sorted(m.edges)
    for u, v, e in rows:
        assert {u, v} == set(g.endpoints(e))


def test_contraction_expansion_uses_returned_edge():
    # 0 has degree 2 between 1 and 2; 1 keeps edge 2 (to 3), 2 keeps edge 3 (to 4)
    g = graph(5, [(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)])
    act = Contraction(0, (1, 2), 5, 2, ((0, 1), (1, 2)), ((2, 1), (3, 2)), ((0, 0, 1), (1, 0, 2)))
    # the merged vertex 5 is matched through edge 2, which goes back to 1,
    # so 0 must be paired with 2 via edge 1
    log = ActionLog.from_actions([
        MaxEdgeRemoval(3, 4, 4, 2, 2),
        act,
        VertexOne(5, 3, 2, ((2, 5, 3), (3, 5, 4))),
        # 4 left isolated
    ])
    m = unwind(log, g)
    assert m.edges == frozenset({2, 1})
