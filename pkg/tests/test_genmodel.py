from collections import Counter

import pytest

from rcmatch.genmodel import (
    ALPHA,
    DegreeSequence,
    OddDegreeSum,
    ResampleLimitExceeded,
    check_dominance,
    dominance_from_histogram,
    dominance_slack,
    random_regular,
    read_degrees,
    regular_sequence,
    sample_configuration,
)
from rcmatch.rng import SplitMix64, stream

from conftest import graph


def all_pairings(points):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i in range(len(rest)):
        for tail in all_pairings(rest[:i] + rest[i + 1 :]):
            yield [(first, rest[i])] + tail


def loop_free_law(degrees):
    """Exact law of the projected multigraph under uniform loop-free pairings."""
    pts = [(v, c) for v, d in enumerate(degrees) for c in range(d)]
    law = Counter()
    for p in all_pairings(pts):
        if any(a[0] == b[0] for a, b in p):
            continue
        law[frozenset(Counter(tuple(sorted((a[0], b[0]))) for a, b in p).items())] += 1
    total = sum(law.values())
    return {k: c / total for k, c in law.items()}


def key(g):
    return frozenset(g.edge_multiset().items())


def test_two_two_two_is_always_the_triangle(backend):
    # the only loop-free projection of degrees (2, 2, 2)
    law = loop_free_law([2, 2, 2])
    assert len(law) == 1
    for s in range(30):
        g = sample_configuration([2, 2, 2], SplitMix64(s), backend=backend)
        assert key(g) in law


@pytest.mark.parametrize("degrees", [[2, 2, 2, 2], [3, 3, 2], [3, 1, 2, 2]])
def test_sampler_matches_enumerated_law(degrees, backend):
    law = loop_free_law(degrees)
    N = 4000
    rng = SplitMix64(17)
    seen = Counter(key(sample_configuration(degrees, rng, backend=backend)) for _ in range(N))
    assert set(seen) <= set(law)
    # chi-square against the exact law; 0.999 quantile for <= 10 dof is < 30
    chi2 = sum((seen[k] - N * p) ** 2 / (N * p) for k, p in law.items())
    assert chi2 < 30, (chi2, law, seen)


def test_four_cycle_versus_double_doubles():
    # hand count: 3 labelled 4-cycles x 16 pairings, 3 double-double graphs x 4
    law = loop_free_law([2, 2, 2, 2])
    doubles = sum(p for k, p in law.items() if len(k) == 2)
    assert doubles == pytest.approx(12 / 60)


def test_regular_edge_count_and_degrees(backend):
    g = random_regular(8, 3, SplitMix64(1), backend=backend)
    assert g.num_edges == 12
    assert all(g.degree(v) == 3 for v in g.vertices())
    assert all(a != b for _, a, b in g.edges())


def test_backends_sample_the_same_graph():
    from rcmatch import _backend

    if "compiled" not in _backend.available():
        pytest.skip("compiled extension not built")
    a = random_regular(500, 5, stream(3, 0), backend="python")
    b = random_regular(500, 5, stream(3, 0), backend="compiled")
    assert list(a.edges()) == list(b.edges())


def test_odd_sum():
    with pytest.raises(OddDegreeSum):
        regular_sequence(5, 3)
    with pytest.raises(OddDegreeSum):
        DegreeSequence.of([3, 2])


def test_resample_limit():
    # (3, 1) only pairs into a loop
    with pytest.raises(ResampleLimitExceeded):
        sample_configuration([3, 1], SplitMix64(0), max_tries=50)


def test_simple_rejects_parallel_edges():
    for s in range(20):
        g = sample_configuration([3] * 8, SplitMix64(s), simple=True)
        assert max(g.edge_multiset().values()) == 1


def test_read_degrees(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("# comment\n3\n3\n\n2\n")
    assert read_degrees(p).degrees == (3, 3, 2)
    p.write_text("3\nx\n")
    with pytest.raises(ValueError):
        read_degrees(p)


def test_reduce_ready():
    assert DegreeSequence.of([3, 3, 4]).reduce_ready
    assert not DegreeSequence.of([3, 2, 3]).reduce_ready


def test_dominance_by_hand():
    hist = {3: 10, 4: 12, 5: 14}
    r = dominance_from_histogram(hist, 5, 100, strict=True)
    # 12 >= 1.17 * 10 = 11.7 and 14 >= 1.17 * 12 = 14.04 fails
    assert r.verdicts[4][0] and not r.verdicts[5][0]
    assert r.failing == [5]
    loose = dominance_from_histogram(hist, 5, 100)
    assert loose.member  # slack at n0 = 100 is positive
    assert dominance_slack(100, 5, 5) > 0


def test_regular_graph_is_dominant():
    g = graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert check_dominance(g, 3, 4, strict=True).member
    assert ALPHA == 1.17
