"""The Reduce process: minimum-degree dispatch, logging and hyperactions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .actions import (
    AUTO_CORRECT,
    CONTRACTION,
    MAX_EDGE,
    VERTEX_ONE,
    VERTEX_ZERO,
    Action,
    ActionLog,
    AutoCorrection,
    Contraction,
    LogBuilder,
    MalformedLog,
    MaxEdgeRemoval,
    VertexOne,
    VertexZero,
)
from .multigraph import EmptyGraph, MultiGraph
from .trace import BAD, INITIAL, KINDS, T1, T2, T3A, T3B, T3C, T4, GOOD_CODES, Trace, row_width


def _other(g: MultiGraph, e: int, v: int) -> int:
    a = g._ea[e]
    return g._eb[e] if a == v else a


DOUBLE_EDGE_RULES = ("match", "contract")


def _match_pair(g: MultiGraph, v: int, w: int, e: int) -> VertexOne:
    removed = []
    for f in list(g._inc[w]):
        removed.append((f, g._ea[f], g._eb[f]))
        g.remove_edge(f)
    g.remove_vertex(v)
    g.remove_vertex(w)
    return VertexOne(v, w, e, tuple(removed))


def reduce_step(g: MultiGraph, rng, *, check: bool = False, double_edge: str = "match") -> list[Action]:
    """Apply the action dictated by the minimum degree of ``g``.

    Returns the applied actions: one, or two when a max-edge removal is
    followed by a repair step.

    ``double_edge`` decides what happens to a degree-2 vertex whose two
    edges both go to one neighbour ``a``. ``"match"`` treats it as a pendant
    and matches it to ``a`` through one of the two edges (chosen uniformly),
    removing both. ``"contract"`` merges the pair into a vertex of degree
    ``d(a) - 2``. The same choice applies when a max-edge removal leaves
    ``u`` with both remaining edges going to ``v``.
    """
    if g.num_vertices == 0:
        raise EmptyGraph("reduce_step on an empty graph")
    d = g.min_degree()
    if d == 0:
        v = g.random_vertex_with_degree(0, rng)
        g.remove_vertex(v)
        return [VertexZero(v)]
    if d == 1:
        v = g.random_vertex_with_degree(1, rng)
        if check:
            assert g.degree(v) == 1
        e = g._inc[v][0]
        return [_match_pair(g, v, _other(g, e, v), e)]
    if d == 2:
        v = g.random_vertex_with_degree(2, rng)
        if check:
            assert g.degree(v) == 2
        e1, e2 = g._inc[v]
        a = _other(g, e1, v)
        b = _other(g, e2, v)
        if a == b and double_edge == "match":
            return [_match_pair(g, v, a, (e1, e2)[rng.randbelow(2)])]
        members = (v, a) if a == b else (v, a, b)
        res = g.contract_set(members)
        return [Contraction(v, members[1:], res.new_vertex, res.internal_dropped, ((e1, a), (e2, b)), res.absorbed, res.dropped)]
    v = g.random_max_degree_vertex(rng)
    e = g.random_incident_edge(v, rng)
    u = _other(g, e, v)
    dv, du = len(g._inc[v]), len(g._inc[u])
    if check:
        assert dv == g.max_degree() and dv >= 3
    g.remove_edge(e)
    out: list[Action] = [MaxEdgeRemoval(v, u, e, dv, du)]
    lu = g._inc[u]
    if len(lu) == 2:
        f1, f2 = lu
        w = _other(g, f1, u)
        if w == v and double_edge == "match":
            if w == _other(g, f2, u):
                out.append(_match_pair(g, u, v, (f1, f2)[rng.randbelow(2)]))
        elif w == _other(g, f2, u):
            members = (u, v) if w == v else (u, v, w)
            res = g.contract_set(members)
            out.append(AutoCorrection(u, v, w, res.new_vertex, res.internal_dropped, (f1, f2), e, res.absorbed, res.dropped))
    return out


# -- classification ----------------------------------------------------------


def _classify(codes: list[int], sizes: list[int], etas: list[int], contracted: list[int], news: list[int]) -> int:
    # codes[0] is the max-edge removal; the rest are the follow-up actions
    rest = codes[1:]
    if not rest:
        return T1
    if rest == [AUTO_CORRECT]:
        return T2 if sizes[1] == 3 else BAD
    if any(c != CONTRACTION for c in rest) or any(s != 3 for s in sizes[1:]):
        return BAD
    if len(rest) == 1:
        return (T3A, T3B)[etas[1]] if etas[1] < 2 else T3C
    if len(rest) == 2:
        if etas[1] == 0 and etas[2] == 0:
            return T4
        # the second contraction runs through the vertex created by the first
        if etas[1] == 1 and etas[2] == 0 and contracted[2] == news[1]:
            return T4
    return BAD


def classify_actions(acts: list[Action]) -> int:
    """Kind code of one hyperaction given as a list starting with its max-edge removal."""
    if not acts or acts[0].code != MAX_EDGE:
        raise MalformedLog("a hyperaction must start with a max-edge removal")
    codes = [a.code for a in acts]
    sizes = [len(a.members) if a.code in (CONTRACTION, AUTO_CORRECT) else 0 for a in acts]
    # parallel a-b edges: everything dropped beyond the two edges of the degree-2 vertex
    etas = [a.internal_dropped - 2 if a.code in (CONTRACTION, AUTO_CORRECT) else 0 for a in acts]
    contracted = [a.contracted if a.code == CONTRACTION else -1 for a in acts]
    news = [a.new_vertex if a.code in (CONTRACTION, AUTO_CORRECT) else -1 for a in acts]
    return _classify(codes, sizes, etas, contracted, news)


@dataclass(frozen=True)
class Hyperaction:
    index: int
    kind: str
    start: int
    stop: int
    log: ActionLog = field(repr=False, compare=False)

    @property
    def actions(self) -> list[Action]:
        return [self.log[j] for j in range(self.start, self.stop)]

    @property
    def good(self) -> bool:
        return KINDS.index(self.kind) in GOOD_CODES

    def __len__(self) -> int:
        return self.stop - self.start


def group_and_classify(log: ActionLog) -> list[Hyperaction]:
    """Split ``log`` into the initial group and one hyperaction per max-edge removal."""
    kinds = log.kinds.tolist()
    starts = [j for j, c in enumerate(kinds) if c == MAX_EDGE]
    for j, c in enumerate(kinds):
        if c == AUTO_CORRECT and (j == 0 or kinds[j - 1] != MAX_EDGE):
            raise MalformedLog(f"auto-correction at {j} does not follow a max-edge removal")
        if not 0 <= c <= AUTO_CORRECT:
            raise MalformedLog(f"unknown action code {c} at {j}")
    bounds = [0] + starts + [len(kinds)]
    out = [Hyperaction(0, KINDS[INITIAL], 0, bounds[1], log)]
    for i in range(1, len(bounds) - 1):
        lo, hi = bounds[i], bounds[i + 1]
        acts = [log[j] for j in range(lo, hi)]
        out.append(Hyperaction(i, KINDS[classify_actions(acts)], lo, hi, log))
    return out


# -- monitors and trace rows ------------------------------------------------


@dataclass
class Monitors:
    """What to record while reducing.

    ``k`` sets the histogram and excess range (default: the larger of 3 and
    the starting max degree). ``n0`` fixes the n used by thresholds
    (default: starting vertex count). ``check`` turns on full invariant and
    excess recomputation after every action.
    """

    k: int | None = None
    n0: int | None = None
    check: bool = False
    double_edge: str = "match"


def _row(g: MultiGraph, k: int, pos: int, kind: int, check: bool) -> list[int]:
    nv = g.num_vertices
    if nv == 0:
        return [pos, 0, 0, 0, 0] + [0] * (k + 2) + [0] * (k - 2) + [kind]
    buckets = g._buckets
    lo, hi = g.min_degree(), g.max_degree()
    sizes = [len(buckets[d]) for d in range(hi + 1)]
    hist = sizes[: k + 1] + [0] * max(0, k + 1 - len(sizes))
    hist.append(nv - sum(hist))
    ex = [sum((d - ell) * sizes[d] for d in range(ell + 1, hi + 1)) for ell in range(3, k + 1)]
    if check:
        degs = [len(g._inc[v]) for v in g.vertices()]
        assert ex == [sum(max(d - ell, 0) for d in degs) for ell in range(3, k + 1)]
    return [pos, nv, g.num_edges, lo, hi] + hist + ex + [kind]


def run_reduce(g: MultiGraph, rng, monitors: Monitors | None = None, *, backend: str | None = None):
    """Reduce ``g`` to the empty graph. Returns ``(ActionLog, Trace)``.

    ``g`` is consumed. The trace holds one row per graph of minimum degree
    at least 3 reached before a max-edge removal, and one for the final
    empty graph.
    """
    mon = monitors or Monitors()
    n0 = g.num_vertices if mon.n0 is None else mon.n0
    k = mon.k if mon.k is not None else max(3, g.max_degree() if g.num_vertices else 0)
    if k < 3:
        raise ValueError("monitor k must be at least 3")
    if mon.double_edge not in DOUBLE_EDGE_RULES:
        raise ValueError(f"double_edge must be one of {DOUBLE_EDGE_RULES}")
    if _backend.resolve(backend) == "compiled":
        return _run_compiled(g, rng, k, n0, mon.check, mon.double_edge == "match")
    b = LogBuilder()
    rows: list[list[int]] = []
    current: list[Action] | None = None
    while g.num_vertices:
        if g.min_degree() >= 3:
            rows.append(_row(g, k, len(b), INITIAL if current is None else classify_actions(current), mon.check))
            current = []
        acts = reduce_step(g, rng, check=mon.check, double_edge=mon.double_edge)
        for a in acts:
            b.add(a)
        if current is not None:
            current.extend(acts)
        if mon.check:
            g.check_invariants()
    rows.append(_row(g, k, len(b), INITIAL if current is None else classify_actions(current), False))
    return b.finish(), Trace(np.asarray(rows, dtype=np.int64).reshape(-1, row_width(k)), k, n0)


def _run_compiled(g: MultiGraph, rng, k: int, n0: int, check: bool, match_double: bool):
    from . import _core

    st = g._export_state()
    kinds, offsets, payload, rows, next_vid, state = _core.reduce_run(
        st["ea"], st["eb"], st["inc_off"], st["inc_data"], st["alive"],
        st["bucket_off"], st["bucket_data"], st["num_edges"], rng.state, k, check, match_double,
    )
    rng.state = int(state)
    g._consume(next_vid)
    return ActionLog(kinds, offsets, payload), Trace(rows, k, n0)


# -- replay and undo ----------------------------------------------------------


def apply_action(g: MultiGraph, act: Action) -> None:
    """Re-apply a logged action, checking it against the graph."""
    code = act.code
    if code == VERTEX_ZERO:
        g.remove_vertex(act.v)
    elif code == VERTEX_ONE:
        for f, a, b in act.removed:
            if g.endpoints(f) != (a, b):
                raise MalformedLog(f"edge {f} endpoints differ from the log")
            g.remove_edge(f)
        g.remove_vertex(act.v)
        g.remove_vertex(act.w)
    elif code == MAX_EDGE:
        if set(g.endpoints(act.edge)) != {act.v, act.u}:
            raise MalformedLog(f"edge {act.edge} does not join {act.v} and {act.u}")
        g.remove_edge(act.edge)
    else:
        res = g.contract_set(act.members)
        if res.new_vertex != act.new_vertex or res.dropped != act.dropped or res.absorbed != act.absorbed:
            raise MalformedLog(f"contraction of {act.members} does not match the log")


def replay(log: ActionLog, g: MultiGraph) -> MultiGraph:
    """Apply every action of ``log`` to ``g`` in order and return it."""
    for act in log:
        apply_action(g, act)
    return g


def undo_action(g: MultiGraph, act: Action, *, reclaim: bool = False) -> None:
    """Invert one action on ``g``.

    The result has the same vertices, edges and endpoints as before the
    action; storage order inside buckets may differ. With ``reclaim`` the
    id of a contracted vertex is handed back so the graph does not grow.
    """
    code = act.code
    if code == VERTEX_ZERO:
        g._restore_vertex(act.v)
    elif code == VERTEX_ONE:
        g._restore_vertex(act.v)
        g._restore_vertex(act.w)
        for f, a, b in reversed(act.removed):
            g._restore_edge(f, a, b)
    elif code == MAX_EDGE:
        g._restore_edge(act.edge, act.v, act.u)
    else:
        for s in act.members:
            g._restore_vertex(s)
        for f, s in act.absorbed:
            g._detach_edge_end(f, act.new_vertex, s)
        for f, a, b in act.dropped:
            g._restore_edge(f, a, b)
        if reclaim:
            g._drop_last_vertex(act.new_vertex)
        else:
            g.remove_vertex(act.new_vertex)
