"""Mutable loop-free multigraph with degree buckets.

Vertex and edge ids are integers handed out by monotone counters and never
reused. Incidence lists and degree buckets are arrays with swap-remove plus a
position index, which keeps uniform sampling and updates O(1).
"""
from __future__ import annotations

import math
from collections import Counter
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple

import numpy as np


class GraphError(Exception):
    pass


class LoopRejected(GraphError):
    pass


class UnknownVertex(GraphError, KeyError):
    pass


class UnknownEdge(GraphError, KeyError):
    pass


class NonzeroDegree(GraphError):
    pass


class SetTooSmall(GraphError):
    pass


class EmptyBucket(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


class IsolatedVertex(GraphError):
    pass


class EmptyGraphForPj(GraphError):
    pass


class EdgeListFormatError(GraphError, ValueError):
    pass


class ContractResult(NamedTuple):
    new_vertex: int
    internal_dropped: int
    # (edge, endpoint inside the contracted set it used to attach to)
    absorbed: tuple
    # (edge, a, b) for every edge with both ends inside the set
    dropped: tuple


class MultiGraph:
    def __init__(self):
        self._inc: list[list[int] | None] = []
        self._bpos: list[int] = []
        self._ea: list[int] = []
        self._eb: list[int] = []
        self._pa: list[int] = []
        self._pb: list[int] = []
        self._oa: list[int] = []
        self._ob: list[int] = []
        self._buckets: list[list[int]] = [[]]
        self._nv = 0
        self._m = 0
        self._mind = 0
        self._maxd = 0

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "MultiGraph":
        """Bulk build on vertices ``0..n-1``; edge ids follow input order.

        Buckets list vertices in increasing id order, which differs from the
        order a sequence of :meth:`add_edge` calls would leave behind.
        """
        g = cls()
        inc: list[list[int] | None] = [[] for _ in range(n)]
        ea, eb, pa, pb = g._ea, g._eb, g._pa, g._pb
        for e, (a, b) in enumerate(edges):
            a = int(a)
            b = int(b)
            if a == b:
                raise LoopRejected(f"edge {e} is a loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise UnknownVertex(f"edge {e} = ({a}, {b}) outside 0..{n - 1}")
            la, lb = inc[a], inc[b]
            ea.append(a)
            eb.append(b)
            pa.append(len(la))
            la.append(e)
            pb.append(len(lb))
            lb.append(e)
        g._inc = inc
        g._oa = list(ea)
        g._ob = list(eb)
        g._m = len(ea)
        g._nv = n
        g._bpos = [0] * n
        maxd = max((len(lst) for lst in inc), default=0)
        g._buckets = [[] for _ in range(maxd + 1)]
        for v, lst in enumerate(inc):
            b = g._buckets[len(lst)]
            g._bpos[v] = len(b)
            b.append(v)
        g._maxd = maxd
        g._mind = 0
        return g

    def add_vertex(self) -> int:
        v = len(self._inc)
        self._inc.append([])
        self._bpos.append(-1)
        self._nv += 1
        self._bucket_add(v, 0)
        return v

    def add_edge(self, u: int, v: int) -> int:
        self._require_vertex(u)
        self._require_vertex(v)
        if u == v:
            raise LoopRejected(f"loop at vertex {u}")
        e = len(self._ea)
        lu, lv = self._inc[u], self._inc[v]
        self._ea.append(u)
        self._eb.append(v)
        self._oa.append(u)
        self._ob.append(v)
        self._pa.append(len(lu))
        lu.append(e)
        self._pb.append(len(lv))
        lv.append(e)
        self._m += 1
        self._bucket_move(u, len(lu) - 1, len(lu))
        self._bucket_move(v, len(lv) - 1, len(lv))
        return e

    def copy(self) -> "MultiGraph":
        g = MultiGraph.__new__(MultiGraph)
        g._inc = [None if lst is None else list(lst) for lst in self._inc]
        g._bpos = list(self._bpos)
        g._ea = list(self._ea)
        g._eb = list(self._eb)
        g._pa = list(self._pa)
        g._pb = list(self._pb)
        g._oa = list(self._oa)
        g._ob = list(self._ob)
        g._buckets = [list(b) for b in self._buckets]
        g._nv = self._nv
        g._m = self._m
        g._mind = self._mind
        g._maxd = self._maxd
        return g

    # -- bucket / incidence internals ------------------------------------

    def _bucket_add(self, v: int, d: int) -> None:
        buckets = self._buckets
        while len(buckets) <= d:
            buckets.append([])
        b = buckets[d]
        self._bpos[v] = len(b)
        b.append(v)
        if d > self._maxd:
            self._maxd = d
        if d < self._mind:
            self._mind = d

    def _bucket_remove(self, v: int, d: int) -> None:
        b = self._buckets[d]
        i = self._bpos[v]
        last = b.pop()
        if last != v:
            b[i] = last
            self._bpos[last] = i
        self._bpos[v] = -1

    def _bucket_move(self, v: int, old: int, new: int) -> None:
        self._bucket_remove(v, old)
        self._bucket_add(v, new)

    def _inc_remove(self, e: int, v: int, pos: int) -> None:
        lst = self._inc[v]
        last = lst.pop()
        if last != e:
            lst[pos] = last
            if self._ea[last] == v:
                self._pa[last] = pos
            else:
                self._pb[last] = pos

    def _require_vertex(self, v: int) -> None:
        if not (0 <= v < len(self._inc)) or self._inc[v] is None:
            raise UnknownVertex(v)

    def _require_edge(self, e: int) -> None:
        if not (0 <= e < len(self._ea)) or self._ea[e] < 0:
            raise UnknownEdge(e)

    # -- mutation ---------------------------------------------------------

    def remove_edge(self, e: int) -> None:
        self._require_edge(e)
        a, b = self._ea[e], self._eb[e]
        self._inc_remove(e, a, self._pa[e])
        self._inc_remove(e, b, self._pb[e])
        self._ea[e] = self._eb[e] = -1
        self._m -= 1
        da = len(self._inc[a])
        self._bucket_move(a, da + 1, da)
        db = len(self._inc[b])
        self._bucket_move(b, db + 1, db)

    def remove_vertex(self, v: int) -> None:
        self._require_vertex(v)
        if self._inc[v]:
            raise NonzeroDegree(f"vertex {v} has degree {len(self._inc[v])}")
        self._bucket_remove(v, 0)
        self._inc[v] = None
        self._nv -= 1

    def contract_set(self, S: Iterable[int]) -> ContractResult:
        """Replace the vertices of ``S`` by one fresh vertex.

        Edges with one end in ``S`` keep their ids and are re-pointed at the
        new vertex; edges inside ``S`` are deleted. Vertices are scanned in
        the order given, each incidence list in storage order.
        """
        members = list(dict.fromkeys(S))
        for s in members:
            self._require_vertex(s)
        if len(members) < 2:
            raise SetTooSmall(f"need at least 2 distinct vertices, got {members}")
        rank = {s: i for i, s in enumerate(members)}
        ea, eb = self._ea, self._eb
        internal = []
        absorbed = []
        for s in members:
            rs = rank[s]
            for e in self._inc[s]:
                o = eb[e] if ea[e] == s else ea[e]
                ro = rank.get(o)
                if ro is None:
                    absorbed.append((e, s))
                elif rs < ro:
                    internal.append(e)
        for s in members:
            self._bucket_remove(s, len(self._inc[s]))
            self._inc[s] = None
        self._nv -= len(members)
        dropped = []
        for e in internal:
            dropped.append((e, ea[e], eb[e]))
            ea[e] = eb[e] = -1
        self._m -= len(internal)
        vc = len(self._inc)
        lst = []
        for e, s in absorbed:
            if ea[e] == s:
                ea[e] = vc
                self._pa[e] = len(lst)
            else:
                eb[e] = vc
                self._pb[e] = len(lst)
            lst.append(e)
        self._inc.append(lst)
        self._bpos.append(-1)
        self._nv += 1
        self._bucket_add(vc, len(lst))
        return ContractResult(vc, len(internal), tuple(absorbed), tuple(dropped))

    # restoration hooks used when rewinding an action log
    def _restore_vertex(self, v: int) -> None:
        while len(self._inc) <= v:
            self._inc.append(None)
            self._bpos.append(-1)
        if self._inc[v] is not None:
            raise GraphError(f"vertex {v} already live")
        self._inc[v] = []
        self._nv += 1
        self._bucket_add(v, 0)

    def _restore_edge(self, e: int, a: int, b: int) -> None:
        self._require_vertex(a)
        self._require_vertex(b)
        if a == b:
            raise LoopRejected(f"loop at vertex {a}")
        while len(self._ea) <= e:
            for lst in (self._ea, self._eb, self._pa, self._pb, self._oa, self._ob):
                lst.append(-1)
        if self._ea[e] >= 0:
            raise GraphError(f"edge {e} already live")
        la, lb = self._inc[a], self._inc[b]
        self._ea[e], self._eb[e] = a, b
        self._pa[e] = len(la)
        la.append(e)
        self._pb[e] = len(lb)
        lb.append(e)
        self._m += 1
        self._bucket_move(a, len(la) - 1, len(la))
        self._bucket_move(b, len(lb) - 1, len(lb))

    def _drop_last_vertex(self, v: int) -> None:
        """Remove isolated ``v`` and give its id back; ``v`` must be the newest id."""
        if v != len(self._inc) - 1 or self._inc[v]:
            raise GraphError(f"vertex {v} is not the newest isolated vertex")
        self._bucket_remove(v, 0)
        self._inc.pop()
        self._bpos.pop()
        self._nv -= 1

    def _detach_edge_end(self, e: int, old: int, new: int) -> None:
        """Move one end of live edge ``e`` from ``old`` to ``new``."""
        if self._ea[e] == old:
            self._inc_remove(e, old, self._pa[e])
            self._ea[e] = new
            lst = self._inc[new]
            self._pa[e] = len(lst)
        elif self._eb[e] == old:
            self._inc_remove(e, old, self._pb[e])
            self._eb[e] = new
            lst = self._inc[new]
            self._pb[e] = len(lst)
        else:
            raise GraphError(f"edge {e} is not attached to {old}")
        lst.append(e)
        d_old = len(self._inc[old])
        self._bucket_move(old, d_old + 1, d_old)
        self._bucket_move(new, len(lst) - 1, len(lst))

    # -- queries ----------------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return self._nv

    @property
    def num_edges(self) -> int:
        return self._m

    @property
    def next_vertex_id(self) -> int:
        return len(self._inc)

    @property
    def next_edge_id(self) -> int:
        return len(self._ea)

    def __len__(self) -> int:
        return self._nv

    def has_vertex(self, v: int) -> bool:
        return 0 <= v < len(self._inc) and self._inc[v] is not None

    def has_edge(self, e: int) -> bool:
        return 0 <= e < len(self._ea) and self._ea[e] >= 0

    def vertices(self) -> Iterator[int]:
        return (v for v, lst in enumerate(self._inc) if lst is not None)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        return ((e, a, self._eb[e]) for e, a in enumerate(self._ea) if a >= 0)

    def degree(self, v: int) -> int:
        self._require_vertex(v)
        return len(self._inc[v])

    def incident_edges(self, v: int) -> tuple[int, ...]:
        self._require_vertex(v)
        return tuple(self._inc[v])

    def endpoints(self, e: int) -> tuple[int, int]:
        self._require_edge(e)
        return self._ea[e], self._eb[e]

    def origin(self, e: int) -> tuple[int, int]:
        if not (0 <= e < len(self._oa)) or self._oa[e] < 0:
            raise UnknownEdge(e)
        return self._oa[e], self._ob[e]

    def other_end(self, e: int, v: int) -> int:
        a, b = self.endpoints(e)
        if a == v:
            return b
        if b == v:
            return a
        raise GraphError(f"edge {e} is not incident to {v}")

    def neighbors(self, v: int) -> list[int]:
        """Neighbours with multiplicity, in incidence order."""
        return [self.other_end(e, v) for e in self.incident_edges(v)]

    def multiplicity(self, u: int, v: int) -> int:
        return sum(1 for w in self.neighbors(u) if w == v)

    def min_degree(self) -> int:
        if self._nv == 0:
            raise EmptyGraph("graph has no vertices")
        buckets = self._buckets
        d = self._mind
        while not buckets[d]:
            d += 1
        self._mind = d
        return d

    def max_degree(self) -> int:
        if self._nv == 0:
            raise EmptyGraph("graph has no vertices")
        buckets = self._buckets
        d = self._maxd
        while not buckets[d]:
            d -= 1
        self._maxd = d
        return d

    def bucket(self, d: int) -> tuple[int, ...]:
        if d < len(self._buckets):
            return tuple(self._buckets[d])
        return ()

    def random_vertex_with_degree(self, d: int, rng) -> int:
        if d >= len(self._buckets) or not self._buckets[d]:
            raise EmptyBucket(f"no vertex of degree {d}")
        b = self._buckets[d]
        return b[rng.randbelow(len(b))]

    def random_max_degree_vertex(self, rng) -> int:
        if self._nv == 0:
            raise EmptyGraph("graph has no vertices")
        return self.random_vertex_with_degree(self.max_degree(), rng)

    def random_incident_edge(self, v: int, rng) -> int:
        self._require_vertex(v)
        lst = self._inc[v]
        if not lst:
            raise IsolatedVertex(f"vertex {v} has no incident edge")
        return lst[rng.randbelow(len(lst))]

    def degree_histogram(self) -> dict[int, int]:
        return {d: len(b) for d, b in enumerate(self._buckets) if b}

    def excess(self, ell: int) -> int:
        return sum((d - ell) * len(b) for d, b in enumerate(self._buckets) if d > ell)

    def p_j(self, j: int) -> float:
        if self._m == 0:
            raise EmptyGraphForPj("p_j needs at least one edge")
        n_j = len(self._buckets[j]) if j < len(self._buckets) else 0
        return j * n_j / (2 * self._m)

    def check_invariants(self) -> None:
        """Full O(n + m) consistency check; raises AssertionError."""
        degsum = 0
        nv = 0
        for v, lst in enumerate(self._inc):
            if lst is None:
                assert self._bpos[v] == -1
                continue
            nv += 1
            degsum += len(lst)
            d = len(lst)
            assert self._buckets[d][self._bpos[v]] == v, f"bucket of {v}"
            for i, e in enumerate(lst):
                a, b = self._ea[e], self._eb[e]
                assert a != b, f"loop {e}"
                if a == v:
                    assert self._pa[e] == i
                else:
                    assert b == v and self._pb[e] == i
        live_edges = sum(1 for a in self._ea if a >= 0)
        assert nv == self._nv
        assert live_edges == self._m
        assert degsum == 2 * self._m
        assert sum(len(b) for b in self._buckets) == nv

    def edge_multiset(self) -> Counter:
        """Multiset of unordered endpoint pairs, for structural comparison."""
        return Counter(tuple(sorted((a, b))) for _, a, b in self.edges())

    def __repr__(self) -> str:
        return f"MultiGraph(|V|={self._nv}, |E|={self._m})"

    # -- kernel interchange ----------------------------------------------

    def _export_state(self) -> dict:
        """Flat arrays describing the full internal state, orders included."""
        inc = self._inc
        lens = np.fromiter((0 if lst is None else len(lst) for lst in inc), dtype=np.int64, count=len(inc))
        inc_off = np.zeros(len(inc) + 1, dtype=np.int64)
        np.cumsum(lens, out=inc_off[1:])
        flat = [e for lst in inc if lst for e in lst]
        alive = np.fromiter((lst is not None for lst in inc), dtype=np.uint8, count=len(inc))
        blens = np.array([len(b) for b in self._buckets], dtype=np.int64)
        b_off = np.zeros(len(blens) + 1, dtype=np.int64)
        np.cumsum(blens, out=b_off[1:])
        bflat = [v for b in self._buckets for v in b]
        return {
            "ea": np.asarray(self._ea, dtype=np.int64),
            "eb": np.asarray(self._eb, dtype=np.int64),
            "inc_off": inc_off,
            "inc_data": np.asarray(flat, dtype=np.int64),
            "alive": alive,
            "bucket_off": b_off,
            "bucket_data": np.asarray(bflat, dtype=np.int64),
            "num_edges": self._m,
        }

    def _consume(self, next_vid: int) -> None:
        """Mark the graph as reduced to nothing by an external kernel."""
        while len(self._inc) < next_vid:
            self._inc.append(None)
            self._bpos.append(-1)
        for v in range(len(self._inc)):
            self._inc[v] = None
            self._bpos[v] = -1
        for e in range(len(self._ea)):
            self._ea[e] = self._eb[e] = -1
        self._buckets = [[]]
        self._nv = 0
        self._m = 0
        self._mind = 0
        self._maxd = 0


# -- degree statistics that only need a histogram -------------------------


def excess_from_histogram(hist: dict[int, int], ell: int) -> int:
    return sum((d - ell) * c for d, c in hist.items() if d > ell)


def log2n(n: int) -> float:
    """Natural-log square used in the slack and excess thresholds."""
    return math.log(n) ** 2 if n > 1 else 0.0


# -- edge-list text format -------------------------------------------------


def write_edgelist(g: MultiGraph, dest: str | Path | IO[str]) -> None:
    """Write ``# vertices=N edges=M`` then one ``u v`` line per edge.

    Live vertices are relabelled ``0..N-1`` in increasing id order (the
    identity for a freshly built graph); edges go out in id order.
    """
    label = {v: i for i, v in enumerate(g.vertices())}
    lines = [f"# vertices={len(label)} edges={g.num_edges}\n"]
    lines.extend(f"{label[a]} {label[b]}\n" for _, a, b in g.edges())
    text = "".join(lines)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_edgelist(src: str | Path | IO[str]) -> MultiGraph:
    text = src.read() if hasattr(src, "read") else Path(src).read_text()
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "vertices":
                    n = int(val)
                elif key == "edges":
                    declared_m = int(val)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise EdgeListFormatError(f"line {lineno}: non-integer vertex in {raw!r}") from None
    if n is None:
        n = 1 + max((max(a, b) for a, b in edges), default=-1)
    if declared_m is not None and declared_m != len(edges):
        raise EdgeListFormatError(f"header declares {declared_m} edges, found {len(edges)}")
    return MultiGraph.from_edges(n, edges)
