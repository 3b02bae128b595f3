"""Exact maximum matchings: Edmonds' blossom search and a bitmask brute force."""
from __future__ import annotations

from collections import deque
from functools import lru_cache

from .construct import Matching
from .multigraph import MultiGraph

BRUTE_FORCE_LIMIT = 16


class TooLarge(ValueError):
    pass


def _simple_projection(g: MultiGraph):
    """Index the live vertices and collapse parallel edges.

    Returns ``(verts, adj, rep)`` where ``rep[(i, j)]`` (i < j) is the
    smallest edge id joining the two vertices.
    """
    verts = list(g.vertices())
    index = {v: i for i, v in enumerate(verts)}
    adj: list[set[int]] = [set() for _ in verts]
    rep: dict[tuple[int, int], int] = {}
    for e, a, b in g.edges():
        i, j = index[a], index[b]
        key = (i, j) if i < j else (j, i)
        if key not in rep:
            rep[key] = e
            adj[i].add(j)
            adj[j].add(i)
    return verts, [sorted(s) for s in adj], rep


def _greedy(adj, match) -> None:
    for v, nb in enumerate(adj):
        if match[v] == -1:
            for u in nb:
                if match[u] == -1:
                    match[v], match[u] = u, v
                    break


def _augment_from(root: int, adj, match) -> bool:
    n = len(adj)
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    q = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while q:
        v = q.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            q.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    # flip the alternating path ending at ``to``
                    while to != -1:
                        pv = parent[to]
                        nxt = match[pv]
                        match[to], match[pv] = pv, to
                        to = nxt
                    return True
                used[match[to]] = True
                q.append(match[to])
    return False


def max_matching_exact(g: MultiGraph) -> Matching:
    """Maximum-cardinality matching of ``g``.

    Searches for augmenting paths with blossom shrinking on the simple
    projection; each matched pair reports its smallest edge id.
    """
    verts, adj, rep = _simple_projection(g)
    match = [-1] * len(verts)
    _greedy(adj, match)
    for v in range(len(verts)):
        if match[v] == -1 and adj[v]:
            _augment_from(v, adj, match)
    edges = [rep[(i, j)] for i, j in enumerate(match) if j > i]
    return Matching.from_edges(edges, g, source="blossom")


def brute_force_matching(g: MultiGraph) -> int:
    """Maximum matching size by exhaustive search over vertex subsets."""
    verts, adj, _ = _simple_projection(g)
    if len(verts) > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force limited to {BRUTE_FORCE_LIMIT} vertices, got {len(verts)}")
    nbmask = [sum(1 << u for u in nb) for nb in adj]

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        top = best(rest)
        cand = nbmask[v] & rest
        while cand:
            low = cand & -cand
            top = max(top, 1 + best(rest & ~low))
            cand ^= low
        return top

    return best((1 << len(verts)) - 1)


def match_with_fallback(g: MultiGraph, rng, *, backend: str | None = None) -> Matching:
    """Reduce-Construct matching, replaced by the exact one unless it is (near-)perfect.

    ``g`` is left untouched. The returned matching's ``source`` tells which
    of the two produced it.
    """
    from .pipeline import reduce_construct

    res = reduce_construct(g, rng, backend=backend)
    if len(res.matching) == g.num_vertices // 2:
        return res.matching
    exact = max_matching_exact(g)
    return exact if len(exact) > len(res.matching) else res.matching
