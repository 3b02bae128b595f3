"""Pure-Python kernels. ``_core.pyx`` mirrors these draw-for-draw."""
from __future__ import annotations

import numpy as np

from .actions import AUTO_CORRECT, CONTRACTION, MAX_EDGE, VERTEX_ONE, VERTEX_ZERO


class InconsistentLog(ValueError):
    pass


def sample_pairing(degrees, rng, max_tries: int):
    """Pair configuration points until an attempt produces no loop.

    Returns ``(points, attempts_used)``; consecutive points form the edges.
    An attempt stops at its first loop, which rejects the whole pairing
    without spending draws on the rest of it. ``attempts_used`` is -1 when
    ``max_tries`` attempts all failed.
    """
    pts = [v for v, d in enumerate(np.asarray(degrees).tolist()) for _ in range(d)]
    m = len(pts)
    if max_tries <= 0:
        return pts, -1
    for attempt in range(1, max_tries + 1):
        ok = True
        for j in range(0, m, 2):
            r = j + 1 + rng.randbelow(m - j - 1)
            pts[j + 1], pts[r] = pts[r], pts[j + 1]
            if pts[j] == pts[j + 1]:
                ok = False
                break
        if ok:
            return pts, attempt
    return pts, -1


def _find_absorbed(p, at: int, n: int, edge: int) -> int:
    for i in range(n):
        if p[at + 2 * i] == edge:
            return p[at + 2 * i + 1]
    raise InconsistentLog(f"matched edge {edge} not absorbed by the contraction")


def _tail(p, o: int):
    # returns (new_vertex, set size, offset of the absorbed count)
    new, ns = p[o], p[o + 1]
    o += 2 + ns
    o += 1 + 3 * p[o]
    return new, ns, o


def unwind_kernel(kinds, offsets, payload, nvid: int, rng) -> np.ndarray:
    """Expand the log backwards; returns ``mate[v]`` (edge id or -1)."""
    mate = [-1] * nvid
    p = payload.tolist() if hasattr(payload, "tolist") else list(payload)
    ks = kinds.tolist() if hasattr(kinds, "tolist") else list(kinds)
    offs = offsets.tolist() if hasattr(offsets, "tolist") else list(offsets)

    def pair(x: int, y: int, e: int) -> None:
        if mate[x] != -1 or mate[y] != -1:
            raise InconsistentLog(f"vertex {x} or {y} already matched when adding edge {e}")
        mate[x] = mate[y] = e

    for i in range(len(ks) - 1, -1, -1):
        code = ks[i]
        o = offs[i]
        if code == VERTEX_ZERO or code == MAX_EDGE:
            continue
        if code == VERTEX_ONE:
            pair(p[o], p[o + 1], p[o + 2])
        elif code == CONTRACTION:
            v, e1, a, e2, b = p[o : o + 5]
            new, ns, at = _tail(p, o + 5)
            me = mate[new]
            mate[new] = -1
            if me >= 0:
                s = _find_absorbed(p, at + 1, p[at], me)
                mate[s] = me
                if ns == 3:
                    if s == a:
                        pair(v, b, e2)
                    elif s == b:
                        pair(v, a, e1)
                    else:
                        raise InconsistentLog(f"edge {me} returned to the contracted vertex {v}")
            elif ns == 3:
                if rng.randbelow(2) == 0:
                    pair(v, a, e1)
                else:
                    pair(v, b, e2)
            else:
                pair(v, a, e1 if rng.randbelow(2) == 0 else e2)
        elif code == AUTO_CORRECT:
            u, v, w, f1, f2, rem = p[o : o + 6]
            new, ns, at = _tail(p, o + 6)
            me = mate[new]
            mate[new] = -1
            if me >= 0:
                s = _find_absorbed(p, at + 1, p[at], me)
                mate[s] = me
                if ns == 3:
                    if s == w:
                        pair(u, v, rem)
                    elif s == v:
                        pair(u, w, f1 if rng.randbelow(2) == 0 else f2)
                    else:
                        raise InconsistentLog(f"edge {me} returned to the degree-2 vertex {u}")
            else:
                r = rng.randbelow(3)
                pair(u, w if r < 2 else v, (f1, f2, rem)[r])
        else:
            raise InconsistentLog(f"unknown action code {code}")
    return np.asarray(mate, dtype=np.int64)


def simulate_hyperactions(g, rng, count: int, rmax: int, double_edge: str = "match"):
    """Apply one hyperaction to ``g`` ``count`` times, undoing each.

    Returns ``(dhist, kinds)``: ``dhist[t, r]`` is the change of n_r for
    ``r`` in ``0..rmax`` and ``kinds[t]`` the hyperaction kind code.
    """
    from .reduce import classify_actions, reduce_step, undo_action

    if g.num_vertices == 0 or g.min_degree() < 3:
        raise ValueError("hyperaction simulation needs minimum degree at least 3")
    dhist = np.zeros((count, rmax + 1), dtype=np.int16)
    kinds = np.zeros(count, dtype=np.int8)
    buckets = g._buckets
    before = [len(buckets[r]) if r < len(buckets) else 0 for r in range(rmax + 1)]
    for t in range(count):
        acts = reduce_step(g, rng, double_edge=double_edge)
        while g.num_vertices and g.min_degree() < 3:
            acts.extend(reduce_step(g, rng, double_edge=double_edge))
        buckets = g._buckets
        for r in range(rmax + 1):
            dhist[t, r] = (len(buckets[r]) if r < len(buckets) else 0) - before[r]
        kinds[t] = classify_actions(acts)
        for act in reversed(acts):
            undo_action(g, act, reclaim=True)
    return dhist, kinds
