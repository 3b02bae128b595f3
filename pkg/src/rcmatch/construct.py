"""Construct: expand a Reduce log backwards into a matching of the input graph."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, NamedTuple

import numpy as np

from . import _backend
from ._pykernels import InconsistentLog
from .actions import ActionLog
from .multigraph import GraphError, MultiGraph
from .rng import SplitMix64

__all__ = [
    "InconsistentLog",
    "Matching",
    "MatchingCheck",
    "unwind",
    "validate_matching",
    "rewind_graph",
    "write_matching",
    "read_matching",
]


@dataclass(frozen=True)
class Matching:
    edges: frozenset
    covered: frozenset
    source: str = field(default="reduce-construct", compare=False)

    def __len__(self) -> int:
        return len(self.edges)

    @classmethod
    def from_edges(cls, edges, g0: MultiGraph, source: str = "reduce-construct") -> "Matching":
        edges = frozenset(int(e) for e in edges)
        covered = frozenset(x for e in edges for x in g0.endpoints(e))
        return cls(edges, covered, source)


class MatchingCheck(NamedTuple):
    valid: bool
    size: int
    perfect: bool


def unwind(log: ActionLog, g0_snapshot: MultiGraph, rng=None, *, backend: str | None = None) -> Matching:
    """Matching of ``g0_snapshot`` assembled by reversing ``log``.

    Walking the log from the end, pendant removals contribute their edge and
    each contraction is expanded so that its merged vertex's matched edge
    goes back to the member it came from, with the remaining members paired
    up through one of their edges. Ties are broken with ``rng``.
    """
    rng = SplitMix64(0) if rng is None else rng
    nvid = g0_snapshot.next_vertex_id + len(log) + 1
    kern = _backend.kernels(backend)
    mate = kern.unwind_kernel(log.kinds, log.offsets, log.payload, nvid, rng)
    mate = np.asarray(mate)
    live = np.fromiter(g0_snapshot.vertices(), dtype=np.int64)
    if len(mate) > g0_snapshot.next_vertex_id:
        stray = np.flatnonzero(mate[g0_snapshot.next_vertex_id :] >= 0)
        if len(stray):
            raise InconsistentLog(f"contracted vertex {stray[0] + g0_snapshot.next_vertex_id} left matched")
    edges = np.unique(mate[live][mate[live] >= 0]) if len(live) else []
    try:
        return Matching.from_edges(edges.tolist() if len(edges) else [], g0_snapshot)
    except GraphError as exc:
        raise InconsistentLog(f"matched edge missing from the input graph: {exc}") from None


def validate_matching(M: Matching, g0: MultiGraph) -> MatchingCheck:
    seen: set[int] = set()
    valid = True
    for e in M.edges:
        if not g0.has_edge(e):
            valid = False
            break
        a, b = g0.endpoints(e)
        if a in seen or b in seen:
            valid = False
            break
        seen.add(a)
        seen.add(b)
    size = len(M.edges)
    return MatchingCheck(valid, size, valid and size == g0.num_vertices // 2)


def rewind_graph(log: ActionLog) -> MultiGraph:
    """Rebuild the graph a log started from by undoing it on the empty graph."""
    from .reduce import undo_action

    g = MultiGraph()
    for i in range(len(log) - 1, -1, -1):
        undo_action(g, log[i])
    return g


def write_matching(M: Matching, g0: MultiGraph, dest: str | Path | IO[str]) -> None:
    """One ``u v edge_id`` line per matched edge, in edge-id order.

    Vertex labels follow the edge-list writer: live vertices renumbered in
    increasing id order.
    """
    label = {v: i for i, v in enumerate(g0.vertices())}
    lines = []
    for e in sorted(M.edges):
        a, b = g0.endpoints(e)
        lines.append(f"{label[a]} {label[b]} {e}\n")
    text = "".join(lines)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_matching(src: str | Path | IO[str]) -> list[tuple[int, int, int]]:
    text = src.read() if hasattr(src, "read") else Path(src).read_text()
    return [tuple(int(x) for x in line.split()) for line in text.splitlines() if line.strip()]
