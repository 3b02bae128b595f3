"""Reduce followed by Construct on one graph."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .actions import ActionLog
from .construct import Matching, unwind
from .multigraph import MultiGraph
from .reduce import Monitors, run_reduce
from .trace import Trace


@dataclass
class RCResult:
    matching: Matching
    log: ActionLog
    trace: Trace
    seconds: float  # reduce + construct wall time

    @property
    def size(self) -> int:
        return len(self.matching)


def reduce_construct(
    g: MultiGraph, rng, *, monitors: Monitors | None = None, backend: str | None = None
) -> RCResult:
    """Run both phases on a copy of ``g``; ``g`` itself is not modified."""
    work = g.copy()
    t0 = time.perf_counter()
    log, trace = run_reduce(work, rng, monitors, backend=backend)
    m = unwind(log, g, rng, backend=backend)
    return RCResult(m, log, trace, time.perf_counter() - t0)
