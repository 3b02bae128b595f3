"""Configuration-model sampling and the dominance test.

A degree sequence is turned into a loop-free multigraph by pairing its
configuration points uniformly at random; a configuration containing a loop
is discarded entirely and a new one drawn.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .multigraph import MultiGraph

ALPHA = 1.17
DEFAULT_MAX_TRIES = 10_000


class OddDegreeSum(ValueError):
    pass


class ResampleLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]
    k_max: int

    def __post_init__(self):
        if any(d < 0 for d in self.degrees):
            raise ValueError("degrees must be non-negative")
        if sum(self.degrees) % 2:
            raise OddDegreeSum(f"degree sum {sum(self.degrees)} is odd")
        if self.degrees and max(self.degrees) > self.k_max:
            raise ValueError(f"max degree {max(self.degrees)} exceeds k_max={self.k_max}")

    @classmethod
    def of(cls, degrees) -> "DegreeSequence":
        degrees = tuple(int(d) for d in degrees)
        return cls(degrees, max(degrees, default=0))

    def __len__(self) -> int:
        return len(self.degrees)

    @property
    def reduce_ready(self) -> bool:
        """Minimum degree at least 3, as the matching analysis assumes."""
        return bool(self.degrees) and min(self.degrees) >= 3


def regular_sequence(n: int, k: int) -> DegreeSequence:
    if k < 3:
        raise ValueError("regular sequences need k >= 3")
    if n < 0:
        raise ValueError("n must be non-negative")
    if (n * k) % 2:
        raise OddDegreeSum(f"n*k = {n * k} is odd")
    return DegreeSequence((k,) * n, k)


def read_degrees(path: str | Path) -> DegreeSequence:
    """One integer per line; blank lines and ``#`` comments are ignored."""
    degrees = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            degrees.append(int(line))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: not an integer: {raw!r}") from None
    return DegreeSequence.of(degrees)


def sample_configuration(
    d: DegreeSequence | list[int],
    rng,
    *,
    max_tries: int = DEFAULT_MAX_TRIES,
    simple: bool = False,
    backend: str | None = None,
) -> MultiGraph:
    """Uniform loop-free multigraph with degree sequence ``d``.

    With ``simple=True`` configurations containing parallel edges are
    rejected too. The whole configuration is redrawn on every rejection.
    """
    if not isinstance(d, DegreeSequence):
        d = DegreeSequence.of(d)
    degrees = np.asarray(d.degrees, dtype=np.int64)
    kern = _backend.kernels(backend)
    tries_left = max_tries
    while True:
        pts, used = kern.sample_pairing(degrees, rng, tries_left)
        if used < 0:
            raise ResampleLimitExceeded(f"no loop-free configuration in {max_tries} tries")
        tries_left -= used
        pairs = np.asarray(pts, dtype=np.int64).reshape(-1, 2)
        if simple and _has_parallel(pairs):
            if tries_left <= 0:
                raise ResampleLimitExceeded(f"no simple configuration in {max_tries} tries")
            continue
        g = MultiGraph.from_edges(len(degrees), pairs.tolist())
        assert [g.degree(v) for v in range(len(degrees))] == list(d.degrees)
        return g


def _has_parallel(pairs: np.ndarray) -> bool:
    if len(pairs) < 2:
        return False
    key = np.sort(pairs, axis=1)
    key = key[:, 0] * (int(key.max()) + 1) + key[:, 1]
    return len(np.unique(key)) < len(key)


def random_regular(n: int, k: int, rng, **kw) -> MultiGraph:
    return sample_configuration(regular_sequence(n, k), rng, **kw)


# -- dominance --------------------------------------------------------------


def dominance_slack(n0: int, ell: int, j: int) -> float:
    """Slack ``(log^2 n - ell) n^0.8 / 2^j`` with natural log and original n."""
    if n0 <= 1:
        return 0.0
    return (math.log(n0) ** 2 - ell) * n0**0.8 / 2**j


@dataclass(frozen=True)
class DominanceReport:
    k: int
    n0: int
    strict: bool
    alpha: float = ALPHA
    # j -> (holds, margin) with margin = n_j - (alpha n_{j-1} - slack)
    verdicts: dict = field(default_factory=dict)

    @property
    def member(self) -> bool:
        return all(ok for ok, _ in self.verdicts.values())

    @property
    def failing(self) -> list[int]:
        return [j for j, (ok, _) in self.verdicts.items() if not ok]


def dominance_from_histogram(hist: dict[int, int], k: int, n0: int, *, strict: bool = False) -> DominanceReport:
    verdicts = {}
    for j in range(4, k + 1):
        slack = 0.0 if strict else dominance_slack(n0, k, j)
        margin = hist.get(j, 0) - (ALPHA * hist.get(j - 1, 0) - slack)
        verdicts[j] = (margin >= 0, margin)
    return DominanceReport(k, n0, strict, ALPHA, verdicts)


def check_dominance(g: MultiGraph, k: int, n0: int, *, strict: bool = False) -> DominanceReport:
    """Evaluate membership of ``g`` in the (1.17, 3, k)-dominant class.

    ``n0`` is the vertex count of the original input; it fixes the slack.
    ``strict`` drops the slack term entirely.
    """
    return dominance_from_histogram(g.degree_histogram(), k, n0, strict=strict)
