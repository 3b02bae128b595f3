"""Per-boundary statistics of a Reduce run.

A trace holds one row for every graph Γ_i of the run (each graph of minimum
degree at least 3 reached right before a max-edge removal, plus the final
empty graph). Rows are stored column-wise in one integer matrix:

    pos  num_vertices  e  delta  Delta  n_0 .. n_{k+1}  ex_3 .. ex_k  kind

``n_{k+1}`` counts every vertex of degree k+1 or more. ``kind`` is the code
of the hyperaction that produced Γ_i (``initial`` for Γ_0).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import IO

import numpy as np

from .genmodel import ALPHA, dominance_slack

KINDS = ("initial", "T1", "T2", "T3a", "T3b", "T3c", "T4", "bad")
INITIAL, T1, T2, T3A, T3B, T3C, T4, BAD = range(8)
GOOD_CODES = (T1, T2, T3A, T3B, T4)


def row_width(k: int) -> int:
    return 5 + (k + 2) + (k - 2) + 1


class TraceTooShort(ValueError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    i: int
    kind: str
    action_index: int
    num_vertices: int
    e: int
    delta: int
    Delta: int
    hist: dict
    ex: dict
    p: dict
    dominant: bool
    dominant_strict: bool


class Trace:
    def __init__(self, rows, k: int, n0: int):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, row_width(k))
        self.rows = rows
        self.k = k
        self.n0 = n0

    # column views
    @property
    def action_index(self) -> np.ndarray:
        return self.rows[:, 0]

    @property
    def num_vertices(self) -> np.ndarray:
        return self.rows[:, 1]

    @property
    def e(self) -> np.ndarray:
        return self.rows[:, 2]

    @property
    def delta(self) -> np.ndarray:
        return self.rows[:, 3]

    @property
    def Delta(self) -> np.ndarray:
        return self.rows[:, 4]

    @property
    def hist(self) -> np.ndarray:
        return self.rows[:, 5 : 5 + self.k + 2]

    @property
    def kind_codes(self) -> np.ndarray:
        return self.rows[:, -1]

    def __len__(self) -> int:
        return len(self.rows)

    def n(self, j: int) -> np.ndarray:
        if not 0 <= j <= self.k:
            raise ValueError(f"n_j tracked for 0 <= j <= {self.k}")
        return self.rows[:, 5 + j]

    def ex(self, ell: int) -> np.ndarray:
        if not 3 <= ell <= self.k:
            raise ValueError(f"ex_l tracked for 3 <= l <= {self.k}")
        return self.rows[:, 5 + self.k + 2 + ell - 3]

    def p(self, j: int) -> np.ndarray:
        e = self.e
        out = np.zeros(len(self), dtype=float)
        nz = e > 0
        out[nz] = j * self.n(j)[nz] / (2.0 * e[nz])
        return out

    def p_gt(self, j: int) -> np.ndarray:
        return sum((self.p(r) for r in range(j + 1, self.k + 1)), np.zeros(len(self)))

    def dominant(self, ell: int | None = None, *, strict: bool = False) -> np.ndarray:
        """Membership of every Γ_i in the (alpha, 3, ell)-dominant class."""
        ell = self.k if ell is None else ell
        ok = np.ones(len(self), dtype=bool)
        for j in range(4, ell + 1):
            slack = 0.0 if strict else dominance_slack(self.n0, ell, j)
            ok &= self.n(j) >= ALPHA * self.n(j - 1) - slack
        return ok

    @property
    def kinds(self) -> list[str]:
        return [KINDS[c] for c in self.kind_codes.tolist()]

    def good(self) -> np.ndarray:
        return np.isin(self.kind_codes, GOOD_CODES)

    def kind_counts(self) -> dict[str, int]:
        counts = np.bincount(self.kind_codes, minlength=len(KINDS))
        return {name: int(c) for name, c in zip(KINDS, counts) if c}

    def edge_floor(self) -> float:
        return self.n0**0.9

    def __getitem__(self, i: int) -> TraceRecord:
        if i < 0:
            i += len(self)
        row = self.rows[i].tolist()
        e = row[2]
        hist = {j: row[5 + j] for j in range(self.k + 2) if row[5 + j]}
        ex = {ell: int(self.ex(ell)[i]) for ell in range(3, self.k + 1)}
        p = {j: (j * row[5 + j] / (2 * e) if e else 0.0) for j in range(self.k + 1)}
        return TraceRecord(
            i, KINDS[row[-1]], row[0], row[1], e, row[3], row[4], hist, ex, p,
            self._dominant_row(i, False), self._dominant_row(i, True),
        )

    def _dominant_row(self, i: int, strict: bool) -> bool:
        n = self.rows[i, 5 : 5 + self.k + 1]
        for j in range(4, self.k + 1):
            slack = 0.0 if strict else dominance_slack(self.n0, self.k, j)
            if n[j] < ALPHA * n[j - 1] - slack:
                return False
        return True

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def to_csv(self, dest: str | Path | IO[str]) -> None:
        k = self.k
        header = ["i", "kind", "e_i", "delta_i", "Delta_i", f"ex_{k}", f"ex_{k - 1}" if k > 3 else "ex_3", "p_3"]
        header += [f"n_{j}" for j in range(3, k + 1)] + ["dominant"]
        ex_k = self.ex(k)
        ex_k1 = self.ex(max(k - 1, 3))
        p3 = self.p(3)
        dom = self.dominant()
        lines = [",".join(header)]
        for i, row in enumerate(self.rows.tolist()):
            cells = [i, KINDS[row[-1]], row[2], row[3], row[4], int(ex_k[i]), int(ex_k1[i]), f"{p3[i]:.6f}"]
            cells += [row[5 + j] for j in range(3, k + 1)]
            cells.append(int(dom[i]))
            lines.append(",".join(map(str, cells)))
        text = "\n".join(lines) + "\n"
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            Path(dest).write_text(text)

    def __repr__(self) -> str:
        return f"Trace({len(self)} boundaries, k={self.k}, n0={self.n0})"
