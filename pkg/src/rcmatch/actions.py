"""Reduce actions and the flat-array action log.

Every action is stored as a kind code plus a run of integers in one payload
array; the compiled kernel writes the same layout directly. Layouts:

    VERTEX_ZERO   v
    VERTEX_ONE    v w matched r (f a b)*r
    CONTRACTION   v e1 a e2 b new nS S*nS ndrop (f a b)*ndrop nabs (f s)*nabs
    MAX_EDGE      v u e deg_v deg_u
    AUTO_CORRECT  u v w f1 f2 removed new nS S*nS ndrop (f a b)*ndrop nabs (f s)*nabs

``(f a b)`` is an edge with its endpoints at the time of the action and
``(f s)`` an edge absorbed by the new vertex together with the set member it
used to attach to.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator, Union

import numpy as np

VERTEX_ZERO, VERTEX_ONE, CONTRACTION, MAX_EDGE, AUTO_CORRECT = range(5)
KIND_NAMES = ("vertex_zero", "vertex_one", "contraction", "max_edge_removal", "auto_correction")


class MalformedLog(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class VertexZero:
    v: int
    code = VERTEX_ZERO


@dataclass(frozen=True, slots=True)
class VertexOne:
    v: int
    w: int
    matched_edge: int
    removed: tuple  # (edge, a, b) for every edge at v or w
    code = VERTEX_ONE

    @property
    def removed_edges(self) -> tuple[int, ...]:
        return tuple(f for f, _, _ in self.removed)


@dataclass(frozen=True, slots=True)
class Contraction:
    contracted: int
    neighbors: tuple  # (a, b), or (a,) when both edges of v go to a
    new_vertex: int
    internal_dropped: int
    v_edges: tuple  # ((e1, a), (e2, b)): the two edges of the contracted vertex
    absorbed: tuple
    dropped: tuple
    code = CONTRACTION

    @property
    def members(self) -> tuple[int, ...]:
        return (self.contracted, *self.neighbors)


@dataclass(frozen=True, slots=True)
class MaxEdgeRemoval:
    v: int
    u: int
    edge: int
    deg_v_before: int
    deg_u_before: int
    code = MAX_EDGE


@dataclass(frozen=True, slots=True)
class AutoCorrection:
    u: int
    v: int
    w: int
    new_vertex: int
    internal_dropped: int
    u_edges: tuple  # the two parallel u-w edges
    removed_edge: int  # the u-v edge taken out by the preceding max-edge removal
    absorbed: tuple
    dropped: tuple
    code = AUTO_CORRECT

    @property
    def members(self) -> tuple[int, ...]:
        return (self.u, self.v) if self.w == self.v else (self.u, self.v, self.w)


Action = Union[VertexZero, VertexOne, Contraction, MaxEdgeRemoval, AutoCorrection]


def _put_contraction_tail(out: list, new: int, members, dropped, absorbed) -> None:
    out.append(new)
    out.append(len(members))
    out.extend(members)
    out.append(len(dropped))
    for f, a, b in dropped:
        out += (f, a, b)
    out.append(len(absorbed))
    for f, s in absorbed:
        out += (f, s)


def encode(act: Action, out: list) -> int:
    code = act.code
    if code == VERTEX_ZERO:
        out.append(act.v)
    elif code == VERTEX_ONE:
        out += (act.v, act.w, act.matched_edge, len(act.removed))
        for f, a, b in act.removed:
            out += (f, a, b)
    elif code == CONTRACTION:
        (e1, a), (e2, b) = act.v_edges
        out += (act.contracted, e1, a, e2, b)
        _put_contraction_tail(out, act.new_vertex, act.members, act.dropped, act.absorbed)
    elif code == MAX_EDGE:
        out += (act.v, act.u, act.edge, act.deg_v_before, act.deg_u_before)
    else:
        f1, f2 = act.u_edges
        out += (act.u, act.v, act.w, f1, f2, act.removed_edge)
        _put_contraction_tail(out, act.new_vertex, act.members, act.dropped, act.absorbed)
    return code


def _get_contraction_tail(p, o: int):
    new = int(p[o])
    ns = int(p[o + 1])
    members = tuple(int(x) for x in p[o + 2 : o + 2 + ns])
    o += 2 + ns
    nd = int(p[o])
    dropped = tuple((int(p[o + 1 + 3 * i]), int(p[o + 2 + 3 * i]), int(p[o + 3 + 3 * i])) for i in range(nd))
    o += 1 + 3 * nd
    na = int(p[o])
    absorbed = tuple((int(p[o + 1 + 2 * i]), int(p[o + 2 + 2 * i])) for i in range(na))
    return new, members, dropped, absorbed


def decode(code: int, p, o: int) -> Action:
    if code == VERTEX_ZERO:
        return VertexZero(int(p[o]))
    if code == VERTEX_ONE:
        r = int(p[o + 3])
        removed = tuple((int(p[o + 4 + 3 * i]), int(p[o + 5 + 3 * i]), int(p[o + 6 + 3 * i])) for i in range(r))
        return VertexOne(int(p[o]), int(p[o + 1]), int(p[o + 2]), removed)
    if code == CONTRACTION:
        v, e1, a, e2, b = (int(x) for x in p[o : o + 5])
        new, members, dropped, absorbed = _get_contraction_tail(p, o + 5)
        return Contraction(v, members[1:], new, len(dropped), ((e1, a), (e2, b)), absorbed, dropped)
    if code == MAX_EDGE:
        return MaxEdgeRemoval(*(int(x) for x in p[o : o + 5]))
    if code == AUTO_CORRECT:
        u, v, w, f1, f2, rem = (int(x) for x in p[o : o + 6])
        new, _, dropped, absorbed = _get_contraction_tail(p, o + 6)
        return AutoCorrection(u, v, w, new, len(dropped), (f1, f2), rem, absorbed, dropped)
    raise MalformedLog(f"unknown action code {code}")


# -- json lines -------------------------------------------------------------


def _to_json(act: Action) -> dict:
    d = {"kind": KIND_NAMES[act.code]}
    for name in act.__dataclass_fields__:
        val = getattr(act, name)
        d[name] = [list(x) if isinstance(x, tuple) else x for x in val] if isinstance(val, tuple) else val
    return d


_CLASSES = {KIND_NAMES[c.code]: c for c in (VertexZero, VertexOne, Contraction, MaxEdgeRemoval, AutoCorrection)}


def _from_json(d: dict) -> Action:
    cls = _CLASSES.get(d.get("kind"))
    if cls is None:
        raise MalformedLog(f"unknown action kind {d.get('kind')!r}")
    kw = {}
    for name in cls.__dataclass_fields__:
        val = d[name]
        if isinstance(val, list):
            val = tuple(tuple(x) if isinstance(x, list) else x for x in val)
        kw[name] = val
    return cls(**kw)


class ActionLog:
    """Ordered record of Reduce actions, stored as flat integer arrays."""

    def __init__(self, kinds=None, offsets=None, payload=None):
        self.kinds = np.zeros(0, dtype=np.int8) if kinds is None else np.asarray(kinds, dtype=np.int8)
        self.offsets = np.zeros(1, dtype=np.int64) if offsets is None else np.asarray(offsets, dtype=np.int64)
        self.payload = np.zeros(0, dtype=np.int64) if payload is None else np.asarray(payload, dtype=np.int64)
        if len(self.offsets) != len(self.kinds) + 1:
            raise MalformedLog("offsets must have one more entry than kinds")

    @classmethod
    def from_actions(cls, actions) -> "ActionLog":
        b = LogBuilder()
        for a in actions:
            b.add(a)
        return b.finish()

    def __len__(self) -> int:
        return len(self.kinds)

    def __getitem__(self, i: int) -> Action:
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return decode(int(self.kinds[i]), self.payload, int(self.offsets[i]))

    def __iter__(self) -> Iterator[Action]:
        p = self.payload.tolist()
        offs = self.offsets.tolist()
        for i, code in enumerate(self.kinds.tolist()):
            yield decode(code, p, offs[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ActionLog):
            return NotImplemented
        return (
            np.array_equal(self.kinds, other.kinds)
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.payload, other.payload)
        )

    def count(self, code: int) -> int:
        return int(np.count_nonzero(self.kinds == code))

    def to_jsonl(self, dest: str | Path | IO[str]) -> None:
        lines = "".join(json.dumps(_to_json(a), separators=(",", ":")) + "\n" for a in self)
        if hasattr(dest, "write"):
            dest.write(lines)
        else:
            Path(dest).write_text(lines)

    @classmethod
    def from_jsonl(cls, src: str | Path | IO[str]) -> "ActionLog":
        text = src.read() if hasattr(src, "read") else Path(src).read_text()
        return cls.from_actions(_from_json(json.loads(line)) for line in text.splitlines() if line.strip())

    def __repr__(self) -> str:
        return f"ActionLog({len(self)} actions)"


class LogBuilder:
    __slots__ = ("kinds", "offsets", "payload")

    def __init__(self):
        self.kinds: list[int] = []
        self.offsets: list[int] = [0]
        self.payload: list[int] = []

    def add(self, act: Action) -> None:
        self.kinds.append(encode(act, self.payload))
        self.offsets.append(len(self.payload))

    def __len__(self) -> int:
        return len(self.kinds)

    def finish(self) -> ActionLog:
        return ActionLog(self.kinds, self.offsets, self.payload)
