"""Trace analysis: drift windows, the p_3 bound, excess, stopping times.

Thresholds use the original vertex count n0 of the trace and the natural
log. Every report is a pure function of its trace.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .genmodel import ALPHA
from .multigraph import log2n
from .trace import GOOD_CODES, KINDS, T2, T3A, T3B, T3C, T4, Trace, TraceTooShort

REMA_HEADLINE = 0.081


# -- closed forms --------------------------------------------------------------


def rema_bound(k: int, *, exponent: str = "j-3") -> float:
    """``3 / sum_{j=3}^{k-1} alpha^{j-3} j`` (or with ``alpha^{3-j}``)."""
    sign = 1 if exponent == "j-3" else -1
    return 3.0 / sum(ALPHA ** (sign * (j - 3)) * j for j in range(3, k))


def predicted_dn(p: np.ndarray, r: int, k: int, at_max: np.ndarray | float = 0.0) -> np.ndarray:
    """Expected change of n_r over one good hyperaction.

    ``p`` has shape (..., k+1) with p[..., j] = p_j. For r = k-1 the term
    ``at_max`` (1 when the max degree equals k) is added.
    """
    p = np.asarray(p, dtype=float)
    if p.shape[-1] < r + 2:
        # degrees above k carry no endpoints yet
        pad = [(0, 0)] * (p.ndim - 1) + [(0, r + 2 - p.shape[-1])]
        p = np.pad(p, pad)
    conv = np.zeros(p.shape[:-1])
    for j1 in range(3, k + 1):
        j2 = r + 2 - j1
        if 3 <= j2 <= k:
            conv = conv + p[..., j1] * p[..., j2]
    p_next = p[..., r + 1]
    out = p_next - p[..., r] + p[..., 3] * (conv - 2 * p[..., r])
    if r == k - 1:
        out = out + at_max
    return out


def ex_drift_bound(p3, p_next, ell: int):
    """Upper bound on the expected change of ex_l while ex_l > 0."""
    return -(1 - p3) - p_next - p3**3 + (ell - 3) * p3 * (1 - p3) ** 2


# -- stopping times -----------------------------------------------------------------


def edge_floor(n0: int) -> float:
    return n0**0.9


def t_stop(trace: Trace, j: int, *, strict: bool = True) -> int:
    """First boundary outside the (alpha, 3, j)-dominant class or below the edge floor."""
    bad = ~trace.dominant(j, strict=strict) | (trace.e < edge_floor(trace.n0))
    idx = np.flatnonzero(bad)
    return int(idx[0]) if len(idx) else len(trace) - 1


def tau_stop(trace: Trace, j: int) -> int:
    """First boundary whose max degree is at most j or that is below the edge floor."""
    bad = (trace.Delta <= j) | (trace.e < edge_floor(trace.n0))
    idx = np.flatnonzero(bad)
    return int(idx[0]) if len(idx) else len(trace) - 1


# -- drift ----------------------------------------------------------------------------


@dataclass
class Window:
    start: int
    stop: int
    p3_mean: float
    mean_de: float
    pred_de: float
    z_de: float
    t3_frac: float
    rare_frac: float  # T2 + T3b + T4
    dn: dict = field(default_factory=dict)  # r -> (observed, predicted)
    dex: dict = field(default_factory=dict)  # ell -> (observed, bound, transitions with ex > 0)


@dataclass
class DriftReport:
    k: int
    n0: int
    W: int
    horizon: int
    strict: bool
    windows: list
    tolerance: float = 0.05

    @property
    def max_abs_dev_e(self) -> float:
        return max((abs(w.mean_de - w.pred_de) for w in self.windows), default=0.0)

    @property
    def violations(self) -> list[int]:
        return [i for i, w in enumerate(self.windows) if abs(w.mean_de - w.pred_de) > self.tolerance]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["max_abs_dev_e"] = self.max_abs_dev_e
        d["violations"] = self.violations
        d["passed"] = self.passed
        return d


def drift_report(trace: Trace, W: int = 1000, *, strict: bool = True, tolerance: float = 0.05) -> DriftReport:
    """Compare windowed mean changes with their predicted drifts.

    Windows are consecutive runs of ``W`` hyperactions taken from the start
    of the trace up to t_{k-1}. Predictions are evaluated at each
    hyperaction's starting graph and averaged over the window.
    """
    k, n0 = trace.k, trace.n0
    usable = int(np.count_nonzero(trace.Delta[:-1] > 3))
    if usable < W:
        raise TraceTooShort(f"{usable} boundaries with max degree > 3, need at least {W}")
    horizon = min(t_stop(trace, k - 1, strict=strict), len(trace) - 1)
    e = trace.e.astype(float)
    de = np.diff(e)
    P = np.stack([trace.p(j) for j in range(k + 1)], axis=1)
    kinds = trace.kind_codes[1:]
    at_max = (trace.Delta == k).astype(float)
    windows = []
    for s in range(0, horizon - W + 1, W):
        sl = slice(s, s + W)
        p3 = P[sl, 3]
        obs = de[sl]
        pred = -1 - 2 * p3
        sd = obs.std(ddof=1)
        z = (obs.mean() - pred.mean()) / (sd / math.sqrt(W)) if sd > 0 else 0.0
        kd = kinds[sl]
        win = Window(
            s, s + W, float(p3.mean()), float(obs.mean()), float(pred.mean()), float(z),
            float(np.isin(kd, (T3A, T3B, T3C)).mean()), float(np.isin(kd, (T2, T3B, T4)).mean()),
        )
        for r in range(3, k):
            dn = np.diff(trace.n(r).astype(float))[sl]
            win.dn[r] = (float(dn.mean()), float(predicted_dn(P[sl], r, k, at_max[sl]).mean()))
        for ell in range(3, k + 1):
            ex = trace.ex(ell)
            pos = ex[sl] > 0
            if pos.any():
                dex = np.diff(ex.astype(float))[sl][pos]
                p_next = P[sl, ell + 1][pos] if ell + 1 <= k else np.zeros(int(pos.sum()))
                bound = ex_drift_bound(p3[pos], p_next, ell)
                win.dex[ell] = (float(dex.mean()), float(bound.mean()), int(pos.sum()))
        windows.append(win)
    return DriftReport(k, n0, W, horizon, strict, windows, tolerance)


# -- p_3 bound --------------------------------------------------------------------------


@dataclass
class RemAVerdict:
    k: int
    n0: int
    eps: float
    strict: bool
    applicable: bool
    bound: float
    bound_alt: float
    checked: int
    max_p3: float
    violations: list  # (i, p_3)
    violations_alt: int

    @property
    def passed(self) -> bool:
        return self.applicable and not self.violations

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def remA_check(trace: Trace, k: int | None = None, *, eps: float = 0.005, strict: bool = True) -> RemAVerdict:
    """Check p_3 against the closed-form bound wherever the lemma applies.

    Applies at boundaries inside the (alpha, 3, k-1)-dominant class with at
    least n0^0.9 edges. The bound with alpha^{j-3} and the headline 0.081
    are enforced; the alpha^{3-j} form is counted for information.
    """
    k = trace.k if k is None else k
    b1, b2 = rema_bound(k), rema_bound(k, exponent="3-j")
    if k < 8:
        return RemAVerdict(k, trace.n0, eps, strict, False, b1, b2, 0, 0.0, [], 0)
    mask = trace.dominant(k - 1, strict=strict) & (trace.e >= edge_floor(trace.n0))
    p3 = trace.p(3)
    limit = min(b1, REMA_HEADLINE) + eps
    idx = np.flatnonzero(mask)
    viol = [(int(i), float(p3[i])) for i in idx if p3[i] > limit]
    alt = int(np.count_nonzero(p3[idx] > b2 + eps))
    return RemAVerdict(k, trace.n0, eps, strict, True, b1, b2, len(idx), float(p3[idx].max()) if len(idx) else 0.0, viol, alt)


# -- excess ------------------------------------------------------------------------------


@dataclass
class ExcessVerdict:
    k: int
    n0: int
    threshold: float
    checked: int
    max_ex: int
    bounded: bool
    bad_count: int
    bad_count_above3: int  # bad hyperactions from graphs of max degree > 3
    first_bad: int | None

    @property
    def all_good(self) -> bool:
        return self.bad_count == 0

    @property
    def passed(self) -> bool:
        return self.bounded and self.all_good

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(all_good=self.all_good, passed=self.passed)
        return d


def excess_monitor(trace: Trace, k: int | None = None, n: int | None = None) -> ExcessVerdict:
    """Max of ex_k and hyperaction goodness over boundaries with e_i >= n^0.9."""
    k = trace.k if k is None else k
    n = trace.n0 if n is None else n
    thr = log2n(n)
    in_range = trace.e >= edge_floor(n)
    ex = trace.ex(k)
    checked = int(in_range.sum())
    max_ex = int(ex[in_range].max()) if checked else 0
    # hyperaction i is applied to Γ_i; its kind is stored with Γ_{i+1}
    src = np.flatnonzero(in_range[:-1])
    codes = trace.kind_codes[src + 1]
    bad = ~np.isin(codes, GOOD_CODES)
    bad3 = bad & (trace.Delta[src] > 3)
    first = int(src[bad][0]) if bad.any() else None
    return ExcessVerdict(k, n, thr, checked, max_ex, max_ex <= thr, int(bad.sum()), int(bad3.sum()), first)


# -- survival / stopping times ------------------------------------------------------------


@dataclass
class SurvivalVerdict:
    k: int
    n0: int
    applicable: bool
    tau: int | None  # tau_{k-1}
    e0: int
    e_tau: int | None
    ratio: float | None
    n_k0: int
    edge_bound: float | None
    edge_ok: bool | None
    time_bound: float | None
    time_ok: bool | None
    stopping: dict = field(default_factory=dict)  # j -> (tau_j, e at tau_j, t_j)
    note: str = ""

    @property
    def passed(self) -> bool:
        if not self.applicable:
            return True
        return bool(self.edge_ok) and (self.time_ok is None or bool(self.time_ok))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def survival_report(trace: Trace, k: int | None = None, n: int | None = None) -> SurvivalVerdict:
    """Edges left at tau_{k-1}, and tau_{k-1} against 1.5 n_{k,0} + n^0.6."""
    k = trace.k if k is None else k
    n = trace.n0 if n is None else n
    e0 = int(trace.e[0])
    n_k0 = int(trace.n(k)[0])
    stopping = {}
    for j in range(k - 1, 2, -1):
        tj = tau_stop(trace, j)
        stopping[j] = (tj, int(trace.e[tj]), t_stop(trace, j))
    if k <= 3:
        return SurvivalVerdict(k, n, False, None, e0, None, None, n_k0, None, None, None, None, stopping,
                               "max degree is already 3; tau_{k-1} is not defined")
    tau = tau_stop(trace, k - 1)
    e_tau = int(trace.e[tau])
    ratio = e_tau / e0 if e0 else None
    if k >= 8:
        eb, tb = (1 - 4 / k) * e0, 1.5 * n_k0 + n**0.6
        return SurvivalVerdict(k, n, True, tau, e0, e_tau, ratio, n_k0, eb, e_tau >= eb, tb, tau <= tb, stopping)
    if k >= 5:
        eb = e0 / 1e25
        return SurvivalVerdict(k, n, True, tau, e0, e_tau, ratio, n_k0, eb, e_tau >= eb, None, None, stopping,
                               "edge bound e0/1e25 does not bind at this scale")
    return SurvivalVerdict(k, n, False, tau, e0, e_tau, ratio, n_k0, None, None, None, None, stopping,
                           "no bound stated for k = 4; ratio reported only")


# -- per-step hard bounds ------------------------------------------------------------------


@dataclass
class StepBoundReport:
    checked: int
    e_violations: int
    n_violations: int
    ex_violations: dict  # ell -> count
    worst: dict

    @property
    def passed(self) -> bool:
        return self.e_violations == 0 and self.n_violations == 0 and not any(self.ex_violations.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def step_bounds(trace: Trace) -> StepBoundReport:
    """Hard per-hyperaction bounds on e, n_r (3 <= r <= k-1) and ex_l (3 <= l <= k).

    Only good hyperactions applied to graphs of max degree above 3 count.
    """
    k = trace.k
    sel = np.isin(trace.kind_codes[1:], GOOD_CODES) & (trace.Delta[:-1] > 3)
    de = np.abs(np.diff(trace.e))[sel]
    dn = np.stack([np.abs(np.diff(trace.n(r)))[sel] for r in range(3, k)], axis=1) if k > 3 else np.zeros((int(sel.sum()), 0))
    ex_viol = {}
    worst = {"e": int(de.max()) if len(de) else 0, "n": int(dn.max()) if dn.size else 0}
    for ell in range(3, k + 1):
        ex = trace.ex(ell)
        d = np.abs(np.diff(ex))[sel]
        lim = ell - 3 + (ex[:-1][sel] == 0)
        ex_viol[ell] = int(np.count_nonzero(d > lim))
        worst[f"ex_{ell}"] = int(d.max()) if len(d) else 0
    return StepBoundReport(int(sel.sum()), int(np.count_nonzero(de > 6)), int(np.count_nonzero(dn > 5)), ex_viol, worst)


# -- single-hyperaction oracle ----------------------------------------------------------------


@dataclass
class OracleReport:
    hist: dict
    graphs: int
    sims_per_graph: int
    p: dict
    dn: dict  # r -> (mean, se, predicted, z)
    t3: tuple  # (freq, se, p_3, z)
    sigmas: float = 3.0

    @property
    def passed(self) -> bool:
        return all(abs(z) <= self.sigmas for *_, z in self.dn.values()) and abs(self.t3[3]) <= self.sigmas

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def hyperaction_oracle(
    hist: dict,
    *,
    graphs: int = 100,
    sims_per_graph: int = 10_000,
    seed: int = 0,
    rs=(3, 4, 5, 6),
    backend: str | None = None,
) -> OracleReport:
    """Empirical one-hyperaction changes of n_r for a fixed degree histogram.

    Each of ``graphs`` fresh configuration samples with this histogram gets
    ``sims_per_graph`` independent hyperactions, each undone before the
    next. Standard errors come from the spread of per-graph means.
    """
    from . import _backend
    from .genmodel import DegreeSequence, sample_configuration
    from .rng import stream

    hist = {int(d): int(c) for d, c in hist.items() if c}
    if min(hist) < 3:
        raise ValueError("histogram must have minimum degree at least 3")
    k = max(hist)
    degrees = [d for d in sorted(hist) for _ in range(hist[d])]
    e = sum(degrees) / 2
    p = np.array([j * hist.get(j, 0) / (2 * e) for j in range(k + 1)])
    kern = _backend.kernels(backend)
    rmax = max(max(rs) + 1, 3)
    means = np.zeros((graphs, rmax + 1))
    t3 = np.zeros(graphs)
    for gi in range(graphs):
        g = sample_configuration(DegreeSequence.of(degrees), stream(seed, gi, 0), backend=backend)
        dh, kinds = kern.simulate_hyperactions(g, stream(seed, gi, 1), sims_per_graph, rmax)
        means[gi] = dh.mean(axis=0)
        t3[gi] = np.isin(kinds, (T3A, T3B, T3C)).mean()
    dn = {}
    for r in rs:
        m = float(means[:, r].mean())
        se = float(means[:, r].std(ddof=1) / math.sqrt(graphs))
        pred = float(predicted_dn(p, r, k, 1.0 if r == k - 1 else 0.0))
        dn[r] = (m, se, pred, (m - pred) / se if se > 0 else 0.0)
    f = float(t3.mean())
    se = float(t3.std(ddof=1) / math.sqrt(graphs))
    return OracleReport(hist, graphs, sims_per_graph, {j: float(p[j]) for j in range(3, k + 1)}, dn,
                        (f, se, float(p[3]), float((f - p[3]) / se) if se > 0 else 0.0))


# -- output -------------------------------------------------------------------------------------


def to_json(report) -> str:
    d = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(d, indent=2, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


def to_text(report) -> str:
    """Aligned ``key  value`` lines for the flat fields of a report."""
    d = report.to_dict() if hasattr(report, "to_dict") else dict(report)
    flat = {k: v for k, v in d.items() if not isinstance(v, (list, dict))}
    width = max((len(k) for k in flat), default=0)
    lines = [f"{k.ljust(width)}  {_fmt(v)}" for k, v in sorted(flat.items())]
    return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def aggregate(rows: list[dict], keys: list[str]) -> dict:
    """Mean and a normal 95% interval for each numeric key over per-trial rows."""
    out = {}
    for key in keys:
        vals = np.array([r[key] for r in rows if r.get(key) is not None], dtype=float)
        if len(vals) == 0:
            continue
        mean = float(vals.mean())
        half = float(1.96 * vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        out[key] = {"mean": mean, "lo": mean - half, "hi": mean + half, "n": int(len(vals))}
    return out


def write_csv(rows: list[dict], dest: str | Path | None = None) -> str:
    cols: list[str] = []
    for r in rows:
        for c in r:
            if c not in cols and not isinstance(r[c], (list, dict)):
                cols.append(c)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    text = buf.getvalue()
    if dest is not None:
        Path(dest).write_text(text)
    return text


__all__ = [
    "KINDS",
    "TraceTooShort",
    "rema_bound",
    "predicted_dn",
    "ex_drift_bound",
    "t_stop",
    "tau_stop",
    "drift_report",
    "remA_check",
    "excess_monitor",
    "survival_report",
    "step_bounds",
    "hyperaction_oracle",
    "to_json",
    "to_text",
    "aggregate",
    "write_csv",
]
