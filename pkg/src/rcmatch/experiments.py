"""Batch experiments over seeded random regular graphs.

Trial ``t`` of a run with seed ``S`` draws its graph from ``stream(S, t, 0)``
and runs Reduce-Construct on ``stream(S, t, 1)``, so any subset of trials can
be re-run on its own and the order trials finish in does not matter.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from . import stats
from .construct import validate_matching
from .genmodel import random_regular
from .pipeline import reduce_construct
from .reduce import Monitors
from .rng import stream
from .trace import TraceTooShort

OUT_ENV = "RCMATCH_OUT"
EXPERIMENTS = ("perfect-rate", "runtime-scaling", "drift", "remA", "excess", "survival")

# fraction of trials that must pass, per experiment
REQUIRED = {"perfect-rate": 0.99, "excess": 0.99, "survival": 0.95, "drift": 1.0, "remA": 1.0}
SLOPE_RANGE = (0.8, 1.25)


@dataclass
class ExperimentResult:
    name: str
    seed: int
    rows: list
    groups: dict  # "n=..,k=.." -> summary dict
    passed: bool
    out_dir: Path | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"experiment": self.name, "seed": self.seed, "passed": self.passed, "groups": self.groups, **self.extra}


def _trial(args) -> dict:
    name, n, k, seed, t, backend = args
    g = random_regular(n, k, stream(seed, t, 0), backend=backend)
    res = reduce_construct(g, stream(seed, t, 1), monitors=Monitors(k=k), backend=backend)
    chk = validate_matching(res.matching, g)
    tr = res.trace
    row = {
        "experiment": name, "n": n, "k": k, "trial": t, "seed": seed,
        "size": chk.size, "valid": chk.valid, "perfect": chk.perfect and chk.size == n // 2,
        "seconds": res.seconds, "hyperactions": len(tr) - 1,
    }
    sb = stats.step_bounds(tr)
    row.update(step_checked=sb.checked, step_e_viol=sb.e_violations, step_n_viol=sb.n_violations,
               step_ex_viol=sb.ex_violations)
    if name == "perfect-rate":
        row["passed"] = row["perfect"] and chk.valid
    elif name == "runtime-scaling":
        row["passed"] = chk.valid
    elif name == "drift":
        try:
            d = stats.drift_report(tr)
        except TraceTooShort as exc:
            row.update(passed=False, error=str(exc))
        else:
            row.update(passed=d.passed, windows=len(d.windows), max_abs_dev_e=d.max_abs_dev_e,
                       drift_violations=len(d.violations), horizon=d.horizon)
    elif name == "remA":
        r = stats.remA_check(tr, k)
        row.update(passed=r.passed, applicable=r.applicable, checked=r.checked, max_p3=r.max_p3,
                   remA_violations=len(r.violations), remA_violations_alt=r.violations_alt, bound=r.bound)
    elif name == "excess":
        x = stats.excess_monitor(tr, k, n)
        row.update(passed=x.passed, max_ex=x.max_ex, threshold=x.threshold, bad=x.bad_count,
                   bad_above3=x.bad_count_above3, bounded=x.bounded)
    elif name == "survival":
        s = stats.survival_report(tr, k, n)
        row.update(passed=s.passed, applicable=s.applicable, tau=s.tau, e_tau=s.e_tau, ratio=s.ratio,
                   edge_ok=s.edge_ok, time_ok=s.time_ok)
    else:
        raise ValueError(f"unknown experiment {name!r}")
    return row


def loglog_slope(ns, times) -> float:
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def _summarise(name: str, rows: list[dict]) -> tuple[dict, bool, dict]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["n"], r["k"]), []).append(r)
    out, ok, extra = {}, True, {}
    for (n, k), rs in sorted(groups.items()):
        passes = sum(bool(r["passed"]) for r in rs)
        s = {"n": n, "k": k, "trials": len(rs), "passes": passes,
             "median_seconds": float(np.median([r["seconds"] for r in rs])),
             "total_seconds": float(sum(r["seconds"] for r in rs)),
             "step_violations": sum(r["step_e_viol"] + r["step_n_viol"] + sum(r["step_ex_viol"].values()) for r in rs)}
        s.update(stats.aggregate(rs, ["size", "seconds"]))
        need = REQUIRED.get(name)
        if need is not None:
            s["required"] = math.ceil(need * len(rs) - 1e-9)
            s["passed"] = passes >= s["required"]
        else:
            s["passed"] = passes == len(rs)
        ok &= s["passed"]
        out[f"n={n},k={k}"] = s
    if name == "runtime-scaling":
        for k in sorted({k for _, k in groups}):
            pts = sorted((n, float(np.median([r["seconds"] for r in rs]))) for (n, kk), rs in groups.items() if kk == k)
            if len(pts) < 2:
                continue
            slope = loglog_slope(*zip(*pts))
            good = SLOPE_RANGE[0] <= slope <= SLOPE_RANGE[1]
            extra[f"slope_k={k}"] = {"slope": slope, "range": list(SLOPE_RANGE), "passed": good}
            ok &= good
    return out, ok, extra


def default_out_dir(name: str) -> Path:
    return Path(os.environ.get(OUT_ENV, "rcmatch-out")) / name


def run_experiment(
    name: str,
    *,
    ns,
    ks,
    trials: int,
    seed: int = 0,
    threads: int = 1,
    out_dir: str | Path | None = None,
    backend: str | None = None,
    write: bool = True,
) -> ExperimentResult:
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    for n in ns:
        if n % 2:
            raise ValueError(f"n must be even, got {n}")
    jobs = [(name, n, k, seed, t, backend) for n in ns for k in ks for t in range(trials)]
    if threads > 1:
        with get_context("fork").Pool(threads) as pool:
            rows = pool.map(_trial, jobs, chunksize=1)
    else:
        rows = [_trial(j) for j in jobs]
    groups, ok, extra = _summarise(name, rows)
    res = ExperimentResult(name, seed, rows, groups, ok, extra=extra)
    if write:
        res.out_dir = write_result(res, out_dir)
    return res


def write_result(res: ExperimentResult, out_dir: str | Path | None = None) -> Path:
    d = Path(out_dir) if out_dir is not None else default_out_dir(res.name)
    d.mkdir(parents=True, exist_ok=True)
    (d / "trials.json").write_text(json.dumps(res.rows, indent=1, default=stats._jsonable) + "\n")
    stats.write_csv(res.rows, d / "trials.csv")
    (d / "aggregate.json").write_text(stats.to_json(res.to_dict()) + "\n")
    flat = [{k: v for k, v in g.items() if not isinstance(v, dict)} for g in res.groups.values()]
    stats.write_csv(flat, d / "aggregate.csv")
    return d


def summary_lines(res: ExperimentResult) -> list[str]:
    lines = []
    for key, s in res.groups.items():
        need = s.get("required", s["trials"])
        lines.append(f"{res.name} {key}: {s['passes']}/{s['trials']} passed (need {need}), "
                     f"median {s['median_seconds']:.3f}s -> {'PASS' if s['passed'] else 'FAIL'}")
    for key, v in res.extra.items():
        lines.append(f"{res.name} {key}: {v['slope']:.3f} in {v['range']} -> {'PASS' if v['passed'] else 'FAIL'}")
    return lines
