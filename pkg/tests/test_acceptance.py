"""Acceptance criteria 1-10, each printing one PASS/FAIL line.

These are desk-scale Monte-Carlo runs (several minutes in total). Thresholds
are taken as stated; nothing here is tuned to make a criterion pass.
"""
import time

import numpy as np
import pytest

from rcmatch import stats
from rcmatch.cli import main as cli_main
from rcmatch.construct import validate_matching
from rcmatch.experiments import run_experiment
from rcmatch.genmodel import random_regular
from rcmatch.multigraph import MultiGraph
from rcmatch.oracle import brute_force_matching, max_matching_exact
from rcmatch.pipeline import reduce_construct
from rcmatch.reduce import Monitors
from rcmatch.rng import SplitMix64, stream

from conftest import ACCEPTANCE

SEED = 1
# step-bound counts gathered from criteria 1-5 for criterion 6
STEP_ROWS: list = []


def report(num: int, ok: bool, msg: str) -> None:
    ACCEPTANCE[num] = (bool(ok), msg)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {msg}")


def step_row(tag, sb):
    STEP_ROWS.append({"tag": tag, "checked": sb.checked, "e": sb.e_violations, "n": sb.n_violations,
                      "ex": dict(sb.ex_violations)})


# -- 1 ----------------------------------------------------------------------------


def test_c1_perfect_matching_rate(tmp_path):
    ok, parts = True, []
    for k in (3, 4, 5, 6, 8):
        t0 = time.perf_counter()
        res = run_experiment("perfect-rate", ns=[10_000], ks=[k], trials=100, seed=SEED, out_dir=tmp_path / str(k))
        wall = time.perf_counter() - t0
        perfect = sum(r["perfect"] for r in res.rows)
        valid = all(r["valid"] for r in res.rows)
        good = perfect >= 99 and valid and wall < 120
        ok &= good
        parts.append(f"k={k}: {perfect}/100 perfect, {wall:.0f}s")
        for r in res.rows:
            STEP_ROWS.append({"tag": f"c1 k={k}", "checked": r["step_checked"], "e": r["step_e_viol"],
                              "n": r["step_n_viol"], "ex": r["step_ex_viol"]})
    report(1, ok, "; ".join(parts))
    assert ok, parts


# -- 2 ----------------------------------------------------------------------------


def test_c2_linear_time_scaling(tmp_path):
    t0 = time.perf_counter()
    ns = [10_000, 20_000, 40_000, 80_000]
    res = run_experiment("runtime-scaling", ns=ns, ks=[4], trials=20, seed=SEED, out_dir=tmp_path)
    wall = time.perf_counter() - t0
    med = [float(np.median([r["seconds"] for r in res.rows if r["n"] == n])) for n in ns]
    slope = res.extra["slope_k=4"]["slope"]
    ok = 0.8 <= slope <= 1.25 and wall < 300
    for r in res.rows:
        STEP_ROWS.append({"tag": "c2", "checked": r["step_checked"], "e": r["step_e_viol"],
                          "n": r["step_n_viol"], "ex": r["step_ex_viol"]})
    report(2, ok, f"slope {slope:.3f} (medians {', '.join(f'{m * 1e3:.1f}ms' for m in med)}), {wall:.0f}s")
    assert ok


# -- 3, 4, 7: shared k = 8, n = 10^5 traces --------------------------------------------


@pytest.fixture(scope="module")
def big8():
    out = []
    for t in range(20):
        g = random_regular(100_000, 8, stream(SEED, t, 0))
        res = reduce_construct(g, stream(SEED, t, 1), monitors=Monitors(k=8))
        tr = res.trace
        out.append({
            "remA": stats.remA_check(tr, 8),
            "drift": stats.drift_report(tr, W=1000),
            "survival": stats.survival_report(tr, 8, 100_000),
            "steps": stats.step_bounds(tr),
        })
    return out


def test_c3_p3_bound(big8):
    viol = sum(len(x["remA"].violations) for x in big8)
    checked = sum(x["remA"].checked for x in big8)
    worst = max(x["remA"].max_p3 for x in big8)
    ok = viol == 0 and checked > 0
    report(3, ok, f"{viol} violations over {checked} boundaries, max p_3 = {worst:.4f} "
                  f"(limit {min(stats.rema_bound(8), 0.081) + 0.005:.4f})")
    assert ok


def test_c4_edge_drift(big8):
    for x in big8:
        step_row("c3/4/7", x["steps"])
    windows = sum(len(x["drift"].windows) for x in big8)
    bad = sum(len(x["drift"].violations) for x in big8)
    worst = max(x["drift"].max_abs_dev_e for x in big8)
    ok = bad == 0 and windows > 0
    report(4, ok, f"{bad}/{windows} windows off by more than 0.05, worst |dev| = {worst:.4f}")
    assert ok


def test_c7_survival_and_stopping_time(big8):
    s = [x["survival"] for x in big8]
    both = sum(bool(v.edge_ok and v.time_ok) for v in s)
    ratio = min(v.ratio for v in s)
    tau = max(v.tau for v in s)
    ok = both >= 19
    report(7, ok, f"{both}/20 trials meet both bounds; min e_tau/e_0 = {ratio:.3f}, "
                  f"max tau_7 = {tau} (bound {1.5 * 1e5 + 1e5 ** 0.6:.0f})")
    assert ok


# -- 5 ----------------------------------------------------------------------------


def test_c5_excess_and_goodness(tmp_path):
    ok, parts = True, []
    for k in range(3, 9):
        res = run_experiment("excess", ns=[10_000], ks=[k], trials=100, seed=SEED, out_dir=tmp_path / str(k))
        passes = sum(bool(r["passed"]) for r in res.rows)
        max_ex = max(r["max_ex"] for r in res.rows)
        bad = sum(r["bad"] for r in res.rows)
        ok &= passes >= 99
        parts.append(f"k={k}: {passes}/100 (max ex {max_ex}, bad {bad})")
        for r in res.rows:
            STEP_ROWS.append({"tag": f"c5 k={k}", "checked": r["step_checked"], "e": r["step_e_viol"],
                              "n": r["step_n_viol"], "ex": r["step_ex_viol"]})
    report(5, ok, "; ".join(parts))
    assert ok


# -- 6 ----------------------------------------------------------------------------


def test_c6_per_step_hard_bounds():
    # runs after 1-5 in file order and reuses their traces' counts
    if not STEP_ROWS:
        pytest.skip("criteria 1-5 did not run")
    checked = sum(r["checked"] for r in STEP_ROWS)
    e = sum(r["e"] for r in STEP_ROWS)
    n = sum(r["n"] for r in STEP_ROWS)
    ex: dict = {}
    for r in STEP_ROWS:
        for ell, c in r["ex"].items():
            ex[int(ell)] = ex.get(int(ell), 0) + c
    ok = e == 0 and n == 0 and not any(ex.values())
    exs = ", ".join(f"ex_{ell}: {c}" for ell, c in sorted(ex.items()))
    report(6, ok, f"{checked} good hyperactions with max degree > 3; violations e: {e}, n_r: {n}, {exs}")
    assert ok


# -- 8 ----------------------------------------------------------------------------


def random_multigraph(rng, max_n=10, max_m=20):
    n = 1 + rng.randbelow(max_n)
    edges = []
    if n >= 2:
        for _ in range(rng.randbelow(max_m + 1)):
            a = rng.randbelow(n)
            b = rng.randbelow(n - 1)
            edges.append((a, b + (b >= a)))
    return MultiGraph.from_edges(n, edges)


def test_c8_oracle_equivalence():
    same = valid = 0
    for t in range(500):
        g = random_regular(100, 3, stream(SEED, t, 0))
        m = reduce_construct(g, stream(SEED, t, 1)).matching
        valid += validate_matching(m, g).valid
        same += len(m) == len(max_matching_exact(g))
    rng = SplitMix64(SEED)
    brute = 0
    for _ in range(1000):
        g = random_multigraph(rng)
        brute += len(max_matching_exact(g)) == brute_force_matching(g)
    ok = same >= 495 and valid == 500 and brute == 1000
    report(8, ok, f"RC size = exact in {same}/500 (need 495), valid {valid}/500, blossom = brute force {brute}/1000")
    assert ok


# -- 9 ----------------------------------------------------------------------------

# Degree histogram of an 8-regular run (n = 2*10^4) taken at a boundary where
# the max degree is still 8 and every degree 3..8 is present.
FROZEN = {3: 5, 4: 81, 5: 703, 6: 4007, 7: 13516, 8: 1686}


def test_c9_single_step_drift_oracle():
    t0 = time.perf_counter()
    r = stats.hyperaction_oracle(FROZEN, graphs=100, sims_per_graph=10_000, seed=SEED)
    wall = time.perf_counter() - t0
    ok = r.passed and wall < 180
    zs = ", ".join(f"z_{rr} = {z:+.2f}" for rr, (*_, z) in r.dn.items())
    report(9, ok, f"10^6 hyperactions: {zs}; T3 freq {r.t3[0]:.2e} vs p_3 {r.t3[2]:.2e} (z = {r.t3[3]:+.2f}); {wall:.0f}s")
    assert ok


# -- 10 ---------------------------------------------------------------------------


def test_c10_determinism(tmp_path):
    g = tmp_path / "g.txt"
    assert cli_main(["generate", "--regular", "2000", "5", "--seed", "7", "--out", str(g)]) == 0
    runs = []
    for i in range(3):
        m, log = tmp_path / f"m{i}.txt", tmp_path / f"log{i}.jsonl"
        cli_main(["match", str(g), "--seed", "11", "--out", str(m), "--log", str(log)])
        runs.append((log.read_bytes(), m.read_bytes()))
    ok = runs[0] == runs[1] == runs[2] and len(runs[0][0]) > 0
    report(10, ok, f"3 runs, log {len(runs[0][0])} bytes and matching {len(runs[0][1])} bytes identical: {ok}")
    assert ok
