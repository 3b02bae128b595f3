import pytest

from rcmatch.experiments import EXPERIMENTS, _trial, loglog_slope, run_experiment, summary_lines


def strip(rows):
    return [{k: v for k, v in r.items() if k != "seconds"} for r in rows]


def test_slope_of_power_law():
    ns = [1000, 2000, 4000, 8000]
    assert loglog_slope(ns, [n**1.0 * 3e-6 for n in ns]) == pytest.approx(1.0)
    assert loglog_slope(ns, [n**2 for n in ns]) == pytest.approx(2.0)


def test_trials_reproducible_and_order_independent():
    a = run_experiment("excess", ns=[400], ks=[4], trials=4, seed=3, write=False)
    b = run_experiment("excess", ns=[400], ks=[4], trials=4, seed=3, threads=2, write=False)
    assert strip(a.rows) == strip(b.rows)
    # trial 2 on its own gives the same row as inside the batch
    alone = _trial(("excess", 400, 4, 3, 2, None))
    assert strip([alone]) == strip([a.rows[2]])
    c = run_experiment("excess", ns=[400], ks=[4], trials=4, seed=4, write=False)
    assert strip(a.rows) != strip(c.rows)


@pytest.mark.parametrize("name", EXPERIMENTS)
def test_every_experiment_runs(name, tmp_path):
    ns = [2000, 4000] if name == "runtime-scaling" else [2000]
    k = 8 if name in ("remA", "drift", "survival") else 4
    res = run_experiment(name, ns=ns, ks=[k], trials=2, seed=1, out_dir=tmp_path)
    assert len(res.rows) == 2 * len(ns)
    assert all(r["valid"] for r in res.rows)
    assert (tmp_path / "aggregate.json").exists()
    lines = summary_lines(res)
    assert lines and all(("PASS" in l) or ("FAIL" in l) for l in lines)
    if name == "runtime-scaling":
        assert "slope_k=4" in res.extra


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_experiment("nope", ns=[10], ks=[3], trials=1, write=False)
    with pytest.raises(ValueError):
        run_experiment("excess", ns=[11], ks=[3], trials=1, write=False)
