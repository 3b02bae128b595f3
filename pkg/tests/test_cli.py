import json

from rcmatch.actions import ActionLog
from rcmatch.cli import main
from rcmatch.construct import read_matching
from rcmatch.multigraph import read_edgelist


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_regular(tmp_path, capsys):
    p = tmp_path / "g.txt"
    code, _, _ = run(capsys, "generate", "--regular", "8", "3", "--seed", "1", "--out", str(p))
    assert code == 0
    g = read_edgelist(p)
    assert g.num_edges == 12 and g.num_vertices == 8


def test_generate_is_byte_identical_per_seed(tmp_path, capsys):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    for p, s in ((a, "5"), (b, "5"), (c, "6")):
        assert run(capsys, "generate", "--regular", "50", "4", "--seed", s, "--out", str(p))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes() != c.read_bytes()


def test_generate_odd_degree_sum(capsys):
    code, _, err = run(capsys, "generate", "--regular", "5", "3")
    assert code != 0 and "OddDegreeSum" in err


def test_generate_from_degree_file(tmp_path, capsys):
    d = tmp_path / "deg.txt"
    d.write_text("3\n3\n3\n3\n4\n4\n")
    code, out, _ = run(capsys, "generate", "--degrees", str(d), "--seed", "2")
    assert code == 0
    assert out.splitlines()[0] == "# vertices=6 edges=10"


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "generate")[0] == 2
    assert run(capsys, "generate", "--regular", "4", "2")[0] == 2
    assert run(capsys, "match", "/nonexistent/graph.txt")[0] == 2
    assert run(capsys, "experiment", "nosuch")[0] == 2
    assert run(capsys, "experiment", "drift", "--n", "11")[0] == 2


def test_match_single_edge(tmp_path, capsys):
    p = tmp_path / "e.txt"
    p.write_text("0 1\n")
    code, out, _ = run(capsys, "match", str(p))
    assert code == 0
    assert "size=1 perfect=true" in out


def test_match_outputs_and_verify(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "generate", "--regular", "100", "3", "--seed", "4", "--out", str(g))
    m, log = tmp_path / "m.txt", tmp_path / "log.jsonl"
    code, out, _ = run(capsys, "match", str(g), "--seed", "1", "--verify", "--out", str(m), "--log", str(log))
    assert code in (0, 1)
    assert "verify exact=50" in out and "time=" in out and "hyperactions" in out
    rows = read_matching(m)
    size = int(out.split("size=")[1].split()[0])
    assert len(rows) == size
    assert code == (0 if size == 50 else 1)
    ActionLog.from_jsonl(log)
    first = json.loads(log.read_text().splitlines()[0])
    assert first["kind"] == "max_edge_removal"


def test_match_fallback_reaches_maximum(tmp_path, capsys):
    # a path of 5 vertices plus a triangle: near-perfect means 4 edges on 8 vertices
    g = tmp_path / "g.txt"
    g.write_text("0 1\n1 2\n2 3\n3 4\n5 6\n6 7\n7 5\n")
    code, out, _ = run(capsys, "match", str(g), "--fallback")
    assert code == 0 and "size=3" in out


def test_verify_refuses_large_graphs(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "generate", "--regular", "300", "3", "--out", str(g))
    assert run(capsys, "match", str(g), "--verify")[0] == 2


def test_match_is_deterministic(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "generate", "--regular", "400", "5", "--seed", "9", "--out", str(g))
    outs = []
    for i in range(3):
        m, log = tmp_path / f"m{i}", tmp_path / f"l{i}"
        run(capsys, "match", str(g), "--seed", "3", "--out", str(m), "--log", str(log))
        outs.append((m.read_bytes(), log.read_bytes()))
    assert outs[0] == outs[1] == outs[2]


def test_experiment_writes_bundle(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RCMATCH_OUT", str(tmp_path))
    code, out, _ = run(capsys, "experiment", "perfect-rate", "--n", "200", "--k", "4", "--trials", "3", "--seed", "2")
    assert code in (0, 1)
    d = tmp_path / "perfect-rate"
    for name in ("trials.json", "trials.csv", "aggregate.json", "aggregate.csv"):
        assert (d / name).exists()
    agg = json.loads((d / "aggregate.json").read_text())
    assert agg["passed"] == (code == 0)
    assert len(json.loads((d / "trials.json").read_text())) == 3
    assert "perfect-rate n=200,k=4" in out
