from __future__ import annotations

import json

import pytest
from helpers import k4

from planartww.cli import main
from planartww.formats import (
    FormatError,
    GraphFile,
    read_graph,
    read_sequence,
    sequence_from_json,
    sequence_to_json,
    write_graph,
    write_sequence,
)
from planartww.generators import gen_grid, gen_stacked_triangulation
from planartww.trigraph import ContractionSequence, ContractionStep


@pytest.fixture
def k4_file(tmp_path):
    p = tmp_path / "k4.json"
    write_graph(p, GraphFile.from_rotation(k4()))
    return p


def run_cli(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


def test_graph_round_trip(tmp_path):
    g = GraphFile.from_rotation(gen_stacked_triangulation(12, 3))
    p = tmp_path / "g.json"
    write_graph(p, g)
    back = read_graph(p)
    assert back == g
    assert back.rotation_system().rotation == gen_stacked_triangulation(12, 3).rotation


def test_sequence_round_trip(tmp_path):
    seq = ContractionSequence(3, [ContractionStep(0, 1, 3), ContractionStep(3, 2, 4)])
    assert sequence_from_json(sequence_to_json(seq)).steps == seq.steps
    p = tmp_path / "s.json"
    write_sequence(p, seq)
    assert read_sequence(p).steps == seq.steps
    with pytest.raises(FormatError):
        sequence_from_json({"n": 3, "steps": [{"a": 0}]})


def test_rotation_must_match_edges():
    g = GraphFile.from_rotation(k4())
    g.edges = g.edges[:-1]
    with pytest.raises(FormatError):
        g.rotation_system()


def test_synth_then_verify(capsys, tmp_path, k4_file):
    seq = tmp_path / "seq.json"
    trace = tmp_path / "trace.jsonl"
    rc, _, err = run_cli(capsys, "synth", k4_file, "-o", seq, "--trace", trace, "--check-splendid-every-step")
    assert rc == 0 and "3 contractions" in err
    assert len(read_sequence(seq)) == 3
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    assert len(records) == 5
    assert sum(len(r["contractions"]) for r in records) == 3
    rc, out, _ = run_cli(capsys, "verify", k4_file, seq)
    report = json.loads(out)
    assert rc == 0 and report["width"] == 0 and report["pass"]
    rc, out, _ = run_cli(capsys, "verify", k4_file, seq, "--show-trace")
    assert json.loads(out)["trace"] == [0, 0, 0, 0]


def test_synth_emit_gplus(capsys, tmp_path):
    g = tmp_path / "grid.json"
    write_graph(g, GraphFile.from_rotation(gen_grid(3, 3)))
    rc, out, _ = run_cli(capsys, "synth", g, "--emit-gplus", tmp_path / "gp")
    assert rc == 0 and len(json.loads(out)["steps"]) == 8
    gp = read_graph(tmp_path / "gp" / "gplus.json")
    assert gp.n > 9
    rc, out, _ = run_cli(capsys, "verify", tmp_path / "gp" / "gplus.json", tmp_path / "gp" / "gplus_sequence.json")
    assert rc == 0 and json.loads(out)["width"] <= 11


def test_verify_exit_codes(capsys, tmp_path, k4_file):
    short = tmp_path / "short.json"
    write_sequence(short, ContractionSequence(4, [ContractionStep(0, 1, 4)]))
    rc, _, err = run_cli(capsys, "verify", k4_file, short)
    assert rc == 2 and "error" in err
    rc, out, _ = run_cli(capsys, "verify", k4_file, short, "--prefix")
    assert rc == 0 and json.loads(out)["full"] is False
    c5 = tmp_path / "c5.json"
    rc, _, _ = run_cli(capsys, "gen", "cycle", 5, "-o", c5)
    w = tmp_path / "w.json"
    rc, out, _ = run_cli(capsys, "exact", c5, "-o", w)
    assert rc == 0 and out.strip() == "twin-width 2"
    assert run_cli(capsys, "verify", c5, w, "--max-width", 1)[0] == 1
    assert run_cli(capsys, "verify", c5, w, "--max-width", 2)[0] == 0


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2], [0, 2]], "rotation": {"0": [1, 2], "1": [0, 2], "2": [1]}}))
    assert run_cli(capsys, "synth", bad)[0] == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run_cli(capsys, "verify", garbage, garbage)[0] == 2
    assert run_cli(capsys, "synth", tmp_path / "missing.json")[0] == 2
    assert run_cli(capsys, "gen", "grid", 3)[0] == 2
    no_rot = tmp_path / "norot.json"
    no_rot.write_text(json.dumps({"n": 2, "edges": [[0, 1]]}))
    assert run_cli(capsys, "synth", no_rot)[0] == 2
    big = tmp_path / "big.json"
    write_graph(big, GraphFile.from_rotation(gen_grid(4, 4)))
    assert run_cli(capsys, "exact", big)[0] == 2


def test_gen_grid_is_c4(capsys):
    rc, out, _ = run_cli(capsys, "gen", "grid", 2, 2)
    g = GraphFile.from_json(json.loads(out))
    assert rc == 0 and g.n == 4 and len(g.edges) == 4
    assert all(len(ns) == 2 for ns in g.rotation.values())


def test_gen_is_deterministic(capsys):
    a = run_cli(capsys, "gen", "random-planar", 30, "--seed", 5, "--p", 0.4)[1]
    b = run_cli(capsys, "gen", "random-planar", 30, "--seed", 5, "--p", 0.4)[1]
    c = run_cli(capsys, "gen", "random-planar", 30, "--seed", 6, "--p", 0.4)[1]
    assert a == b != c


def test_exact_k5(capsys, tmp_path):
    p = tmp_path / "k5.json"
    p.write_text(json.dumps({"n": 5, "edges": [[u, v] for u in range(5) for v in range(u + 1, 5)]}))
    rc, out, _ = run_cli(capsys, "exact", p)
    lines = out.splitlines()
    assert rc == 0 and lines[0] == "twin-width 0"
    assert len(json.loads(lines[1])["steps"]) == 4


def test_export_dot_red_edges(capsys, tmp_path):
    p = tmp_path / "p3.json"
    p.write_text(json.dumps({"n": 3, "edges": [[0, 1], [1, 2]]}))
    s = tmp_path / "s.json"
    write_sequence(s, ContractionSequence(3, [ContractionStep(0, 1, 3), ContractionStep(3, 2, 4)]))
    rc, out, _ = run_cli(capsys, "export", p, "--sequence", s, "--upto", 1)
    assert rc == 0 and out.startswith("graph G {")
    assert out.count("color=red") == 1 and "3 -- 2 [color=red]" in out.replace("2 -- 3", "3 -- 2")
    rc, out, _ = run_cli(capsys, "export", p)
    assert out.count("color=red") == 0 and out.count(" -- ") == 2
    assert run_cli(capsys, "export", p, "--sequence", s, "--upto", 9)[0] == 2


def test_export_engine_state(capsys, k4_file):
    rc, out, _ = run_cli(capsys, "export", k4_file, "--engine-steps", 1, "--json")
    d = json.loads(out)
    assert rc == 0 and d["splendid"] and d["h_vertices"] == 4
    rc, out, _ = run_cli(capsys, "export", k4_file, "--engine-steps", 0)
    assert rc == 0 and "penwidth=3" in out and "rank=same" in out


def test_corpus_list_and_small_run(capsys, tmp_path):
    rc, out, _ = run_cli(capsys, "corpus", "--list")
    assert rc == 0 and len(out.splitlines()) >= 200
    rc, out, _ = run_cli(capsys, "corpus", "--filter", "wheel", "--max-n", 12, "--check", "--out", tmp_path)
    lines = out.splitlines()
    assert rc == 0 and lines[-1].endswith("instances within width 11")
    assert all(line.startswith("ok") for line in lines[:-1])
    assert any(tmp_path.glob("*.seq.json"))
