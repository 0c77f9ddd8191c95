import json
import subprocess
import sys

import pytest

from indexcoding.cli import main, run
from indexcoding.graph import Graph, save_edge_list


def write_graph(tmp_path, g, name="g.txt"):
    p = tmp_path / name
    p.write_text(save_edge_list(g))
    return str(p)


def outputs(argv):
    status, report = run(argv)
    assert status == 0
    return report["outputs"]


def test_theta_and_constants():
    out = outputs(["theta", "--k", "3"])
    assert abs(out["theta"] - 3.121320343559643) < 1e-9
    out = outputs(["constants", "--k", "3"])
    assert abs(out["c"] - 0.03678) < 1e-3 and abs(out["coloring_exponent"] - 0.2574) < 1e-12


def test_gen_gk_writes_files(tmp_path):
    edges, labels = tmp_path / "e.txt", tmp_path / "l.txt"
    out = outputs(["gen-gk", "--k", "3", "--edges", str(edges), "--labels", str(labels)])
    assert out["n"] == 28 and out["degree"] == 6 and out["class_sizes"] == [1, 6, 12, 6, 3]
    assert edges.read_text().startswith("28 84")
    assert len(labels.read_text().splitlines()) == 28


def test_spectrum_of_c4(tmp_path):
    out = outputs(["spectrum", "--graph", write_graph(tmp_path, Graph.cycle(4))])
    assert [(round(s["value"], 9), s["multiplicity"]) for s in out["spectrum"]] == [(-2, 1), (0, 2), (2, 1)]


def test_minrank_and_vector_color(tmp_path):
    path = write_graph(tmp_path, Graph.cycle(5))
    out = outputs(["minrank", "--graph", path])
    assert out["status"] == "exact" and out["value"] == 3
    out = outputs(["vector-color", "--graph", path, "--strict"])
    assert abs(out["kappa"] - 5 ** 0.5) < 1e-4


def test_index_code_then_verify(tmp_path):
    gpath = write_graph(tmp_path, Graph.cycle(5))
    cpath = str(tmp_path / "code.txt")
    out = outputs(["index-code", "--graph", gpath, "--out", cpath])
    assert out["length"] == 3
    out = outputs(["verify", "--graph", gpath, "--code", cpath])
    assert out["ok"] and out["words_checked"] == 32
    out = outputs(["verify", "--graph", gpath, "--code", cpath, "--sampled", "500"])
    assert out["ok"] and out["mode"] == "sampled"


def test_index_code_from_coloring_pipeline(tmp_path):
    gpath = str(tmp_path / "side.txt")
    outputs(["gen-instance", "--n", "14", "--k", "3", "--p", "0.8", "--side-info", "--out", gpath, "--seed", "2"])
    cpath = str(tmp_path / "code.txt")
    out = outputs(["index-code", "--graph", gpath, "--method", "coloring", "--k", "3", "--out", cpath])
    assert out["length"] <= 14
    assert outputs(["verify", "--graph", gpath, "--code", cpath])["ok"]


def test_failed_verification_exits_one(tmp_path):
    gpath = write_graph(tmp_path, Graph.path(3))
    cpath = tmp_path / "code.txt"
    cpath.write_text("3 1\n111\n0 : 1 | 1:1,2:1\n1 : 1 | 0:1,2:1\n2 : 1 | 0:1,1:1\n")
    status, report = run(["verify", "--graph", gpath, "--code", str(cpath)])
    assert status == 1 and not report["outputs"]["ok"]


def test_parse_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 7\n")
    assert main(["minrank", "--graph", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["minrank", "--graph", str(tmp_path / "missing.txt")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["minrank"])
    assert exc.value.code == 2


def test_contract_violation_exits_one(tmp_path):
    path = write_graph(tmp_path, Graph.complete(4))
    assert main(["color", "--graph", path, "--k", "3"]) == 1
    assert main(["spectrum"]) == 1


def test_global_flags_before_or_after_the_subcommand():
    a = run(["--seed", "7", "theta", "--k", "3"])[1]["parameters"]
    b = run(["theta", "--k", "3", "--seed", "7"])[1]["parameters"]
    assert a == b and a["seed"] == 7


def test_reports_are_deterministic_apart_from_wall_clock(tmp_path):
    path = write_graph(tmp_path, Graph.cycle(7))
    argv = ["color", "--graph", path, "--k", "3"]
    a, b = run(argv)[1], run(argv)[1]
    a.pop("wall_clock"), b.pop("wall_clock")
    assert a == b


def test_module_entry_point_prints_json(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "indexcoding", "theta", "--k", "4"],
                          capture_output=True, text=True, check=True)
    report = json.loads(proc.stdout)
    assert report["command"] == "theta" and report["outputs"]["theta"] == pytest.approx(4.5)
    proc = subprocess.run([sys.executable, "-m", "indexcoding", "--format", "text", "theta", "--k", "4"],
                          capture_output=True, text=True, check=True)
    assert "kappa_closed_form: 4.5" in proc.stdout
