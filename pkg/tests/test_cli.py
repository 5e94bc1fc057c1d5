import json
import subprocess
import sys
from pathlib import Path

import pytest

from curv import cli
from curv.graphio import dumps
from curv.cellcomplex import WeightedGraph

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


@pytest.fixture(autouse=True)
def serial(monkeypatch):
    monkeypatch.setenv("CURV_JOBS", "1")


def test_forman_worked(capsys):
    code, out, _ = run_json(capsys, "forman", DATA / "worked_example_complex.json", "--exact")
    assert code == 0 and out["schema"] == 1 and out["exact"] is True
    vals = {tuple(r["cell"]): r["F"] for r in out["cells"]}
    assert vals[(1, 2)] == "5/3" and vals[(1, 3)] == "2/3" and vals[(2, 3)] == "4/3"


def test_forman_bad_dim(capsys):
    code, _, err = run(capsys, "forman", DATA / "k2.json", "--dim", "3")
    assert code == 2 and "dimension" in err


def test_ollivier_single_edge(capsys):
    code, out, _ = run_json(capsys, "ollivier", DATA / "path3.json", "--edge", 1, 2, "--exact")
    assert code == 0 and out["edges"][0]["potential"]["kappa"] == "1"


def test_ollivier_all_methods(capsys):
    code, out, _ = run_json(capsys, "ollivier", DATA / "worked_example_graph.json", "--exact",
                            "--verify-all-methods", "--emit-witness")
    assert code == 0 and out["all_methods_agree"]
    assert all("witness" in rec["potential"] for rec in out["edges"])


def test_ollivier_unknown_edge(capsys):
    code, _, err = run(capsys, "ollivier", DATA / "k2.json", "--edge", 1, 5)
    assert code == 2


def test_maxmin(capsys):
    code, out, _ = run_json(capsys, "maxmin", DATA / "worked_example_graph.json", "--exact", "--emit-witness")
    assert code == 0 and out["R_star"] == "2/3" and out["primal_equals_dual"]
    assert all(out["dual_conditions"].values()) and len(out["J"]) == 9


def test_check_passes(capsys):
    code, out, _ = run_json(capsys, "check", DATA / "worked_example_complex.json", "--exact")
    assert code == 0 and out["passed"]
    assert set(out["checks"]) == {"semigroup", "diameter", "coincidence"}


def test_check_single(capsys):
    code, out, _ = run_json(capsys, "check", DATA / "triangle.json", "--diameter")
    assert code == 0 and set(out["checks"]) == {"diameter"}


def test_table_format(capsys):
    code, out, _ = run(capsys, "forman", DATA / "triangle.json", "--format", "table")
    assert code == 0 and not out.lstrip().startswith("{")


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "forman", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "forman", bad)[0] == 2
    code, _, err = run(capsys, "forman", DATA / "negative_weight.json")
    assert code == 3 and "invalid complex" in err


def test_degenerate_omega_exit(capsys, tmp_path):
    g = WeightedGraph.from_edges([(1, 2), (2, 3), (1, 3)])
    p = tmp_path / "deg.json"
    p.write_text(dumps(g, {(1, 2): 2, (1, 3): 1, (2, 3): 1}))
    code, _, err = run(capsys, "ollivier", p, "--omega")
    assert code == 3 and "degenerate" in err


def test_omega_flag_requires_lengths(capsys):
    assert run(capsys, "ollivier", DATA / "k2.json", "--omega")[0] == 2


def test_deterministic_output_across_jobs(capsys, monkeypatch):
    outs = []
    for jobs in ("1", "2"):
        monkeypatch.setenv("CURV_JOBS", jobs)
        outs.append(run(capsys, "ollivier", DATA / "worked_example_graph.json", "--exact")[1])
    assert outs[0] == outs[1]


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "curv.cli", "forman", str(DATA / "k2.json")],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["cells"][0]["F"] == 2.0
