import json
import re
from pathlib import Path

import pytest

from condsat import cli
from condsat import tableau as tb
from condsat.category import InjGraphs
from condsat.condition import true

from helpers import G

PROBLEMS = Path(__file__).resolve().parent.parent / "demos" / "problems"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_unsat(capsys):
    code, out, _ = run(capsys, "check", PROBLEMS / "unsat.cond")
    assert code == cli.EXIT_DECIDED
    data = json.loads(out)
    assert data["schema"] == 1
    assert data["verdict"] == "unsat" and data["closed_branches"] == 1


def test_check_sat_model_is_two_cycle(capsys):
    code, out, _ = run(capsys, "check", PROBLEMS / "finite_model.cond")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "sat"
    assert data["model"]["object"] == "{1, 2 ; 1->2, 2->1}"
    code, out, _ = run(capsys, "model", PROBLEMS / "finite_model.cond")
    assert code == 0 and "model: {1, 2 ; 1->2, 2->1}" in out


def test_witness(capsys):
    code, out, _ = run(capsys, "check", PROBLEMS / "ray.cond", "--witness")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "witness"
    code, out, _ = run(capsys, "witness", PROBLEMS / "ray.cond")
    w = json.loads(out)["witness"]
    assert len(w["period"]) == 3 and w["end"] > w["start"]


def test_unknown_exit_code(capsys, monkeypatch):
    code, out, _ = run(capsys, "check", PROBLEMS / "ray.cond", "--max-steps", 5)
    assert code == cli.EXIT_UNKNOWN
    assert json.loads(out)["verdict"] == "unknown"
    monkeypatch.setenv("CONDSAT_MAX_STEPS", "5")
    code, out, _ = run(capsys, "check", PROBLEMS / "ray.cond")
    assert code == cli.EXIT_UNKNOWN and json.loads(out)["steps"] == 5
    monkeypatch.setenv("CONDSAT_MAX_STEPS", "lots")
    code, _, err = run(capsys, "check", PROBLEMS / "ray.cond")
    assert code == cli.EXIT_INPUT and "CONDSAT_MAX_STEPS" in err


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "check", tmp_path / "missing.cond")
    assert code == cli.EXIT_INPUT
    bad = tmp_path / "bad.cond"
    bad.write_text("category inj-graphs\nroot {}\nforall [{} => {1}] true\n")
    code, _, err = run(capsys, "check", bad)
    assert code == cli.EXIT_INPUT and "line 3, column 20" in err
    code, _, err = run(capsys, "check", PROBLEMS / "loop.cond", "--mode", "restricted")
    assert code == cli.EXIT_INPUT


def test_general_mode_defaults(capsys):
    for name in ("loop", "terms"):
        code, out, _ = run(capsys, "check", PROBLEMS / f"{name}.cond")
        assert code == 0 and json.loads(out)["verdict"] == "unsat"


def test_trace_dot(capsys, tmp_path):
    code, out, _ = run(capsys, "trace", PROBLEMS / "unsat.cond")
    assert code == 0 and out.startswith("digraph tableau {")
    assert len(re.findall(r"^  n\d+ \[label", out, re.M)) == 4
    assert len(re.findall(r"^  n\d+ -> n\d+", out, re.M)) == 3
    assert "✕" in out
    dot = tmp_path / "sat.dot"
    code, out, _ = run(capsys, "model", PROBLEMS / "finite_model.cond", "--trace", dot)
    assert "✓ model" in dot.read_text()
    assert "model:" in out


def test_single_root_dot():
    T = tb.Tableau(true(G()), InjGraphs())
    dot = cli.render_dot(T)
    assert len(re.findall(r"^  n\d+ \[label", dot, re.M)) == 1
    assert "->" not in dot.split("\n", 2)[2]


def test_long_labels_are_truncated(capsys):
    code, out, _ = run(capsys, "trace", PROBLEMS / "ray.cond", "--witness")
    for lab in re.findall(r'label="\d+: ([^"\\]*)', out):
        assert len(lab) <= cli.LABEL_LIMIT


def test_stdin(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO((PROBLEMS / "unsat.cond").read_text()))
    code, out, _ = run(capsys, "check", "-")
    assert code == 0 and json.loads(out)["verdict"] == "unsat"


@pytest.mark.parametrize("cmd", ["check", "model", "trace", "witness"])
def test_all_commands_accept_every_problem(cmd, capsys):
    for path in sorted(PROBLEMS.glob("*.cond")):
        code, _, _ = run(capsys, cmd, path, "--max-steps", 30)
        assert code in (cli.EXIT_DECIDED, cli.EXIT_UNKNOWN)
