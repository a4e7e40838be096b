import json
import subprocess
import sys

import pytest

from cadqe import compute_cad, evaluate_qf, parse, parse_poly
from cadqe.cli import run

from support import heywood_image


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decide_true(capsys):
    code, out, _ = cli(capsys, "decide", "(forall x) x*x >= 0")
    assert (code, out) == (0, "true\n")


def test_assert_true_exit_codes(capsys):
    assert cli(capsys, "decide", "--assert-true", "(forall x) x*x >= 0")[0] == 0
    code, out, _ = cli(capsys, "decide", "--assert-true", "(exists x) x^2 + 1 = 0")
    assert (code, out) == (1, "false\n")
    # without the flag a false answer is still a completed run
    assert cli(capsys, "decide", "(exists x) x^2 + 1 = 0")[0] == 0


def test_parse_error_exit_2(capsys):
    code, out, err = cli(capsys, "decide", "forall (")
    assert code == 2 and out == "" and "parse error" in err
    assert cli(capsys, "decide")[0] == 2
    assert cli(capsys, "frobnicate")[0] == 2
    assert cli(capsys, "decide", "x > 0")[0] == 2


def test_time_budget_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("CADQE_TIME_BUDGET", "0.000001")
    code, _, err = cli(capsys, "decide", "(forall x)(exists y) x^3*y - y^5 + x > 0")
    assert code == 3 and "budget" in err
    assert cli(capsys, "decide", "--time-budget", "abc", "(forall x) x > 0")[0] == 2


def test_witness_output(capsys):
    code, out, _ = cli(capsys, "decide", "--witness", "(forall x) x^2 - 2*x + 1 > 0")
    assert out == "false\ncounterexample: x = 1\n"
    code, out, _ = cli(capsys, "decide", "--witness", "--format", "json", "(exists x) x^2 = 2")
    rec = json.loads(out)
    assert rec["value"] is True and abs(float(rec["witness"]["x"]) ** 2 - 2) < 1e-4


def test_eliminate_prints_formula(capsys):
    code, out, _ = cli(capsys, "eliminate", "(exists x) y = x^2")
    f = parse(out)
    assert [evaluate_qf(f, {"y": v}) for v in (-1, 0, 1)] == [False, True, True]


def test_heywood_file(capsys, tmp_path):
    src = tmp_path / "heywood.txt"
    src.write_text("# implicitization of the one-factor model\n"
                   "(exists b1)(exists b2)(exists b3)\n  [r12 = b1*b2 and r13 = b1*b3 and r23 = b2*b3]\n",
                   encoding="utf-8")
    code, out, _ = cli(capsys, "eliminate", "-f", str(src))
    assert code == 0
    f = parse(out)
    for pt in ((1, 1, 1), (1, 1, -1), (0, 0, 5), (0, 2, -3), (-1, -1, 1)):
        assert evaluate_qf(f, dict(zip(("r12", "r13", "r23"), pt))) == heywood_image(*pt)


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("(forall x) x^2 + 1 > 0"))
    assert cli(capsys, "decide", "-f", "-")[1] == "true\n"


def test_both_inputs_rejected(capsys, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("x > 0")
    assert cli(capsys, "decide", "-f", str(p), "x > 0")[0] == 2
    assert cli(capsys, "decide", "-f", str(tmp_path / "missing"))[0] == 2


def test_cad_text_dump(capsys):
    code, out, _ = cli(capsys, "cad", "x2^2 - x1", "--var-order", "x1,x2")
    lines = out.splitlines()
    assert lines[0] == "variables: x1, x2"
    assert lines[-1] == "9 leaves"
    assert "[1] sector (-1.000000) signs -" in lines


def _skeleton_from_tree(tree):
    return [(c.level, list(c.path), c.kind, list(c.signs)) for c in tree.cells()]


def test_cad_json_round_trip(capsys):
    code, out, _ = cli(capsys, "cad", "--format", "json", "--exact", "--var-order", "x,y",
                       "x^2 + y^2 - 1; y - x")
    header, *recs = [json.loads(line) for line in out.splitlines()]
    assert header["variables"] == ["x", "y"]
    tree = compute_cad([parse_poly("x^2+y^2-1", ("x", "y")), parse_poly("y-x", ("x", "y"))])
    assert [(r["level"], r["path"], r["kind"], r["signs"]) for r in recs] == _skeleton_from_tree(tree)
    assert all("exact" in r and len(r["sample"]) == r["level"] for r in recs)


def test_cad_level_and_precision(capsys):
    code, out, _ = cli(capsys, "cad", "--level", "1", "--precision", "3", "x^2-2")
    assert "-1.414" in out and out.endswith("5 leaves\n")
    assert cli(capsys, "cad", "--precision", "0", "x")[0] == 2
    assert cli(capsys, "cad", "")[0] == 2


def test_model_commands(capsys):
    code, out, _ = cli(capsys, "model", "list")
    assert "heywood-corr" in out and "gaussian-complete-3" in out
    code, out, _ = cli(capsys, "model", "compare", "heywood-std", "heywood-corr")
    assert out == "true\n"
    code, out, _ = cli(capsys, "model", "identify", "heywood-corr", "--witness")
    assert out.startswith("false\ncounterexample: ")
    code, out, _ = cli(capsys, "model", "identify", "heywood-corr", "--quantity", "b1^2*b2^2*b3^2")
    assert out == "true\n"
    code, out, _ = cli(capsys, "model", "ci", "--premise", "1 _||_ 2", "--premise", "1 _||_ 3 | 2",
                       "--conclusion", "1 _||_ 3")
    assert out == "true\n"
    code, out, _ = cli(capsys, "model", "implicitize", "heywood-corr", "--emit")
    assert parse(out) == parse("(exists b1)(exists b2)(exists b3) [r12 = b1*b2 and r13 = b1*b3 and r23 = b2*b3]")
    code, out, _ = cli(capsys, "model", "region", "heywood-corr", "--quantity", "b1^2", "--var", "q")
    f = parse(out)
    assert [evaluate_qf(f, {"q": v}) for v in (-1, 0, 3)] == [False, True, True]


def test_model_errors(capsys, tmp_path):
    assert cli(capsys, "model", "compare", "heywood-corr")[0] == 2
    assert cli(capsys, "model", "implicitize", "nope")[0] == 2
    assert cli(capsys, "model", "ci", "--premise", "1 _||_ 2")[0] == 2
    bad = tmp_path / "bad.model"
    bad.write_text("params: t\nobservables: x\n")
    code, _, err = cli(capsys, "model", "implicitize", str(bad))
    assert code == 2 and "map" in err


def test_model_dsl_file(capsys, tmp_path):
    p = tmp_path / "ray.model"
    p.write_text("params: t\nconstraint: t > 0\nobservables: x, y\nmap: x = t; y = t\n")
    code, out, _ = cli(capsys, "model", "implicitize", str(p))
    f = parse(out)
    assert evaluate_qf(f, {"x": 1, "y": 1}) and not evaluate_qf(f, {"x": 0, "y": 0})


def test_stats_to_stderr(capsys):
    code, out, err = cli(capsys, "decide", "--stats", "(forall x) x^2 >= 0")
    assert out == "true\n"
    assert json.loads(err.split("stats: ", 1)[1])["cells_built"] >= 1


CORPUS = [
    ["decide", "--witness", "(exists x)(exists y) [x^2 + y^2 = 1 and x*y = 1/3]"],
    ["eliminate", "(exists x) a*x^2 + b*x + c = 0"],
    ["cad", "--format", "json", "x*y - 1; x^2 - y"],
    ["model", "implicitize", "heywood-corr"],
]


@pytest.mark.parametrize("argv", CORPUS)
def test_output_deterministic_across_processes(argv):
    runs = [subprocess.run([sys.executable, "-m", "cadqe", *argv], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]
