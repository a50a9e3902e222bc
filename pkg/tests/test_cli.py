import json
import subprocess
import sys

import pytest

from padiclf.cli import run


def call(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    (tmp_path / "inst.cfg").write_text("[instance]\nmodel = gm^2\nbeta = 1, -1\ngamma = 6, 11\np = 5\n")
    (tmp_path / "zero.json").write_text(json.dumps({"model": "gm^2", "beta": [1, -1], "gamma": [6, 6], "p": 5}))
    (tmp_path / "deep.json").write_text(json.dumps({"model": "gm^2", "beta": [1, -1], "gamma": [26, 51], "p": 5}))
    (tmp_path / "bad.json").write_text("{not json")
    (tmp_path / "badp.json").write_text(json.dumps({"model": "gm^2", "beta": [1, -1], "gamma": [6, 11]}))
    return tmp_path


def test_bound_example(capsys):
    code, out, _ = call(["bound", "--omega", "1", "--n", "1", "--b", "1.0986", "--h", "1.0986", "--p", "2", "--c0", "1"], capsys)
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["statement"] == 1 and rep["bound"]["lower"].startswith("-0.00104667")


def test_schwarz_example(capsys):
    code, out, _ = call(["schwarz", "--s", "1", "--t", "0", "--k", "2", "--l", "3", "--delta", "0", "--mu", "5",
                         "--normt", "0", "--p", "3"], capsys)
    assert code == 0 and json.loads(out)["report"]["exponent"] == "6/1"


def test_decimal_valuation_rejected(capsys):
    code, _, err = call(["schwarz", "--s", "0.5", "--t", "0", "--k", "2", "--l", "3", "--delta", "0", "--mu", "5",
                         "--normt", "0", "--p", "3"], capsys)
    assert code == 2 and "exact rational" in err


def test_exit_code_matrix(files, capsys):
    assert call(["verify-gm", str(files / "inst.cfg")], capsys)[0] == 0
    assert call(["verify-gm", str(files / "inst.cfg"), "--c0", "1/1000000"], capsys)[0] == 1
    assert call(["verify-gm", str(files / "bad.json")], capsys)[0] == 2
    assert call(["verify-gm", str(files / "badp.json")], capsys)[0] == 2
    assert call(["verify-gm", str(files / "missing.json")], capsys)[0] == 2
    assert call(["verify-gm", str(files / "deep.json"), "--precision", "2", "--max-precision", "2"], capsys)[0] == 3
    assert call(["no-such-command"], capsys)[0] == 2
    assert call([], capsys)[0] == 2


def test_linear_form_zero_reported(files, capsys):
    code, out, err = call(["verify-gm", str(files / "zero.json")], capsys)
    assert code == 0
    assert json.loads(out)["report"]["outcome"] == "linear_form_zero"
    assert "LINEAR FORM ZERO" in err


def test_verify_gm_table(files, capsys):
    code, out, err = call(["verify-gm", str(files / "inst.cfg")], capsys)
    assert "v(l(u)) = 1/1" in err and "statement 1" in err
    assert json.loads(out)["report"]["values"]["v_l_u"] == "1/1"


def test_reports_byte_identical(files):
    outs = []
    for k in range(2):
        path = files / f"r{k}.json"
        assert run(["product-formula", "--random", "20", "--seed", "5", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    # keys are sorted
    text = outs[0].decode()
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"


def test_other_subcommands(capsys):
    assert call(["heights", "--field", "1,0,-2", "1,1", "3/2"], capsys)[0] == 0
    assert call(["siegel", "--forms", "1 2 3;4 5 6"], capsys)[0] == 0
    assert call(["exp-series", "--model", "gm^2", "--order", "6"], capsys)[0] == 0
    code, out, _ = call(["semistable", "1", "2"], capsys)
    assert code == 0 and json.loads(out)["report"]["holds"] is False
    code, out, _ = call(["params", "--n", "1", "--b", "e", "--h", "e"], capsys)
    assert json.loads(out)["report"]["parameters"]["S0"] == 6


def test_pipeline_subcommand(files, capsys):
    code, out, _ = call(["pipeline", str(files / "inst.cfg")], capsys)
    assert code == 0
    names = {v["name"] for v in json.loads(out)["report"]["verdicts"]}
    assert {"vanishing_conditions", "aux_height", "lemma_dis", "dual_route", "theorem_bound"} <= names


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "padiclf.cli", "bound", "--n", "1", "--b", "e", "--h", "e", "--p", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and '"statement": 1' in res.stdout
