from __future__ import annotations

import json
import subprocess
import sys

import pytest

from hopfo import cli
from hopfo.hopfcore import hopf_to_json, parse_hopf
from hopfo.suites import Check, SuiteReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_homology_of_j2(capsys):
    code, out, _ = run(capsys, "compute", "homology", "--hopf", "divided_power:3", "--module", "J2")
    assert code == 0
    rep = json.loads(out)
    assert rep["dim_H"] == 1 and rep["seed"] == 0 and rep["window"] == 3


def test_compute_integral_sweedler(capsys):
    code, out, _ = run(capsys, "compute", "integral", "--hopf", "sweedler:3")
    rep = json.loads(out)
    assert code == 0
    h = parse_hopf("sweedler:3")
    assert rep["integral"] == [int(x) for x in h.integral]
    assert rep["basis"] == list(h.labels)


def test_compute_ext1(capsys):
    code, out, _ = run(capsys, "compute", "ext1", "--hopf", "divided_power:2", "--a", "k", "--m", "k", "--n", "k")
    assert code == 0 and json.loads(out)["dim"] == 1


@pytest.mark.parametrize("argv,key,value", [
    (["stablehom", "--hopf", "divided_power:3", "--m", "J2", "--n", "J2"], "dim", 1),
    (["jordan", "--hopf", "divided_power:3", "--module", "J2+H"], "jordan_type", [3, 2]),
    (["suspend", "--hopf", "divided_power:3", "--module", "J2", "--power", "1"], "shifted_dim_up_to_free", 1),
    (["cone", "--hopf", "divided_power:2", "--module", "k"], "cone_sigma_acyclic_within_window", True),
    (["smash", "--hopf", "divided_power:2", "--a", "truncpoly:2"], "dim", 4),
    (["cone", "--hopf", "divided_power:3", "--m", "k", "--n", "J2"], "cone_dim", 4),
])
def test_compute_targets(capsys, argv, key, value):
    code, out, _ = run(capsys, "compute", *argv)
    assert code == 0
    assert json.loads(out)[key] == value


def test_reports_are_deterministic(capsys):
    argv = ["compute", "cone", "--hopf", "sweedler:3", "--m", "k", "--n", "Hbar", "--seed", "9"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_table_format(capsys):
    code, out, _ = run(capsys, "compute", "homology", "--hopf", "divided_power:2", "--module", "k",
                       "--format", "table")
    assert code == 0 and "dim_H" in out and not out.lstrip().startswith("{")


def test_output_file(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "compute", "integral", "--hopf", "divided_power:2", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["integral"] == [0, 1]


def _write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_validate_good_files(capsys, tmp_path):
    h = _write(tmp_path, "h.json", hopf_to_json(parse_hopf("divided_power:3")))
    m = _write(tmp_path, "m.json", {"hopf": "h.json", "dim": 2, "action": {"d": [[0, 0], [1, 0]],
                                                                          "d^2": [[0, 0], [0, 0]]}})
    code, out, _ = run(capsys, "validate", h, m)
    assert code == 0
    assert out.count("OK") == 2


def test_validate_broken_coassociativity(capsys, tmp_path):
    data = hopf_to_json(parse_hopf("divided_power:3"))
    data["comult"].append([2, 1, 2, 1])
    code, _, err = run(capsys, "validate", _write(tmp_path, "bad.json", data))
    assert code == 1
    assert "coassociativity of Delta" in err


def test_validate_non_multiplicative_module(capsys, tmp_path):
    p = _write(tmp_path, "m.json", {"hopf": "divided_power:3", "action": {"d": [[0, 1], [1, 0]],
                                                                         "d^2": [[0, 0], [0, 0]]}})
    code, _, err = run(capsys, "validate", p)
    assert code == 1
    assert "(1, 1)" in err and "multiplicative" in err


def test_validate_parse_error(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{\n  \"dim\": 2,\n  oops\n}")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "line 3" in err


def test_validate_category_and_eqmod(capsys, tmp_path):
    from hopfo.catalogs import parse_category, parse_module
    from hopfo.equivariant import category_to_json, eqmod_to_json

    h = parse_hopf("divided_power:3")
    cat = parse_category("truncpoly:3", h)
    c = _write(tmp_path, "c.json", category_to_json(cat))
    e = eqmod_to_json(parse_module("C:A", cat))
    e["category"] = "c.json"
    m = _write(tmp_path, "e.json", e)
    code, out, err = run(capsys, "validate", c, m, "--hopf", "divided_power:3")
    assert code == 0, err
    assert "category" in out and "equivariant" in out


@pytest.mark.parametrize("argv", [
    ["compute", "homology", "--hopf", "nope:3", "--module", "k"],
    ["compute", "homology", "--hopf", "divided_power:3", "--module", "Q"],
    ["compute", "ext1", "--hopf", "divided_power:3", "--m", "k"],
    ["compute", "homology", "--module", "k"],
    ["compute", "jordan", "--hopf", "sweedler:3", "--module", "k"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "input error" in err


@pytest.mark.parametrize("argv", [["suite", "les", "--window", "0"], ["compute", "integral", "--seed", "-1"]])
def test_argument_validation(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_suite_pass_exit_zero(capsys):
    code, out, _ = run(capsys, "suite", "hopf-axioms", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["seed"] == 7


def test_suite_failure_exit_one(capsys, monkeypatch):
    def fake(name, cfg):
        return SuiteReport(name, cfg, [Check("x", False, {"witness": [1, 2]})])

    monkeypatch.setattr(cli, "run_suite", fake)
    code, out, _ = run(capsys, "suite", "les")
    rep = json.loads(out)
    assert code == 1 and not rep["passed"]
    assert rep["checks"][0]["witness"] == [1, 2]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "hopfo", "compute", "integral", "--hopf", "divided_power:2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["integral"] == [0, 1]


def test_help_documents_shorthand(capsys):
    with pytest.raises(SystemExit):
        cli.main(["compute", "--help"])
    out = capsys.readouterr().out
    assert "divided_power:p" in out and "truncpoly:n" in out
