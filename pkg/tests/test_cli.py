import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from elliptic_donaldson.cli import main

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "cli-output.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    payload = json.loads(out)
    jsonschema.validate(payload, SCHEMA)
    return code, payload


def test_gamma_one_without_multiple_fibers(capsys):
    assert run(capsys, "gamma", "--t", "1", "--pg", "3", "--m1", "1", "--m2", "1")[:2] == (0, "(S2) + 2*(kS)^2")


def test_gamma_two_symbolic_sigma(capsys):
    code, out, _ = run(capsys, "gamma", "--t", "2", "--pg", "0", "--m1", "1", "--m2", "1", "--symbolic-sigma")
    assert code == 0
    assert out.endswith("+ 5*(kS)^4")


def test_gamma_zero(capsys):
    assert run(capsys, "gamma", "--t", "0")[:2] == (0, "1")


def test_gamma_json(capsys):
    code, payload = run_json(capsys, "gamma", "--t", "2", "--pg", "0", "--m1", "1", "--m2", "1")
    assert code == 0
    assert payload["degree"] == 4
    assert payload["coefficients"]["(kS)^4"] == "5/1"


def test_gamma_evaluation(capsys):
    code, out, _ = run(capsys, "gamma", "--t", "1", "--pg", "3", "--m1", "1", "--m2", "1", "--S2", "1", "--kS", "1/2")
    assert (code, out) == (0, "3/2")
    code, payload = run_json(capsys, "gamma", "--t", "1", "--pg", "3", "--m1", "1", "--m2", "1", "--S2", "1", "--kS", "1/2")
    assert payload["value"] == "3/2"


@pytest.mark.parametrize(
    "argv",
    [
        ["gamma", "--t", "3"],
        ["gamma", "--t", "1", "--m1", "2"],
        ["gamma", "--t", "1", "--S2", "1"],
        ["gamma"],
        ["verify", "unknown-id"],
        ["mod-calc", "--step", "1:0"],
        ["mod-calc", "--step", "5:3"],
        ["hom-dim", "--bundle", "split", "--e", "0", "--d", "1"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert main(argv) == 2


def test_verify_single_checks(capsys):
    for check_id in ("section-line-bundle", "hilb2-quartic"):
        code, out, _ = run(capsys, "verify", check_id)
        assert code == 0
        assert out.startswith("PASS")


def test_verify_json(capsys):
    code, payload = run_json(capsys, "verify", "gamma2-assembly")
    assert code == 0
    assert payload["passed"] is True
    assert [c["id"] for c in payload["checks"]] == ["gamma2-assembly"]


def test_verify_failure_exits_one(capsys, monkeypatch):
    from elliptic_donaldson import checks

    failing = checks.Check("always-fails", "a deliberately false identity", lambda: [checks._cmp("one", 1, 2)])
    monkeypatch.setitem(checks.CHECKS, "always-fails", failing)
    code, out, _ = run(capsys, "verify", "always-fails")
    assert code == 1
    assert out.startswith("FAIL")


def test_mu_cases(capsys):
    code, payload = run_json(capsys, "mu", "--case", "section")
    assert code == 0
    assert payload["mu_squared"] == "pg*kS^2 - kS^2 + S2"
    for case in ("extension", "general"):
        code, payload = run_json(capsys, "mu", "--case", case, "--pg", "1", "--m1", "3", "--m2", "1", "--e", "0")
        assert code == 0


def test_hom_dim_examples(capsys):
    assert run(capsys, "hom-dim", "--bundle", "stable", "--e", "0", "--d", "1")[1].startswith("dim Hom = 1;")
    assert run(capsys, "hom-dim", "--bundle", "stable", "--e", "0", "--d", "3")[1].startswith("dim Hom = 5;")
    # lambda = L2 forces d = deg L2 = 2e+1-l1; the dimension is 2d - 2e.
    for e, l1 in ((0, 0), (0, -1), (1, -1), (-2, -4)):
        d = 2 * e + 1 - l1
        argv = ["hom-dim", "--bundle", "split", "--e", str(e), "--d", str(d), "--l1", str(l1), "--tag", "L2"]
        code, payload = run_json(capsys, *argv)
        assert (code, payload["dim"]) == (0, 2 * d - 2 * e)


def test_mod_calc_dimensions(capsys):
    code, payload = run_json(capsys, "mod-calc", "--pg", "0", "--e", "0", "--step", "1:1")
    assert code == 0
    assert payload["dimension"] == "2/1"
    for t in range(1, 5):
        code, payload = run_json(capsys, "mod-calc", "--pg", "1", "--e", "0", *["--step", "1:1"] * t)
        assert payload["dimension"] == f"{2 * t}/1"


def test_mod_calc_force(capsys):
    code, payload = run_json(capsys, "mod-calc", "--step", "1:0", "--force")
    assert code == 0
    assert payload["steps"][0]["allowable"] is False


@pytest.mark.parametrize("kind", ["constants", "cohomology", "hom"])
def test_tables(capsys, kind):
    code, payload = run_json(capsys, "table", kind)
    assert code == 0
    assert all(len(row) == len(payload["header"]) for row in payload["rows"])


def test_constants_table_values(capsys):
    code, payload = run_json(capsys, "table", "constants", "--max-m", "3")
    assert payload["rows"] == [["1", "0/1", "0/1"], ["3", "-8/9", "272/81"]]


def test_module_entry_point():
    done = subprocess.run(
        [sys.executable, "-m", "elliptic_donaldson", "gamma", "--t", "0"], capture_output=True, text=True, check=False
    )
    assert done.returncode == 0
    assert done.stdout.strip() == "1"


def test_verify_all_is_deterministic_and_schema_valid(capsys):
    runs = []
    for _ in range(2):
        code, payload = run_json(capsys, "verify", "all")
        assert code == 0
        runs.append([(c["id"], c["status"], c["lhs"], c["rhs"]) for c in payload["checks"]])
    assert runs[0] == runs[1]
    assert len(runs[0]) == 11
