"""Exit-code contract and JSON output of the ``tga`` command."""

import json
import shutil
import subprocess
import sys

import pytest

from tga.cli import main


@pytest.fixture
def cfg(tmp_path):
    counter = iter(range(10**6))

    def write(obj):
        path = tmp_path / f"inst{next(counter)}.json"
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return write


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def load(out):
    return json.loads(out)


# -- validate ----------------------------------------------------------------------------------

def test_validate_trivial_and_lambda(cfg, capsys):
    code, out, _ = run(["validate", "--config", cfg({"field": "GF(5)", "group": "Q8"})], capsys)
    assert code == 0 and load(out)["valid"] is True
    lam = {"field": "GF(5)", "group": "C2xC2", "cocycle": {"kind": "lambda_pairing", "lambda": [4]}}
    code, out, _ = run(["validate", "--config", cfg(lam)], capsys)
    assert code == 0


def test_validate_corrupted_entry(cfg, capsys):
    bad = {"field": "GF(5)", "group": "C3",
           "cocycle": {"kind": "explicit", "table": [[1, 1, 1], [1, 2, 1], [1, 1, 1]]}}
    code, out, _ = run(["validate", "--config", cfg(bad)], capsys)
    rep = load(out)
    assert code == 1 and rep["valid"] is False
    assert [1, 1, 2] in rep["cocycle_violations"]


def test_validate_zero_entry_and_catalog(cfg, capsys):
    zero = {"field": "GF(5)", "group": "C2", "cocycle": {"kind": "explicit", "table": [[1, 1], [1, 0]]}}
    ok = {"field": "GF(3)", "group": "C2"}
    code, out, _ = run(["validate", "--config", cfg([ok, zero])], capsys)
    rep = load(out)
    assert code == 1 and [r["valid"] for r in rep] == [True, False]


def test_parse_errors(cfg, capsys):
    code, _, err = run(["validate", "--config", cfg("{oops")], capsys)
    assert code == 2 and "tga: error" in err
    code, _, _ = run(["decide", "--config", cfg({"field": "GF(6)", "group": "C2"})], capsys)
    assert code == 2
    code, _, _ = run(["decide", "--config", cfg({"field": "GF(5)", "group": "C99"})], capsys)
    assert code == 2
    two = cfg([{"field": "GF(5)", "group": "C2"}, {"field": "GF(3)", "group": "C2"}])
    code, _, _ = run(["decide", "--config", two], capsys)
    assert code == 2
    code, _, _ = run(["witness", "--config", cfg({"field": "GF(3)", "group": "C2"}),
                      "--kind", "regularity", "--element", "2*q"], capsys)
    assert code == 2
    code, _, _ = run(["witness", "--config", cfg({"field": "GF(3)", "group": "C2"}),
                      "--kind", "regularity"], capsys)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["decide", "--config", "x", "--property", "bogus"])
    assert exc.value.code == 2


# -- decide ------------------------------------------------------------------------------------

def test_decide_examples(cfg, capsys):
    code, out, _ = run(["decide", "--config", cfg({"field": "GF(5)", "group": "C2xC2"})], capsys)
    d = load(out)
    assert code == 0 and d["verdict"] is True and d["schema"] == 1
    code, out, _ = run(["decide", "--config", cfg({"field": "GF(7)", "group": "Q8"})], capsys)
    d = load(out)
    assert code == 3 and d["error"] == "not_admissible" and d["closure"]["suggested_k"] == 2
    code, out, _ = run(["decide", "--config", cfg({"field": "GF(3)", "group": "C3"}),
                        "--property", "xi_N"], capsys)
    assert code == 0 and load(out)["verdict"] is True
    code, out, _ = run(["decide", "--config", cfg({"field": "GF(3)", "group": "C3"}),
                        "--property", "n_weak", "--n", "3"], capsys)
    d = load(out)
    assert code == 0 and d["verdict"] is False and d["notes"]["n"] == 3


def test_decide_other_properties(cfg, capsys):
    c6 = cfg({"field": "GF(5)", "group": "C6"})
    code, out, _ = run(["decide", "--config", c6, "--property", "equivalences", "--n-max", "3"], capsys)
    r = load(out)
    assert code == 0 and r["all_equal"] and len(r["witnesses"]) == 64
    code, out, _ = run(["decide", "--config", c6, "--property", "closure"], capsys)
    assert code == 0 and load(out)["passes"] is True
    code, out, _ = run(["decide", "--config", cfg({"field": "GF(5)", "group": "Q8"}),
                        "--property", "group_ring_n_weak"], capsys)
    d = load(out)
    assert code == 0 and d["verdict"] is False and d["notes"]["isotropic_triple"] == [[0], [1], [2]]
    code, out, _ = run(["decide", "--config", c6, "--property", "strongly_regular"], capsys)
    assert code == 0 and load(out)["verdict"] is True


# -- witness -------------------------------------------------------------------------------------

def test_witness_examples(cfg, capsys):
    code, out, _ = run(["witness", "--config", cfg({"field": "GF(5)", "group": "Q8"}),
                        "--kind", "quaternion"], capsys)
    w = load(out)
    assert code == 0 and w["holds"] and w["data"]["x"]["text"] == "4*h + 3*gh + g^2h + 2*g^3h"
    code, out, _ = run(["witness", "--config", cfg({"field": "GF(3)", "group": "C2"}),
                        "--kind", "regularity", "--element", "1+g"], capsys)
    w = load(out)
    assert code == 0 and w["data"]["b"]["text"] == "2"
    code, out, _ = run(["witness", "--config", cfg({"field": "GF(5)", "group": "C2xC2"}),
                        "--kind", "unit_commutation"], capsys)
    assert code == 4 and load(out)["witness"] is None
    code, out, _ = run(["witness", "--config", cfg({"field": "GF(7)", "group": "Q8"}),
                        "--kind", "quaternion"], capsys)
    assert code == 3


def test_witness_solver_kinds(cfg, capsys):
    c3 = cfg({"field": "GF(3)", "group": "C3"})
    code, _, _ = run(["witness", "--config", c3, "--kind", "n_weak", "--element", "g - 1"], capsys)
    assert code == 4
    code, out, _ = run(["witness", "--config", c3, "--kind", "xiN", "--element", "g - 1"], capsys)
    assert code == 0 and load(out)["kind"] == "xiN_pair"
    code, out, _ = run(["witness", "--config", c3, "--kind", "strong_regularity", "--element", "g"], capsys)
    assert code == 0 and load(out)["data"]["b"]["text"] == "g^2"
    code, out, _ = run(["witness", "--config", cfg({"field": "GF(2)", "group": "C2"}),
                        "--kind", "char_p"], capsys)
    assert code == 0 and load(out)["data"]["x"]["text"] == "1 + g"


# -- oracle ---------------------------------------------------------------------------------------

def test_oracle_examples(cfg, capsys):
    code, out, _ = run(["oracle", "--config", cfg({"field": "GF(2)", "group": "C2"})], capsys)
    r = load(out)
    assert code == 0 and r["found_text"] == "1 + g" and r["exhaustive"]
    code, out, _ = run(["oracle", "--config", cfg({"field": "GF(3)", "group": "C3"}),
                        "--property", "n_weak"], capsys)
    r = load(out)
    assert code == 0 and r["passed"] is False and r["counterexample"] is not None
    code, out, _ = run(["oracle", "--config", cfg({"field": "GF(3)", "group": "C2"}),
                        "--property", "regular", "--parallelism", "2"], capsys)
    assert code == 0 and load(out)["passed"] is True


# -- sweep ------------------------------------------------------------------------------------------

def test_sweep_empty_catalog(cfg, capsys, tmp_path):
    code, out, _ = run(["sweep", "--config", cfg([]), "--out-dir", str(tmp_path / "r"), "--no-figures"], capsys)
    r = load(out)
    assert code == 0 and r["summary"]["rows"] == 0
    assert (tmp_path / "r" / "report.json").exists()


def test_sweep_not_admissible_row(cfg, capsys, tmp_path):
    cat = cfg([{"field": "GF(7)", "group": "Q8"}, {"field": "GF(5)", "group": "C2"}])
    code, out, _ = run(["sweep", "--config", cat, "--out-dir", str(tmp_path / "r"),
                        "--property", "no_nilpotents,xi_N", "--seed", "3", "--no-figures"], capsys)
    r = load(out)
    assert code == 0
    assert r["summary"] == {"rows": 4, "ok": 2, "not_admissible": 2, "error": 0, "agree": 2, "disagree": 0}
    rep = json.loads((tmp_path / "r" / "report.json").read_text())
    assert rep["seed"] == 3 and rep["properties"] == ["no_nilpotents", "xi_N"]


def test_seed_from_environment(cfg, capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TGA_SEED", "4242")
    code, _, _ = run(["sweep", "--config", cfg([{"field": "GF(5)", "group": "C2"}]),
                      "--out-dir", str(tmp_path / "r"), "--no-figures"], capsys)
    assert code == 0
    assert json.loads((tmp_path / "r" / "report.json").read_text())["seed"] == 4242


def test_console_script(cfg):
    exe = shutil.which("tga")
    cmd = [exe] if exe else [sys.executable, "-m", "tga.cli"]
    path = cfg({"field": "GF(5)", "group": "C2xC2"})
    res = subprocess.run(cmd + ["decide", "--config", path], capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and json.loads(res.stdout)["verdict"] is True
    res = subprocess.run(cmd + ["decide", "--config", path + ".missing"], capture_output=True, text=True,
                         timeout=120)
    assert res.returncode == 2 and "cannot read config" in res.stderr
