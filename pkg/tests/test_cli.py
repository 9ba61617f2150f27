import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest

from fakeclass.cli import main

ROOT = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def usage_code(capsys, *argv):
    with pytest.raises(SystemExit) as e:
        main(list(argv))
    capsys.readouterr()
    return e.value.code


@pytest.mark.parametrize("field,at,want", [("Q-sqrt5", "-3", "1/60"), ("Q", "-1", "-1/12"),
                                           ("cubic-49", "-1", "-1/21")])
def test_lvalue(capsys, field, at, want):
    code, out, _ = run(capsys, "lvalue", "--field", field, "--at", at)
    assert code == 0 and out.strip() == want
    assert Fraction(out.strip()) == Fraction(want)


def test_lvalue_relative_and_disc(capsys):
    code, out, _ = run(capsys, "lvalue", "--field", "Q-sqrt-7", "--over", "Q", "--at", "-2")
    assert code == 0 and out.strip() == "-16/7"
    # zeta(0) L(0, chi_-7) = (-1/2)(2 h / w) with h = 1, w = 2
    code, out, _ = run(capsys, "lvalue", "--disc", "-7", "--degree", "2", "--at", "0")
    assert code == 0 and out.strip() == "-1/2"


def test_lvalue_unsupported(capsys, db):
    # a non-abelian quartic asked for its own Dedekind zeta value
    ell = next(r for r in db if not r.abelian)
    code, _, err = run(capsys, "lvalue", "--field", ell.label, "--at", "-1")
    assert code == 4 and "unsupported" in err


def test_lvalue_unknown_field(capsys):
    code, _, err = run(capsys, "lvalue", "--field", "Q-sqrt-9999991", "--at", "-1")
    assert code == 2


def test_covolume(capsys):
    code, out, _ = run(capsys, "covolume", "--n", "5", "--k", "Q", "--l", "Q-sqrt-7", "--local", "2:5")
    assert code == 0
    assert out.splitlines() == ["R = 1/315", "e'(q=2, d=5) = 315", "mu = 1", "chi = 5"]
    code, out, _ = run(capsys, "covolume", "--n", "3", "--k", "Q-sqrt5", "--l", "Q-sqrt5-sqrt-3",
                       "--local", "4:3", "--r", "2")
    assert code == 0 and out.splitlines()[-1] == "chi = 3"


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "L", "5", "5", "3", "1", "--lt", "7")
    assert code == 0 and "Certified" in out
    code, out, _ = run(capsys, "bound", "L", "5", "5", "2", "1", "--lt", "7")
    assert code == 1 and "Refuted" in out
    code, out, _ = run(capsys, "bound", "phi", "9", "2", "0.09058", "1.5", "--power", "4", "--lt", "97")
    assert code == 0
    code, out, _ = run(capsys, "bound", "p2", "5", "2", "13", "1/8", "1", "--lt", "7.2")
    assert code == 1


def test_usage_errors(capsys):
    assert usage_code(capsys, "classify", "--n", "4") == 2
    assert usage_code(capsys, "classify", "--n", "5", "--precision", "10") == 2
    assert usage_code(capsys, "classify", "--bogus") == 2
    assert usage_code(capsys) == 2


def test_classify_n9(capsys):
    code, out, _ = run(capsys, "classify", "--n", "9")
    assert code == 0
    assert "n=9: k=Q forced; a in {1,3,7} after lambda; all eliminated" in out
    assert out.strip().endswith("Survivors: none")


def test_classify_all(capsys, tmp_path):
    path = tmp_path / "ledger.json"
    code, out, _ = run(capsys, "classify", "--all", "--out", str(path))
    assert code == 0
    assert out.strip().splitlines()[-1] == "Survivors: n=5, l=Q(sqrt(-7)), T0={2}"
    ledger = json.loads(path.read_text())
    assert ledger["schema_version"] == "fakeclass-ledger/1"
    # every exact value in the ledger parses back into a rational
    for e in ledger["entries"]:
        for key in ("R", "mu"):
            if key in e["values"]:
                Fraction(e["values"][key])
    # determinism: a second run writes the same bytes
    path2 = tmp_path / "ledger2.json"
    assert main(["classify", "--all", "--out", str(path2)]) == 0
    capsys.readouterr()
    assert path.read_bytes() == path2.read_bytes()

    check = subprocess.run([sys.executable, str(ROOT / "scripts" / "check_ledger.py"), str(path)],
                           capture_output=True, text=True)
    assert check.returncode == 0, check.stdout + check.stderr


def test_db_error(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{oops\n")
    code, _, err = run(capsys, "classify", "--n", "5", "--db", str(bad))
    assert code == 2 and "line 1" in err
    code, _, _ = run(capsys, "classify", "--n", "5", "--db", str(tmp_path / "missing.jsonl"))
    assert code == 2


def test_env_var_db(capsys, tmp_path, monkeypatch):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    monkeypatch.setenv("FAKECLASS_DB", str(empty))
    code, _, _ = run(capsys, "lvalue", "--field", "Q", "--at", "-1")
    assert code == 2


def test_verify_paper_default(capsys):
    code, out, _ = run(capsys, "verify-paper")
    # two printed p2 constants sit below the certified values, so one table fails
    assert code == 1
    assert out.strip().splitlines()[-1] == "1 FAIL, 0 UNDECIDED of 11 tables; first: inline bound claims"
    assert out.count("[PASS]") == 10


def test_verify_paper_corrupted_snapshot(capsys, tmp_path):
    text = resources.files("fakeclass").joinpath("data/fields.jsonl").read_text()
    lines = [ln for ln in text.splitlines() if json.loads(ln)["label"] != "4.0.125.1"]
    path = tmp_path / "corrupt.jsonl"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify-tables", "--db", str(path))
    assert code == 1
    assert "fields_with(4, (0, 2), 125)" in out
