import csv
import io
import json
import subprocess
import sys

import pytest

from triplesym.cli import EXIT_EXHAUSTED, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from triplesym.search import CSV_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == EXIT_OK
    return json.loads(out)


def test_unit_and_classno(capsys):
    data = run_json(capsys, "unit", "--p", "13")
    assert data["unit"] == "(3 + √13)/2" and data["norm"] == -1
    assert run_json(capsys, "classno", "--p", "229") == {"p": 229, "h": 3, "h_plus": 3}
    assert run_json(capsys, "unit")["unit_wbasis"] == "0+1w"


def test_symbol_and_hilbert(capsys):
    assert run_json(capsys, "symbol", "33+8√5", "(101,split,56)")["symbol"] == 1
    data = run_json(capsys, "hilbert", "-1", "(1+√5)/2")
    assert data["product_formula"] is True
    assert data["symbols"]["dyadic"] == -1
    assert run_json(capsys, "hilbert", "-1", "-1", "--place", "inf1")["symbol"] == -1
    assert run_json(capsys, "hilbert", "-1", "-1", "--place", "dyadic")["symbol"] == 1


def test_conic_and_redei(capsys):
    data = run_json(capsys, "conic", "33+8√5", "17")
    assert (data["x"], data["y"], data["z"]) == ("-23 - 14√5", "2", "6 + 3√5")
    data = run_json(capsys, "redei", "(29,split,18)", "(13,inert,-)")
    assert all(data["witnesses"].values())
    assert any("octic" in k for k in data["witnesses"])


def test_triple_formats(capsys, tmp_path):
    data = run_json(capsys, "triple", "33+8√5", "17", "(23+5√5)/2")
    assert data["symbol"] == -1 and data["s"] == "28" and data["u"] == "57"
    code, out, _ = run(capsys, "triple", "33+8√5", "17", "(23+5√5)/2", "--format", "csv")
    rows = dict(csv.reader(io.StringIO(out)))
    assert rows["symbol"] == "-1"
    target = tmp_path / "t.txt"
    code, out, _ = run(capsys, "triple", "33+8√5", "17", "(23+5√5)/2", "--out", str(target))
    assert code == EXIT_OK and "symbol" in out and target.read_text() == out


def test_magnus_and_massey(capsys):
    data = run_json(capsys, "magnus", "x1 x2 x1^-1 x2^-1", "--truncation", "3")
    assert data["coefficients"] == ["():1", "12:1", "21:1"]
    assert run_json(capsys, "massey", "x1 x2 x1^-1 x2^-1 x3 x2 x1 x2^-1 x1^-1 x3^-1")["pairing"] == 1
    seeded = run_json(capsys, "massey", "--seed", "4")
    assert seeded == run_json(capsys, "massey", "--seed", "4")
    assert run(capsys, "massey", "--gens", "2")[0] == EXIT_USAGE


def test_search_cli(capsys, tmp_path):
    out = tmp_path / "search.csv"
    code, stdout, _ = run(capsys, "search", "--norm-bound", "200", "--out", str(out), "--format", "csv")
    assert code == EXIT_OK
    text = out.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS) and stdout == text
    code, _, _ = run(capsys, "search", "--norm-bound", "200", "--out", str(out), "--jobs", "2")
    assert code == EXIT_OK and out.read_text() == text
    assert (tmp_path / "search.json").exists()


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == EXIT_OK and "FAIL" not in out
    assert "-1" in out
    code, out, _ = run(capsys, "verify-paper", "--p", "13", "--format", "json")
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert code == EXIT_OK and names and all("13" in n or "unit" in n or "class" in n for n in names)
    assert run(capsys, "verify-paper", "--p", "7")[0] == EXIT_USAGE


@pytest.mark.parametrize(
    "argv, code",
    [
        (["unit", "--p", "15"], EXIT_USAGE),
        (["conic", "33+8√5", "17", "--height-bound", "1"], EXIT_EXHAUSTED),
        (["conic", "3", "17"], EXIT_USAGE),
        (["triple", "33+8√5", "17", "(29,split,11)"], EXIT_USAGE),
        (["magnus", "x1", "--truncation", "1"], EXIT_USAGE),
        (["search", "--p", "229", "--norm-bound", "50"], EXIT_USAGE),
        (["search", "--jobs", "0"], EXIT_USAGE),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_unreadable_cache_is_failure(capsys, tmp_path):
    out = tmp_path / "c.csv"
    out.write_text("garbage\n")
    code, _, err = run(capsys, "search", "--norm-bound", "100", "--out", str(out))
    assert code == EXIT_FAIL and "c.csv" in err


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["unit", "--format", "xml"])
    assert exc.value.code == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "triplesym", "unit", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["norm"] == -1
