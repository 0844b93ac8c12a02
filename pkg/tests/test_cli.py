import csv
import io
import json
import subprocess
import sys

import pytest

from treenergy.cli import main, parse_edge


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_charpoly_line(capsys):
    code, out, _ = run(capsys, "charpoly", "S(10;2,6,1)")
    assert code == 0
    assert "phi_tilde: x^10+9x^8+27x^6+31x^4+12x^2+1" in out.splitlines()
    assert "phi: x^10-9x^8+27x^6-31x^4+12x^2-1" in out.splitlines()


def test_charpoly_graph6_and_csv(capsys):
    code, out, _ = run(capsys, "charpoly", "Bg", "P(3)", "--csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["tree", "phi", "phi_tilde"]
    assert rows[1][2] == rows[2][2] == "x^3+2x"


def test_energy_trivial_and_json(capsys):
    code, out, _ = run(capsys, "energy", "P(1)")
    assert code == 0 and out.strip() == "P(1): 0.000000000000 ± 0.0e+00"
    code, out, _ = run(capsys, "energy", "T(11;2,2|2,2)", "--tol", "1e-9", "--json")
    rec = json.loads(out)
    assert abs(rec["midpoint"] - 13.059967) < 1e-5 and rec["radius"] <= 1e-9


def test_energy_from_file(tmp_path, capsys):
    f = tmp_path / "trees.txt"
    f.write_text("S(10;2,6,1)\n\n# comment\nT(10;2,2|2,2)\n")
    code, out, _ = run(capsys, "energy", "--file", str(f), "--csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["tree"] for r in rows] == ["S(10;2,6,1)", "T(10;2,2|2,2)"]


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "T(12;3,2|2,2)", "T(12;2,2|2,2)")
    assert code == 0 and out.startswith("StrictlyLess (witness x^")
    code, out, _ = run(capsys, "compare", "S(9;2,1,5)", "S(9;2,2,2,2)", "--json")
    assert json.loads(out)["relation"] == "Incomparable"


def test_prove_dominance(capsys):
    code, out, _ = run(capsys, "prove-dominance", "T(11;3,2|2,2)", "0-2", "T(11;2,2|2,2)", "0-1", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["case"] == "Thm32Bound"
    assert abs(rec["lower_bound"]["midpoint"] - 0.005951) < 5e-5
    assert len(rec["D"]) == 1


def test_prove_dominance_double(capsys):
    code, out, _ = run(capsys, "prove-dominance", "T(12;3,2|2,2)", "0-3", "T(12;2,2|2,2)", "0-1", "--double", "1-2", "1-2")
    assert code == 0
    assert "relation StrictlyLess" in out and "strict_for_large_index true" in out


def test_rank_csv(capsys):
    code, out, _ = run(capsys, "rank", "--n", "10", "--top", "4", "--out", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["spec"] == "P(10)" and rows[3]["spec"] == "S(10;1,2,6)"


def test_rank_output_independent_of_jobs(capsys):
    _, one, _ = run(capsys, "rank", "--n", "12", "--top", "10", "--out", "json")
    _, four, _ = run(capsys, "rank", "--n", "12", "--top", "10", "--out", "json", "--jobs", "4")
    assert one == four


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "6")
    assert code == 0 and len(out.split()) == 6
    _, out, _ = run(capsys, "enumerate", "--n", "5", "--format", "spec")
    assert out.split() == ["P(5)", "S(5;1,1,2)", "S(5;1,1,1,1)"]


def test_verify_paper_single(capsys):
    code, out, _ = run(capsys, "verify-paper", "--theorem", "thm3.3", "--n", "10")
    assert code == 0 and "== thm3.3 at n=10: PASS" in out
    code, out, _ = run(capsys, "verify-paper", "--theorem", "lemma4.4", "--json")
    assert code == 0 and json.loads(out)["passed"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["energy", "X(3)"],
        ["energy", "S(10;2,6,2)"],
        ["compare", "P(4)", "P(5)"],
        ["prove-dominance", "P(5)", "0-2", "P(5)", "0-1"],
        ["verify-paper", "--theorem", "thm3.3", "--n", "9"],
        ["enumerate", "--n", "30"],
        ["energy"],
    ],
)
def test_domain_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("treenergy: error:")


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["rank"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_parse_edge():
    assert parse_edge("3-7") == (3, 7) and parse_edge("3,7") == (3, 7)


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "treenergy", "energy", "S(31;2,7,21)", "S(31;4,4,22)"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and "38.6169" in a and "38.6167" in a


def test_verification_failure_exits_1(capsys, monkeypatch):
    from treenergy import cli
    from treenergy.extremal import VerificationReport

    bad = VerificationReport("thm3.3", 10)
    bad.add("made-up quantity", 1, 2, False)
    monkeypatch.setattr(cli, "verify_all", lambda *a, **k: [bad])
    code, out, _ = run(capsys, "verify-paper")
    assert code == 1 and "FAIL  made-up quantity" in out and out.rstrip().endswith("FAIL")
