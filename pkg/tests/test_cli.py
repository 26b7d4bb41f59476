import csv
import io
import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from sptpairs.cli import CONGRUENCE_COLUMNS, cli
from sptpairs.combinatorics import unweighted_count
from sptpairs.verify import validate_reports

GOLDEN = Path(__file__).parent / "data" / "congruences_n20.csv"


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args, env=None):
        return runner.invoke(cli, list(args), env=env, catch_exceptions=False)

    return go


def test_verify_single(run):
    res = run("verify", "--id", "crank-dissection-5", "--depth", "60")
    assert res.exit_code == 0
    assert res.output.startswith("PASS")


def test_verify_unknown_id(run):
    res = run("verify", "--id", "nope")
    assert res.exit_code == 2
    assert "nope" in res.output


@pytest.mark.parametrize("args", [(), ("--id", "x", "--all"), ("--all", "--depth", "-3"),
                                  ("--all", "--depth", "abc"), ("--all", "--jobs", "0")])
def test_verify_usage_errors(run, args):
    assert run("verify", *args).exit_code == 2


def test_verify_bad_profile_from_env(run):
    assert run("verify", "--all", env={"SPTPAIRS_PROFILE": "bogus"}).exit_code == 2


def test_profile_from_env(run):
    res = run("verify", "--id", "PP13-eta-certificate", "--format", "json", env={"SPTPAIRS_PROFILE": "certificate"})
    assert res.exit_code == 0
    assert json.loads(res.output)[0]["depth"] == "25"


def test_mismatch_exit_code_and_witness(run, tmp_path):
    bad = tmp_path / "reg.txt"
    bad.write_text("(identity broken (lhs (qinf 1)) (rhs (+ (pent) (q 7))))\n")
    res = run("verify", "--all", "--registry", str(bad), "--depth", "10")
    assert res.exit_code == 1
    assert "first mismatch at q^7: lhs=1 rhs=2" in res.output


def test_broken_registry_is_a_usage_error(run, tmp_path):
    bad = tmp_path / "reg.txt"
    bad.write_text("(identity broken (lhs 1)\n")
    assert run("verify", "--all", "--registry", str(bad)).exit_code == 2


def test_json_output_validates(run, tmp_path):
    out = tmp_path / "r.json"
    res = run("verify", "--id", "S-reflect", "--format", "json", "--output", str(out))
    assert res.exit_code == 0
    doc = json.loads(out.read_text())
    validate_reports(doc)
    assert len(doc) == 4


def test_csv_output(run):
    res = run("verify", "--id", "g-shift", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert len(rows) == 4 and all(r["outcome"] == "pass" for r in rows)


def test_expensive_entries_are_skipped_by_default(run):
    res = run("verify", "--id", "PP37-eta-certificate-1", "--profile", "certificate")
    assert res.exit_code == 0 and res.output.startswith("SKIPPED")


def test_list(run):
    res = run("list", "--id", "crank-dissection-*")
    assert res.exit_code == 0 and len(res.output.splitlines()) == 3


def test_congruences_text(run):
    res = run("congruences", "--n-max", "100")
    assert res.exit_code == 0
    assert res.output.count("PASS") == 6
    assert res.output.count(": equal") == 6


def test_congruences_degenerate(run):
    assert run("congruences", "--n-max", "1").exit_code == 0
    assert run("congruences", "--n-max", "0").exit_code == 2


def test_congruences_csv_matches_golden(run):
    res = run("congruences", "--n-max", "20", "--format", "csv")
    assert res.exit_code == 0
    assert res.output == GOLDEN.read_text()
    rows = list(csv.DictReader(io.StringIO(res.output)))
    assert tuple(rows[0]) == CONGRUENCE_COLUMNS
    for row in rows:
        n, i = int(row["n"]), int(row["i"])
        assert int(row["pp_i"]) == unweighted_count(i, n)
        assert int(row["residue"]) == int(row["pp_i"]) % int(row["ell"]) == 0


def test_congruences_json(run):
    doc = json.loads(run("congruences", "--n-max", "30", "--format", "json").output)
    validate_reports(doc["reports"])
    assert all(c["equal"] for c in doc["classes"])


def test_cranks(run):
    res = run("cranks", "--family", "1", "--n", "2")
    assert res.exit_code == 0
    assert "agreement: yes" in res.output
    doc = json.loads(run("cranks", "--family", "1", "--n", "2", "--format", "json").output)
    assert doc["histogram"] == {"-1": 1, "0": 1, "1": 1} and doc["agree"]


def test_cranks_empty(run):
    res = run("cranks", "--family", "2", "--n", "1")
    assert res.exit_code == 0 and "(no pairs)" in res.output


def test_cranks_cap(run):
    assert run("cranks", "--family", "1", "--n", "61").exit_code == 2
    assert run("cranks", "--family", "1", "--n", "12", "--cap", "10").exit_code == 2
    assert run("cranks", "--family", "5", "--n", "3").exit_code == 2
