"""CLI behaviour and golden reports.

Golden files hold each report minus its provenance block. Regenerate with
MMSLAB_UPDATE_GOLDEN=1 pytest tests/test_cli.py after an intended change.
"""

import json
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from mmslab.cli import EXIT_BUDGET, EXIT_DISCREPANCY, EXIT_OK, EXIT_USAGE, run
from mmslab.constants import DEFAULTS, ConstantsTable, parse_rational
from mmslab.errors import UsageError
from mmslab.report import Report, canonical_json, latest_report, load_report, to_jsonable, write_report

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "construct_hnk_20_3": ["construct", "--hnk", "--n", "20", "--k", "3"],
    "construct_complete_10_3": ["construct", "--complete", "--n", "10", "--k", "3"],
    "audit_covers_k4": ["audit-covers", "--k", "4"],
    "audit_covers_k4_errata": ["audit-covers", "--k", "4", "--errata"],
    "audit_covers_pair": ["audit-covers", "--k", "6", "--i", "2", "--j", "1"],
    "census_36_3": ["census", "--n", "36", "--k", "3"],
    "count_three_heavy": ["count", "--complete", "--n", "10", "--k", "3", "--example", "three-heavy"],
    "count_tight_cycle": ["count", "--tight-cycle", "--n", "10", "--k", "3", "--example", "tight-cycle-k3",
                          "--collect-edges"],
    "count_diagnostics": ["count", "--hnk", "--n", "60", "--k", "4", "--example", "star", "--diagnostics"],
    "oracle_k8_2": ["oracle", "--complete", "--n", "8", "--k", "2"],
    "oracle_c10_3": ["oracle", "--tight-cycle", "--n", "10", "--k", "3"],
    "averaging_exact_matching": ["averaging", "--matching", "--t", "2", "--k", "2", "--exact"],
    "averaging_mc_cycle": ["averaging", "--tight-cycle", "--n", "6", "--k", "3", "--mc", "--samples", "20000",
                           "--seed", "5", "--threads", "2"],
    "sumset_z5": ["sumset", "--k", "5", "--a", "0,1", "--b", "0,1", "--t", "2"],
    "sumset_kneser_4": ["sumset", "--k", "4", "--audit", "kneser"],
    "reproduce_three_heavy": ["reproduce", "three-heavy", "--k", "3"],
    "reproduce_star": ["reproduce", "star", "--n", "10", "--k", "3"],
    "reproduce_tight_cycle": ["reproduce", "tight-cycle"],
    "reproduce_pair_sweep": ["reproduce", "pair-sweep", "--k", "4", "--k-max", "12"],
    "reproduce_averaging_matching": ["reproduce", "averaging-matching"],
}

EXPECTED_CODES = {"audit_covers_k4": EXIT_DISCREPANCY, "audit_covers_pair": EXIT_DISCREPANCY}


def _run(argv, tmp_path):
    out = tmp_path / "r.json"
    code, rep = run(argv + ["--out", str(out), "--quiet"])
    return code, rep, out


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path):
    code, rep, out = _run(CASES[name], tmp_path)
    assert code == EXPECTED_CODES.get(name, EXIT_OK)
    payload = load_report(out)
    payload.pop("provenance")
    path = GOLDEN / f"{name}.json"
    if os.environ.get("MMSLAB_UPDATE_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    assert payload == json.loads(path.read_text())
    # a second run reproduces the payload bit for bit
    _, rep2, _ = _run(CASES[name], tmp_path)
    assert canonical_json(rep2.payload()) == canonical_json(rep.payload())


class TestContent:
    def test_three_heavy(self, tmp_path):
        _, rep, _ = _run(CASES["reproduce_three_heavy"], tmp_path)
        r = rep.as_dict()
        assert r["results"]["nonnegative_count"] == 35 and r["results"]["binom_n_minus_1"] == 36
        assert r["verdicts"]["count"] == "below C(n-1,k-1)"

    def test_census(self, tmp_path):
        _, rep, _ = _run(CASES["census_36_3"], tmp_path)
        assert rep.results["max_multiplicity"] <= 110

    def test_averaging(self, tmp_path):
        _, rep, _ = _run(CASES["averaging_exact_matching"], tmp_path)
        assert rep.as_dict()["results"]["expectation"] == "1" == rep.as_dict()["results"]["formula_value"]

    def test_verbatim_census_discrepancy(self, tmp_path):
        code, rep, _ = _run(["census", "--n", "60", "--k", "5"], tmp_path)
        assert code == EXIT_DISCREPANCY and rep.verdicts["slots_disjoint"] is False

    def test_eps_override_recorded(self, tmp_path):
        _, rep, _ = _run(CASES["count_diagnostics"] + ["--eps0", "1e-3"], tmp_path)
        d = rep.as_dict()
        assert d["inputs"]["eps0"] == "1/1000"
        assert d["inputs"]["constants"]["overridden"] == ["eps0"]

    def test_rationals_as_strings(self, tmp_path):
        _, rep, _ = _run(["averaging", "--tight-cycle", "--n", "6", "--k", "3", "--exact"], tmp_path)
        assert isinstance(rep.as_dict()["results"]["expectation"], str)


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["bogus"],
        ["construct", "--hnk", "--n", "8", "--k", "3"],
        ["count", "--complete", "--n", "5", "--k", "2"],
        ["census", "--n", "20", "--k", "3"],
        ["construct", "--hnk", "--n", "20", "--k", "3", "--eps0", "abc"],
        ["construct", "--hnk", "--n", "20", "--k", "3", "--eps0", "-1"],
        ["audit-covers", "--k", "4", "--i", "1"],
        ["sumset", "--k", "5"],
    ])
    def test_usage(self, argv, tmp_path, capsys):
        code, rep = run(argv + ["--reports-dir", str(tmp_path)])
        assert code == EXIT_USAGE and rep is None
        assert "error" in capsys.readouterr().err

    def test_budget(self, tmp_path):
        code, rep, _ = _run(["oracle", "--hnk", "--n", "12", "--k", "4", "--budget", "20"], tmp_path)
        assert code in (EXIT_BUDGET, EXIT_OK)
        if rep.results["status"] == "Unknown":
            assert code == EXIT_BUDGET

    def test_budget_exhaustion_on_dense_instance(self, tmp_path):
        code, rep, _ = _run(["oracle", "--complete", "--n", "9", "--k", "2", "--budget", "2"], tmp_path)
        assert rep.results["budget_exhausted"] and rep.results["status"] == "Unknown" and code == EXIT_BUDGET

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run([sys.executable, "-m", "mmslab", "reproduce", "star", "--quiet",
                               "--reports-dir", str(tmp_path)], capture_output=True, text=True)
        assert proc.returncode == 0 and "report:" in proc.stderr


class TestResultsTree:
    def test_layout_and_latest(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MMSLAB_REPORTS", str(tmp_path))
        code, rep = run(["reproduce", "star", "--quiet"])
        assert code == 0
        latest = latest_report("reproduce")
        assert latest is not None and latest.parent == tmp_path / "reproduce"
        name = latest.name
        assert name.endswith(".json") and "-" in name
        assert load_report(latest)["results"] == rep.as_dict()["results"]

    def test_atomic_no_temp_left(self, tmp_path):
        write_report(Report("x", {"a": 1}, {"b": Fraction(1, 3)}), root=tmp_path)
        assert not [p for p in (tmp_path / "x").iterdir() if p.name.startswith(".tmp-")]

    def test_hash_depends_on_inputs(self, tmp_path):
        p1 = write_report(Report("x", {"a": 1}, {}), root=tmp_path)
        p2 = write_report(Report("x", {"a": 2}, {}), root=tmp_path)
        assert p1.name.split("-")[-1] != p2.name.split("-")[-1]


class TestConstants:
    def test_defaults(self):
        assert DEFAULTS["C0"] == 10 ** 46 and DEFAULTS["C1"] == 110 and DEFAULTS["C2"] == 10 ** 16
        assert DEFAULTS["C3"] == 28 and DEFAULTS["eps0"] == Fraction(1, 10 ** 9)
        assert DEFAULTS["eps1"] == Fraction(1, 10 ** 18) and DEFAULTS["eps2"] == Fraction(1, 10 ** 6)
        assert (DEFAULTS["eps3"], DEFAULTS["eps4"], DEFAULTS["eps5"]) == (Fraction(1, 100), Fraction(1, 10),
                                                                          Fraction(1, 4))

    @pytest.mark.parametrize("text,val", [("1e-9", Fraction(1, 10 ** 9)), ("0.1", Fraction(1, 10)),
                                          ("3/7", Fraction(3, 7)), ("2", Fraction(2))])
    def test_parse(self, text, val):
        assert parse_rational(text) == val

    def test_overrides(self):
        t = ConstantsTable.with_overrides(eps4="1/5", eps3=None)
        assert t["eps4"] == Fraction(1, 5) and t.overridden == ("eps4",) and t.eps3 == Fraction(1, 100)
        with pytest.raises(UsageError):
            ConstantsTable.with_overrides(eps9="1")
        with pytest.raises(UsageError):
            ConstantsTable.with_overrides(eps1="0")

    def test_to_jsonable(self):
        assert to_jsonable({"x": Fraction(2, 4), "y": {3, 1}, "z": Fraction(4)}) == {"x": "1/2", "y": [1, 3],
                                                                                    "z": "4"}
