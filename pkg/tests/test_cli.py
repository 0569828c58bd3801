"""CLI: exit codes, report schema, byte-identical determinism."""

import json

import pytest

from polyreg.cli import build_parser, run
from polyreg.polylog import sv_polylog


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


class TestExitCodes:
    def test_pass_is_zero(self, capsys):
        code, _ = run_json(capsys, ["golden"])
        assert code == 0

    def test_usage_error_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_usage_error_element_without_weight(self, capsys):
        code, _ = run_json(capsys, ["chain-check", "--element", "{f}_2 (x) g"])
        assert code == 2

    def test_usage_error_bad_radii(self, capsys):
        code, _ = run_json(
            capsys,
            ["loop-check", "--weight", "2", "--element", "(t+2)^t",
             "--radii", "1e-3,1e-2"],
        )
        assert code == 2

    def test_failing_suite_is_one(self, capsys):
        # the depth/valuation sampler at weight 4 hits both commutation
        # signs, so the single-sign residue suite reports a failure
        code, _ = run_json(capsys, ["residue", "--weight", "4", "--samples", "12"])
        assert code == 1

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0


class TestReports:
    def test_beta_row(self, capsys):
        code, out = run_json(capsys, ["beta", "--max-k", "8", "--max-p", "1", "--json"])
        assert code == 0
        manifest = json.loads(out)
        values = {c["input"]: c["value"] for r in manifest["results"] for c in r["cases"]}
        assert values["beta(6)"] == "2/945"
        assert values["beta(1)"] == "-1"
        assert values["beta(4)"] == "-1/45"

    def test_manifest_shape(self, capsys):
        code, out = run_json(capsys, ["golden", "--json"])
        manifest = json.loads(out)
        assert set(manifest) == {"command", "config", "versions", "results", "pass"}
        assert manifest["command"] == "golden"
        assert "golden" in manifest["versions"]
        for report in manifest["results"]:
            assert {"suite", "cases", "pass"} <= set(report)
            for case in report["cases"]:
                assert {"input", "pass"} <= set(case)

    def test_sv_polylog_value(self, capsys):
        code, out = run_json(
            capsys, ["sv-polylog", "--weight", "2", "--at", "1j", "--json"]
        )
        assert code == 0
        case = json.loads(out)["results"][0]["cases"][0]
        want = sv_polylog(2, 1j)
        assert abs(complex(case["value"][0], case["value"][1]) - want) < 1e-15

    def test_verify_identities(self, capsys):
        code, out = run_json(
            capsys,
            ["verify-identities", "--max-m", "10", "--max-n", "8",
             "--max-p", "8", "--max-k", "10", "--json"],
        )
        assert code == 0
        suites = {r["suite"] for r in json.loads(out)["results"]}
        assert suites == {"coefficient-rows", "proposition", "beta-recursion-grid"}

    def test_chain_check_element(self, capsys):
        code, out = run_json(
            capsys,
            ["chain-check", "--weight", "3", "--element", "{(1-t)/(1+t)}_2 (x) t",
             "--samples", "4", "--json"],
        )
        assert code == 0
        case = json.loads(out)["results"][0]["cases"][0]
        assert case["max_defect"] < 1e-6

    def test_loop_check_defaults(self, capsys):
        code, out = run_json(capsys, ["loop-check", "--json"])
        assert code == 0
        reports = json.loads(out)["results"]
        assert len(reports) == 3
        assert any("reversed" in r["cases"][0]["input"] for r in reports)


class TestDeterminism:
    def test_byte_identical(self, capsys):
        argv = ["chain-check", "--weight", "3", "--seed", "5",
                "--samples", "4", "--json"]
        _, first = run_json(capsys, argv)
        _, second = run_json(capsys, argv)
        assert first == second

    def test_seed_changes_nothing_symbolic(self, capsys):
        _, a = run_json(capsys, ["golden", "--json"])
        _, b = run_json(capsys, ["golden", "--json"])
        assert a == b


def test_parser_lists_all_subcommands():
    parser = build_parser()
    sub = next(
        a for a in parser._actions if isinstance(a, type(parser._subparsers._group_actions[0]))
    )
    assert set(sub.choices) == {
        "beta", "verify-identities", "sv-polylog", "polylog-symmetries",
        "residue", "chain-check", "top-check", "loop-check", "golden", "all",
    }
