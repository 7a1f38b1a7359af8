"""CLI subcommands, exit codes and report output modes."""

import json
from pathlib import Path

import pytest

from mechbench.cli import run_cli
from mechbench.document import parse_instance

FIXTURES = Path(__file__).parent / "fixtures"
G1 = str(FIXTURES / "g1.json")


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out), err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", "--input", G1)
    assert code == 0
    assert "valid" in out


def test_validate_reports_violations_and_exits_2(capsys):
    code, payload, _ = run_json(
        capsys, "validate", "--input", str(FIXTURES / "bad_prior.json")
    )
    assert code == 2
    assert payload["valid"] is False
    assert "prior sums to 11/12" in payload["violations"]


def test_missing_input_file_is_usage_error(capsys):
    code, _, err = run(capsys, "validate", "--input", "no-such-file.json")
    assert code == 1
    assert "cannot read" in err


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 1


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run(capsys, "validate", "--input", G1, "--wat")
    assert code == 1


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_bne_g1(capsys):
    code, payload, _ = run_json(capsys, "bne", "--input", G1)
    assert code == 0
    assert payload["search_space"] == 4
    assert payload["count"] == 1
    (cert,) = payload["certificates"]
    assert cert["profile"] == [{"L": "a", "H": "b"}, {"t": "c"}]


def test_bne_cap_exceeded_exits_3(capsys):
    code, _, err = run(capsys, "bne", "--input", G1, "--max-profiles", "1")
    assert code == 3
    assert "exceeding the cap" in err


def test_implements_with_fixture_scf(capsys):
    code, payload, _ = run_json(capsys, "implements", "--input", G1)
    assert code == 0
    assert payload["implements"] is True
    assert len(payload["witnesses"]) == 1


def test_implements_requires_scf_section(capsys):
    code, _, err = run(
        capsys, "implements", "--input", str(FIXTURES / "pennies.json")
    )
    assert code == 2
    assert "no scf section" in err


def test_direct_writes_documents_that_pass_truthful(capsys, tmp_path):
    out_dir = tmp_path / "direct"
    code, out, _ = run(capsys, "direct", "--input", G1, "--output", str(out_dir))
    assert code == 0
    emitted = sorted(out_dir.glob("*.json"))
    assert [p.name for p in emitted] == ["direct-000.json"]

    doc = parse_instance(emitted[0].read_text(encoding="utf-8"))
    assert doc.mechanism.strategy_sets == doc.environment.type_spaces

    code, payload, _ = run_json(capsys, "truthful", "--input", str(emitted[0]))
    assert code == 0
    assert payload["truthful"] is True


def test_direct_embeds_documents_without_output_dir(capsys):
    code, payload, _ = run_json(capsys, "direct", "--input", G1)
    assert code == 0
    assert payload["count"] == 1
    embedded = payload["documents"][0]["document"]
    assert embedded["format"] == "mechbench/1"
    assert embedded["mechanism"]["strategies"] == [["L", "H"], ["t"]]


def test_truthful_rejects_non_direct_instance(capsys):
    code, _, err = run(capsys, "truthful", "--input", G1)
    assert code == 2
    assert "not a direct mechanism" in err


def test_truthful_counterexample_exits_4(capsys, tmp_path):
    # Direct instance whose table rewards misreporting for both types.
    doc = {
        "format": "mechbench/1",
        "environment": {
            "types": [["L", "H"]],
            "outcomes": ["x0", "x1"],
            "prior": {"L": "1/2", "H": "1/2"},
            "utilities": [
                {"x0": {"L": "1", "H": "0"}, "x1": {"L": "0", "H": "1"}}
            ],
        },
        "mechanism": {
            "strategy_format": "oral",
            "strategies": [["L", "H"]],
            "outcome_fn": {"L": "x1", "H": "x0"},
        },
    }
    path = tmp_path / "lying_pays.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    code, payload, _ = run_json(capsys, "truthful", "--input", str(path))
    assert code == 4
    assert payload["truthful"] is False
    assert payload["counterexample"] == {"agent": 1, "type": "L", "misreport": "H"}


def test_verify_rp_g1(capsys):
    code, payload, _ = run_json(capsys, "verify-rp", "--input", G1)
    assert code == 0
    assert payload["all_hold"] is True
    assert payload["count"] == 1
    report = payload["reports"][0]
    assert report["truthful_certificate"] is not None
    assert report["counterexample"] is None
    assert report["outcome_preserved"] is True


def test_verify_rp_zero_marginal_fixture(capsys):
    code, payload, _ = run_json(
        capsys, "verify-rp", "--input", str(FIXTURES / "zero_marginal.json")
    )
    assert code == 0
    assert payload["all_hold"] is True
    for report in payload["reports"]:
        assert report["skipped_types"] == [{"agent": 1, "type": "H"}]


def test_energy_worked_example(capsys):
    code, payload, _ = run_json(
        capsys, "energy", "--agents", "3",
        "--ea", "5", "--em", "1", "--esend", "1/2", "--eg", "2",
    )
    assert code == 0
    matrix = payload["matrix"]
    assert matrix["oral"]["indirect"] == {"agents": "9/2", "designer": "2"}
    assert matrix["oral"]["direct"] == {"agents": "3/2", "designer": "5"}
    assert matrix["laborious"]["indirect"] == {"agents": "15", "designer": "2"}
    assert matrix["laborious"]["direct"] == {"agents": "3/2", "designer": "17"}
    assert payload["feasibility"] is None
    assert {p["strategy_format"] for p in payload["preference"]} == {
        "oral", "laborious",
    }


def test_energy_reads_document_and_budget(capsys):
    code, payload, _ = run_json(capsys, "energy", "--input", G1)
    assert code == 0
    assert payload["agents"] == 2  # from the fixture environment
    (verdict,) = payload["feasibility"]  # budget 15, oral format from doc
    assert verdict["strategy_format"] == "oral"
    assert verdict["covers_agents_indirect"] is True


def test_energy_flags_override_document(capsys):
    code, payload, _ = run_json(
        capsys, "energy", "--input", G1, "--agents", "3",
        "--strategy-format", "laborious", "--budget", "15",
    )
    assert code == 0
    (verdict,) = payload["feasibility"]
    assert verdict["strategy_format"] == "laborious"
    assert verdict["agents_indirect_cost"] == "15"
    assert verdict["covers_agents_indirect"] is True
    assert verdict["designer_direct_cost"] == "17"
    assert verdict["covers_designer_direct"] is False


def test_energy_without_agents_or_input_is_usage_error(capsys):
    code, _, err = run(capsys, "energy", "--ea", "1")
    assert code == 1
    assert "--agents" in err


def test_energy_rejects_malformed_rational_flag(capsys):
    code, _, err = run(capsys, "energy", "--agents", "1", "--ea", "0.5")
    assert code == 1


def test_fuzz_clean_run(capsys, tmp_path):
    out_dir = tmp_path / "failures"
    code, payload, _ = run_json(
        capsys, "fuzz", "--count", "25", "--seed", "42",
        "--output", str(out_dir),
    )
    assert code == 0
    assert payload["failures"] == []
    assert payload["count"] == 25
    assert not out_dir.exists()  # only created when something fails


def test_gen_is_deterministic_and_valid(capsys, tmp_path):
    code1, out1, _ = run(capsys, "gen", "--seed", "7")
    code2, out2, _ = run(capsys, "gen", "--seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2
    doc = parse_instance(out1)
    assert doc.environment.agent_count >= 1

    target = tmp_path / "gen.json"
    code3, _, _ = run(capsys, "gen", "--seed", "7", "--output", str(target))
    assert code3 == 0
    assert target.read_text(encoding="utf-8") == out1


def test_gen_respects_knobs(capsys):
    code, out, _ = run(
        capsys, "gen", "--seed", "3",
        "--max-agents", "1", "--max-types", "2", "--max-strategies", "2",
        "--max-outcomes", "2", "--prior-mode", "independent-uniform",
    )
    assert code == 0
    doc = parse_instance(out)
    assert doc.environment.agent_count == 1
    assert len(doc.environment.outcomes) == 2


def test_text_and_json_carry_identical_energy_information(capsys):
    args = (
        "energy", "--agents", "3",
        "--ea", "5", "--em", "1", "--esend", "1/2", "--eg", "2",
        "--budget", "15",
    )
    _, payload, _ = run_json(capsys, *args)
    _, text, _ = run(capsys, *args)
    for cell in ("9/2", "3/2", "15", "17"):
        assert cell in text
    for verdict in payload["feasibility"]:
        assert verdict["designer_budget"] in text
    for pref in payload["preference"]:
        assert pref["commentary"] in text


def test_report_output_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "bne", "--input", G1, "--format", "json",
        "--output", str(target),
    )
    assert code == 0
    assert out == ""
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert payload["count"] == 1
