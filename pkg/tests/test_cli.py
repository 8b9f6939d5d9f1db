import json

import pytest
from click.testing import CliRunner

from pqa.main import cli
from tests.helpers import SAMPLES


def run(*args):
    return CliRunner().invoke(cli, [str(a) for a in args])


def test_check_prints_the_type():
    result = run("check", SAMPLES / "unit.pqa")
    assert result.exit_code == 0
    assert result.output.strip() == "TYPE: unit@l"


def test_structural_system_accepts_duplication():
    result = run("check", "--system", "pqx", SAMPLES / "dup.pqa")
    assert result.exit_code == 0
    assert result.output.startswith("TYPE: ")


def test_linear_system_rejects_duplication():
    result = run("check", SAMPLES / "dup.pqa")
    assert result.exit_code == 1
    assert "error[E102]" in result.output
    assert "dup.pqa:" in result.output


def test_normalize_prints_the_normal_form():
    result = run("normalize", SAMPLES / "compose.pqa")
    assert result.exit_code == 0
    assert "#Z (#H x)" in result.output


def test_normalize_trace():
    result = run("normalize", "--trace", SAMPLES / "compose.pqa")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0].startswith("STEP 1 cstep/force/1: ")
    assert sum(line.startswith("STEP ") for line in lines) == len(lines) - 1


def test_ill_typed_programs_are_not_run():
    result = run("normalize", SAMPLES / "omega.pqa")
    assert result.exit_code == 1
    assert "error[E" in result.output


def test_unsafe_divergence_exhausts_fuel():
    result = run("normalize", "--unsafe", "--fuel", "20", SAMPLES / "omega.pqa")
    assert result.exit_code == 2
    assert "fuel exhausted after 20 steps" in result.output


def test_circuit_ascii():
    result = run("circuit", SAMPLES / "circuit_e.pqa")
    assert result.exit_code == 0
    assert "[CNOT]" in result.output
    assert result.output.splitlines()[0].startswith("x1")


def test_circuit_dot():
    result = run("circuit", "--emit", "dot", SAMPLES / "circuit_e.pqa")
    assert result.exit_code == 0
    assert result.output.startswith("digraph circuit {")
    assert 'label="CNOT"' in result.output


def test_empty_circuit_draws_nothing():
    result = run("circuit", SAMPLES / "empty.pqa")
    assert result.exit_code == 0
    assert result.output.strip() == ""


def test_functional_programs_have_no_circuit():
    result = run("circuit", SAMPLES / "unit.pqa")
    assert result.exit_code == 1
    assert "error[E301]" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ("check", "--bogus", SAMPLES / "unit.pqa"),
        ("check", SAMPLES / "missing.pqa"),
        ("check", "--system", "stlc", SAMPLES / "unit.pqa"),
        ("normalize", "--fuel", "0", SAMPLES / "unit.pqa"),
        ("frobnicate",),
    ],
)
def test_usage_errors_exit_with_status_3(args):
    assert run(*args).exit_code == 3


def test_fuzz_writes_a_json_report(tmp_path):
    report = tmp_path / "out" / "report.json"
    result = run(
        "fuzz", "--count", "2", "--depth", "3", "--seed", "0", "--fuel", "500", "--report", report
    )
    assert result.exit_code in (0, 1)
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["seed"] == 0
    assert data["count"] == 2
    assert data["max_depth"] == 3
    assert result.exit_code == (0 if data["ok"] else 1)
    assert "generator soundness" in result.output


def test_fuzz_prints_the_report_without_a_path():
    result = run("fuzz", "--count", "1", "--depth", "3", "--fuel", "500")
    assert '"properties"' in result.output
