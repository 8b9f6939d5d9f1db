import pytest

from pqa.errors import CircuitError, PqaError
from pqa.pipeline import ProgramPipeline
from pqa.syntax.types import Mode, UnitAt
from tests.helpers import SAMPLES


@pytest.fixture
def pipeline(sig):
    return ProgramPipeline(sig)


def test_check_result(pipeline):
    result = pipeline.check(SAMPLES / "unit.pqa")
    assert result.report.ok
    assert result.type == UnitAt(Mode.L)
    assert result.trace is None


def test_missing_file(pipeline):
    with pytest.raises(FileNotFoundError):
        pipeline.load(SAMPLES / "missing.pqa")


def test_fuel_must_be_positive(sig):
    with pytest.raises(ValueError):
        ProgramPipeline(sig, fuel=0)


def test_normalize_refuses_ill_typed_programs(pipeline):
    with pytest.raises(PqaError) as info:
        pipeline.normalize(SAMPLES / "dup.pqa")
    assert info.value.code == "E102"


def test_structural_pipeline_runs_duplication(sig):
    result = ProgramPipeline(sig, system="pqx").normalize(SAMPLES / "dup.pqa")
    assert result.trace.is_normal
    assert result.trace.steps == []


def test_circuit_result_carries_every_stage(pipeline):
    result = pipeline.circuit(SAMPLES / "circuit_e.pqa", emit="dot")
    assert result.trace.is_normal
    assert result.grammar.conforms
    assert [box.gate for box in result.diagram.gates] == ["CNOT", "H", "CNOT"]
    assert result.rendered.startswith("digraph circuit")


def test_unsuspended_circuits_are_drawn_directly(pipeline):
    result = pipeline.circuit(SAMPLES / "compose.pqa")
    assert [box.gate for box in result.diagram.gates] == ["H", "Z"]


def test_fuel_exhaustion_leaves_no_diagram(sig):
    result = ProgramPipeline(sig, fuel=1).circuit(SAMPLES / "compose.pqa")
    assert not result.trace.is_normal
    assert result.diagram is None
    assert result.rendered is None


def test_functional_types_are_not_drawn(pipeline):
    with pytest.raises(CircuitError):
        pipeline.circuit(SAMPLES / "unit.pqa")
