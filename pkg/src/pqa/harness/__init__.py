from pqa.harness.generator import (
    GenConfig,
    Generated,
    Site,
    charge,
    gen_well_typed,
    generate,
    minimal_term,
    sample_case,
)
from pqa.harness.mutate import MUTATIONS, mutate
from pqa.harness.oracle import brute_force_split_check
from pqa.harness.shrink import ShrinkResult, shrink
from pqa.harness.suite import (
    PROPERTIES,
    Counterexample,
    Property,
    PropertyResult,
    SuiteReport,
    run_case,
    run_suite,
)

__all__ = [
    "Counterexample",
    "GenConfig",
    "Generated",
    "MUTATIONS",
    "PROPERTIES",
    "Property",
    "PropertyResult",
    "ShrinkResult",
    "Site",
    "SuiteReport",
    "brute_force_split_check",
    "charge",
    "gen_well_typed",
    "generate",
    "minimal_term",
    "mutate",
    "run_case",
    "run_suite",
    "sample_case",
    "shrink",
]
