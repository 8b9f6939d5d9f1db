"""Neutral substitutions.

A neutral substitution replaces circuit variables by neutral circuits.
Unlike arbitrary substitutions it preserves classification and single
steps, which the harness checks on generated programs.
"""

from __future__ import annotations

from typing import Mapping, Optional

from pqa.dynamics.classify import FormClass, classify
from pqa.dynamics.context import TypedNeutralContext, cneu, ctp
from pqa.errors import DynamicsError, NeutralSubstError
from pqa.statics.checker import check_pqx
from pqa.syntax.names import FreshNames, free_circuit_vars, substitute
from pqa.syntax.printer import print_program
from pqa.syntax.signature import Signature
from pqa.syntax.terms import C, Program
from pqa.syntax.types import print_type


def _require_neutral(name: str, image: Program, pi) -> None:
    if image.color is not C:
        raise NeutralSubstError(f"image of {name} is not a circuit: {print_program(image)}")
    try:
        kind = classify(pi, image)
    except DynamicsError as exc:
        raise NeutralSubstError(f"image of {name}: {exc.message}") from None
    if kind is not FormClass.NEUTRAL:
        raise NeutralSubstError(
            f"image of {name} is {kind.value}, not neutral: {print_program(image)}"
        )


def apply_neutral_subst(
    sigma: Mapping[str, Program],
    p: Program,
    fresh: Optional[FreshNames] = None,
) -> Program:
    """Apply *sigma* to *p* simultaneously and without capture.

    Raises
    ------
    NeutralSubstError
        If an image is not a neutral circuit over its own free variables.
    """
    for name, image in sigma.items():
        _require_neutral(name, image, free_circuit_vars(image))
    return substitute(p, sigma, fresh)


def check_neutral_subst(
    sig: Signature,
    psi: TypedNeutralContext,
    sigma: Mapping[str, Program],
    phi: TypedNeutralContext,
) -> None:
    """Validate ``sigma`` as a neutral substitution from *psi* to *phi*.

    Every variable of *phi* must be mapped to a circuit that is neutral
    under the names of *psi* and has the variable's type under *psi*.
    """
    expected = [name for name, _ in phi]
    if sorted(sigma) != sorted(expected):
        raise NeutralSubstError(
            f"substitution domain {sorted(sigma)} differs from {sorted(expected)}"
        )
    pi = cneu(psi)
    for name, ty in phi:
        image = sigma[name]
        _require_neutral(name, image, pi)
        report = check_pqx(sig, ctp(psi), image, ty)
        if not report.ok:
            raise NeutralSubstError(
                f"image of {name} does not have type {print_type(ty)}: {report.error.message}"
            )
