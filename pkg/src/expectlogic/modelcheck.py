"""Satisfaction of expectation, likelihood and gamble-inequality formulas."""

import logging
from dataclasses import dataclass
from fractions import Fraction

from expectlogic.errors import KindMismatchError
from expectlogic.expectation import (
    expect_bounds,
    expect_choquet,
    expect_poss,
    expect_prob,
    negated,
    world_values,
)
from expectlogic.formulas import (
    ExpectationInequality,
    Formula,
    Gamble,
    GambleInequality,
    LikelihoodInequality,
    evaluate,
    format_formula,
    holds,
    literals,
    map_literals,
)
from expectlogic.models import (
    BeliefStructure,
    CredalStructure,
    PossibilityStructure,
    ProbabilityStructure,
    Structure,
    event_weight,
)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


@dataclass(frozen=True)
class CheckResult:
    verdict: bool
    # (basic inequality, evaluated left-hand side) in first-seen order
    trace: tuple[tuple[Formula, Fraction], ...]

    def trace_lines(self) -> list[str]:
        return [
            f"{format_formula(literal)}  [lhs = {value}]" for literal, value in self.trace
        ]


def eval_term(structure: Structure, gamble: Gamble) -> Fraction:
    """Value of e(gamble); credal structures use the lower expectation."""
    if isinstance(structure, ProbabilityStructure):
        return expect_prob(structure, gamble)
    if isinstance(structure, CredalStructure):
        return expect_bounds(structure, gamble).lower
    if isinstance(structure, BeliefStructure):
        return expect_choquet(structure, gamble, "bel")
    if isinstance(structure, PossibilityStructure):
        return expect_poss(structure, gamble)
    msg = "Plain structures have no expectation; e(...) needs an uncertainty measure."
    raise KindMismatchError(msg)


def eval_likelihood(structure: Structure, formula: Formula) -> Fraction:
    """Value of l(formula): mu, lower probability, Bel or Poss of its extension."""
    if not isinstance(
        structure,
        (ProbabilityStructure, CredalStructure, BeliefStructure, PossibilityStructure),
    ):
        msg = "Plain structures have no likelihood; l(...) needs an uncertainty measure."
        raise KindMismatchError(msg)
    extension = [w.id for w in structure.worlds if holds(formula, w.valuation())]
    mode = "lower" if isinstance(structure, CredalStructure) else "point"
    return event_weight(structure, extension, mode)


def _literal_value(structure: Structure, literal) -> tuple[Fraction, bool]:
    if isinstance(literal, ExpectationInequality):
        lhs = sum((a * eval_term(structure, g) for a, g in literal.terms), ZERO)
        return lhs, lhs >= literal.bound
    if isinstance(literal, LikelihoodInequality):
        lhs = sum((a * eval_likelihood(structure, phi) for a, phi in literal.terms), ZERO)
        return lhs, lhs >= literal.bound
    if isinstance(literal, GambleInequality):
        left = world_values(structure.worlds, literal.left)
        right = world_values(structure.worlds, literal.right)
        slack = min(left[wid] - right[wid] for wid in left)
        return slack, slack >= 0
    msg = (
        f'"{format_formula(literal)}" is not an inequality; propositional formulas '
        "are evaluated at worlds, not at structures."
    )
    raise KindMismatchError(msg)


def check(structure: Structure, formula: Formula) -> CheckResult:
    """Decide structure |= formula and report every basic inequality's value.

    For gamble inequalities the reported value is the smallest difference
    left - right over all worlds.
    """
    values, truth = [], {}
    for literal in literals(formula):
        value, holds_here = _literal_value(structure, literal)
        values.append((literal, value))
        truth[literal] = holds_here
    verdict = evaluate(formula, truth.__getitem__)
    logger.debug("-> Checked %i basic inequalities, verdict %s", len(values), verdict)
    return CheckResult(verdict, tuple(values))


def upper_expectation_formula(formula: Formula) -> Formula:
    """Read every e(...) of the formula as an upper expectation.

    a E^(gamma) = -a E_(-gamma), so each term (a, gamma) becomes (-a, -gamma)
    and the rewritten formula is checked with the usual lower reading.
    """

    def rewrite(literal):
        if isinstance(literal, ExpectationInequality):
            return ExpectationInequality(
                tuple((-a, negated(g)) for a, g in literal.terms), literal.bound
            )
        return literal

    return map_literals(formula, rewrite)
