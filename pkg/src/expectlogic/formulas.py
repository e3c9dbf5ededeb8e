"""Abstract syntax of propositional formulas, gambles and the three inequality
languages, with the canonical printer and Boolean helpers.

Boolean connectives are shared between the propositional level and the level
of inequality formulas: a propositional formula is a connective tree over
Prop/TrueConst leaves, an expectation formula is a connective tree over
ExpectationInequality leaves, and so on. Disjunction and implication are kept
as nodes so that printed output stays readable; semantically they are the
derived forms !(!a & !b) and !(a & !b).
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Union

from expectlogic.errors import UnassignedPropositionError
from expectlogic.utils import format_rational

logger = logging.getLogger(__name__)

# Binding strength used by the printer.
PREC_IMPLIES, PREC_OR, PREC_AND, PREC_NOT, PREC_ATOM = 1, 2, 3, 4, 5


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class TrueConst:
    pass


@dataclass(frozen=True)
class Not:
    arg: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


TRUE = TrueConst()
FALSE = Not(TRUE)


@dataclass(frozen=True)
class Gamble:
    """Linear combination b1 phi1 + ... + bn phin of propositional formulas."""

    terms: tuple[tuple[Fraction, Formula], ...] = ()


@dataclass(frozen=True)
class ExpectationInequality:
    """a1 e(gamma1) + ... + ak e(gammak) >= bound"""

    terms: tuple[tuple[Fraction, Gamble], ...]
    bound: Fraction


@dataclass(frozen=True)
class LikelihoodInequality:
    """a1 l(phi1) + ... + ak l(phik) >= bound"""

    terms: tuple[tuple[Fraction, Formula], ...]
    bound: Fraction


@dataclass(frozen=True)
class GambleInequality:
    """left >= right, pointwise in every world."""

    left: Gamble
    right: Gamble


CONNECTIVES = (Not, And, Or, Implies)
INEQUALITIES = (ExpectationInequality, LikelihoodInequality, GambleInequality)

Formula = Union[
    Prop,
    TrueConst,
    Not,
    And,
    Or,
    Implies,
    ExpectationInequality,
    LikelihoodInequality,
    GambleInequality,
]


def indicator(formula: Formula, coef: Fraction | int = 1) -> Gamble:
    return Gamble(((Fraction(coef), formula),))


def conjunction(formulas: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is true."""
    if not formulas:
        return TRUE
    result = formulas[0]
    for formula in formulas[1:]:
        result = And(result, formula)
    return result


def disjunction(formulas: Sequence[Formula]) -> Formula:
    if not formulas:
        return FALSE
    result = formulas[0]
    for formula in formulas[1:]:
        result = Or(result, formula)
    return result


def negate_terms(terms):
    return tuple((-coef, item) for coef, item in terms)


# ===== traversal =====


def _children(node) -> tuple:
    if isinstance(node, Not):
        return (node.arg,)
    if isinstance(node, (And, Or, Implies)):
        return (node.left, node.right)
    if isinstance(node, Gamble):
        return tuple(formula for _, formula in node.terms)
    if isinstance(node, ExpectationInequality):
        return tuple(gamble for _, gamble in node.terms)
    if isinstance(node, LikelihoodInequality):
        return tuple(formula for _, formula in node.terms)
    if isinstance(node, GambleInequality):
        return (node.left, node.right)
    return ()


def propositions(*nodes) -> tuple[str, ...]:
    """Sorted names of all primitive propositions mentioned."""
    names = set()
    stack = list(nodes)
    while stack:
        node = stack.pop()
        if isinstance(node, Prop):
            names.add(node.name)
        else:
            stack.extend(_children(node))
    return tuple(sorted(names))


def literals(formula: Formula) -> list:
    """Distinct non-connective leaves of a Boolean tree, in first-seen order."""
    seen = {}

    def walk(node):
        if isinstance(node, CONNECTIVES):
            for child in _children(node):
                walk(child)
        elif not isinstance(node, TrueConst):
            seen.setdefault(node, None)

    walk(formula)
    return list(seen)


def expectation_terms(formula: Formula) -> list[Gamble]:
    """Distinct gambles under e(...) in first-seen order."""
    seen = {}
    for literal in literals(formula):
        if isinstance(literal, ExpectationInequality):
            for _, gamble in literal.terms:
                seen.setdefault(gamble, None)
    return list(seen)


def map_literals(formula: Formula, func: Callable) -> Formula:
    """Rebuild the Boolean skeleton with every literal replaced by func(literal)."""
    if isinstance(formula, Not):
        return Not(map_literals(formula.arg, func))
    if isinstance(formula, (And, Or, Implies)):
        return type(formula)(map_literals(formula.left, func), map_literals(formula.right, func))
    if isinstance(formula, TrueConst):
        return formula
    return func(formula)


def formula_size(node) -> int:
    """Number of syntax nodes; coefficients count as one node each."""
    if isinstance(node, (Prop, TrueConst)):
        return 1
    if isinstance(node, (Gamble, ExpectationInequality, LikelihoodInequality)):
        extra = 0 if isinstance(node, Gamble) else 1
        return extra + sum(1 + formula_size(child) for child in _children(node))
    return 1 + sum(formula_size(child) for child in _children(node))


# ===== Boolean evaluation =====


def holds(formula: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth of a propositional formula under a truth assignment."""
    if isinstance(formula, Prop):
        try:
            return bool(assignment[formula.name])
        except KeyError as exc:
            msg = f'Proposition "{formula.name}" is not assigned a truth value.'
            raise UnassignedPropositionError(msg) from exc
    if isinstance(formula, TrueConst):
        return True
    return evaluate(formula, lambda leaf: holds(leaf, assignment))


def evaluate(formula: Formula, leaf_truth: Callable[[Formula], bool]) -> bool:
    """Evaluate the Boolean skeleton, delegating leaves to leaf_truth."""
    if isinstance(formula, Not):
        return not evaluate(formula.arg, leaf_truth)
    if isinstance(formula, And):
        left = evaluate(formula.left, leaf_truth)
        right = evaluate(formula.right, leaf_truth)
        return left and right
    if isinstance(formula, Or):
        left = evaluate(formula.left, leaf_truth)
        right = evaluate(formula.right, leaf_truth)
        return left or right
    if isinstance(formula, Implies):
        left = evaluate(formula.left, leaf_truth)
        right = evaluate(formula.right, leaf_truth)
        return (not left) or right
    if isinstance(formula, TrueConst):
        return True
    return leaf_truth(formula)


def partial_evaluate(formula: Formula, assignment: Mapping) -> bool | None:
    """Three-valued (Kleene) evaluation; None where unassigned leaves decide."""
    if isinstance(formula, TrueConst):
        return True
    if isinstance(formula, Not):
        value = partial_evaluate(formula.arg, assignment)
        return None if value is None else not value
    if isinstance(formula, (And, Or, Implies)):
        left = partial_evaluate(formula.left, assignment)
        right = partial_evaluate(formula.right, assignment)
        if isinstance(formula, Implies):
            left = None if left is None else not left
        if isinstance(formula, And):
            if left is False or right is False:
                return False
            return True if left and right else None
        if left is True or right is True:
            return True
        return False if left is False and right is False else None
    return assignment.get(formula)


def branches(formula: Formula, leaves: Sequence | None = None) -> Iterator[dict]:
    """Branch-and-prune over leaf truth values.

    Yields mutually exclusive partial assignments, each of which makes the
    formula true whatever the unassigned leaves are. Together they cover every
    model of the Boolean skeleton.
    """
    leaves = literals(formula) if leaves is None else list(leaves)
    assignment = {}

    def walk(index):
        value = partial_evaluate(formula, assignment)
        if value is True:
            yield dict(assignment)
            return
        if value is False or index == len(leaves):
            return
        leaf = leaves[index]
        for truth in (True, False):
            assignment[leaf] = truth
            yield from walk(index + 1)
            del assignment[leaf]

    yield from walk(0)


def falsifying_assignment(formula: Formula, leaves: Sequence | None = None):
    """First complete leaf assignment making the formula false, or None."""
    leaves = literals(formula) if leaves is None else list(leaves)
    for partial in branches(Not(formula), leaves):
        return {leaf: partial.get(leaf, False) for leaf in leaves}
    return None


def all_assignments(names: Sequence[str]) -> Iterator[dict[str, bool]]:
    for values in product((True, False), repeat=len(names)):
        yield dict(zip(names, values))


# ===== printing =====


def _wrap(text_prec: tuple[str, int], min_prec: int) -> str:
    text, prec = text_prec
    return f"({text})" if prec < min_prec else text


def _binary(node, sub, sep: str) -> tuple[str, int]:
    if isinstance(node, Implies):
        # right associative
        left = _wrap(sub(node.left), PREC_IMPLIES + 1)
        right = _wrap(sub(node.right), PREC_IMPLIES)
        return f"{left}{sep}->{sep}{right}", PREC_IMPLIES
    prec, symbol = (PREC_AND, "&") if isinstance(node, And) else (PREC_OR, "|")
    left = _wrap(sub(node.left), prec)
    right = _wrap(sub(node.right), prec + 1)
    return f"{left}{sep}{symbol}{sep}{right}", prec


def _prop_text(formula: Formula) -> tuple[str, int]:
    if isinstance(formula, Prop):
        return formula.name, PREC_ATOM
    if isinstance(formula, TrueConst):
        return "true", PREC_ATOM
    if formula == FALSE:
        return "false", PREC_ATOM
    if isinstance(formula, Not):
        return "!" + _wrap(_prop_text(formula.arg), PREC_NOT), PREC_NOT
    if isinstance(formula, (And, Or, Implies)):
        return _binary(formula, _prop_text, "")
    msg = f"Not a propositional formula: {formula!r}"
    raise TypeError(msg)


def _sum_text(terms, item_text: Callable) -> str:
    parts = []
    for index, (coef, item) in enumerate(terms):
        if index == 0:
            parts.append(f"{format_rational(coef)} {item_text(item)}")
        elif coef < 0:
            parts.append(f" - {format_rational(-coef)} {item_text(item)}")
        else:
            parts.append(f" + {format_rational(coef)} {item_text(item)}")
    return "".join(parts)


def gamble_text(gamble: Gamble) -> str:
    if not gamble.terms:
        return "0"
    return _sum_text(gamble.terms, lambda formula: _prop_text(formula)[0])


def _literal_text(node) -> tuple[str, int]:
    if isinstance(node, ExpectationInequality):
        lhs = _sum_text(node.terms, lambda gamble: f"e({gamble_text(gamble)})")
        return f"{lhs} >= {format_rational(node.bound)}", PREC_ATOM
    if isinstance(node, LikelihoodInequality):
        lhs = _sum_text(node.terms, lambda formula: f"l({_prop_text(formula)[0]})")
        return f"{lhs} >= {format_rational(node.bound)}", PREC_ATOM
    # bare propositional connectives in gambles force parentheses under
    # Boolean connectives
    return f"{gamble_text(node.left)} >= {gamble_text(node.right)}", 0


def _bool_text(formula: Formula) -> tuple[str, int]:
    if isinstance(formula, Not):
        return f"!({_bool_text(formula.arg)[0]})", PREC_ATOM
    if isinstance(formula, (And, Or, Implies)):
        return _binary(formula, _bool_text, " ")
    return _literal_text(formula)


def is_propositional(node) -> bool:
    if isinstance(node, (Prop, TrueConst)):
        return True
    if isinstance(node, CONNECTIVES):
        return all(is_propositional(child) for child in _children(node))
    return False


def format_formula(node) -> str:
    """Canonical text of any formula or gamble; the parser reads it back."""
    if isinstance(node, Gamble):
        return gamble_text(node)
    if is_propositional(node):
        return _prop_text(node)[0]
    return _bool_text(node)[0]
