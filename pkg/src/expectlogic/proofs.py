"""Line-by-line checking of derivations in the axiom systems.

Systems and their axioms:

axprob  Taut, MP, Ineq, E1-E5
axlp    Taut, MP, Ineq, E5-E8
axbel   Taut, MP, Ineq, E5, E7-E10
axposs  Taut, MP, Ineq, E5, E7, E8, E10, E11
axg     Taut, MP, Ineq, G1, G2

Taut and Ineq are decided (truth table over the basic inequalities, linear
programming over the e-terms); E5, E10, G1 and G2 discharge their side
conditions with the gamble checker or a propositional truth table. Schema
matching is syntactic up to scaling an inequality by its first coefficient.
"""

import json
import logging
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any

import networkx as nx
from pydantic import BaseModel, ValidationError, validator

from expectlogic import config
from expectlogic.dag_util import dag_from_premises, dag_to_indented_text, unreachable_nodes
from expectlogic.decide import valid
from expectlogic.errors import (
    BudgetExceededError,
    ExpectLogicError,
    FormulaSyntaxError,
    ProofFormatError,
)
from expectlogic.formulas import (
    FALSE,
    TRUE,
    And,
    ExpectationInequality,
    Formula,
    Gamble,
    GambleInequality,
    Implies,
    Not,
    Or,
    all_assignments,
    branches,
    falsifying_assignment,
    format_formula,
    holds,
    literals,
    negate_terms,
    propositions,
)
from expectlogic.gambles import gamble_formula_check, gamble_join_all, gambles_equal
from expectlogic.lp import LinearSystem, lp_feasible
from expectlogic.parser import parse
from expectlogic.utils import format_rational, parse_rational

logger = logging.getLogger(__name__)

RULES = ("Taut", "MP", "Ineq")
AXIOMS = ("E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8", "E9", "E10", "E11", "G1", "G2")

SYSTEMS = {
    "axprob": ("AX^prob", {"Taut", "MP", "Ineq", "E1", "E2", "E3", "E4", "E5"}),
    "axlp": ("AX^lp", {"Taut", "MP", "Ineq", "E5", "E6", "E7", "E8"}),
    "axbel": ("AX^bel", {"Taut", "MP", "Ineq", "E5", "E7", "E8", "E9", "E10"}),
    "axposs": ("AX^poss", {"Taut", "MP", "Ineq", "E5", "E7", "E8", "E10", "E11"}),
    "axg": ("AX^g", {"Taut", "MP", "Ineq", "G1", "G2"}),
}

# semantics in which each system is sound
SYSTEM_SEMANTICS = {"axprob": "prob", "axlp": "lp", "axbel": "bel", "axposs": "poss", "axg": "g"}

JUSTIFICATION = re.compile(
    r"^\s*(?:(?P<rule>Taut|Ineq|E1[01]|E[1-9]|G[12])|MP\s+(?P<i>\d+)\s+(?P<j>\d+))\s*$"
)

# metavariables a schema binds; E9 and E10 take numbered families
METAVARIABLES = {
    "E1": ("gamma1", "gamma2"),
    "E2": ("a", "phi"),
    "E3": (),
    "E4": (),
    "E5": ("gamma1", "gamma2", "side"),
    "E6": ("gamma1", "gamma2"),
    "E7": ("a", "b", "gamma"),
    "E8": ("a", "b", "gamma"),
    "E9": re.compile(r"^gamma[1-9]\d*$"),
    "E10": re.compile(r"^(phi|b)[1-9]\d*$"),
    "E11": ("phi1", "phi2"),
    "G1": ("phi", "psi"),
    "G2": ("phi", "psi"),
}


# ===== documents =====


class ProofLine(BaseModel):
    formula: str
    by: str
    bindings: dict[str, str] | None = None

    class Config:
        extra = "forbid"

    @validator("by")
    def justification_syntax(cls, value):
        if not JUSTIFICATION.match(value):
            msg = f'unknown justification "{value}", expected an axiom id, Taut, Ineq or "MP i j"'
            raise ValueError(msg)
        return value.strip()


class Derivation(BaseModel):
    system: str
    lines: list[ProofLine]

    @validator("system")
    def known_system(cls, value):
        if value not in SYSTEMS:
            msg = f'unknown system "{value}", expected one of {", ".join(SYSTEMS)}'
            raise ValueError(msg)
        return value


def load_derivation(document: str, system: str) -> Derivation:
    """Read a proof document: a JSON list of {formula, by, bindings?} objects."""
    try:
        lines = json.loads(document)
    except json.JSONDecodeError as exc:
        msg = f"Proof document is not valid JSON: {exc}"
        raise ProofFormatError(msg) from exc
    try:
        return Derivation(system=system, lines=lines)
    except ValidationError as exc:
        msg = f"Malformed proof document:\n{exc}"
        raise ProofFormatError(msg) from exc


# ===== results =====


@dataclass(frozen=True)
class AxiomMatch:
    ok: bool
    reason: str | None = None
    message: str = ""
    # falsifying assignment, LP witness, countermodel or mismatch position
    detail: Any = None
    bound: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Rejection:
    line: int
    reason: str
    message: str
    detail: Any = None

    def __str__(self):
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class ProofResult:
    system: str
    accepted: bool
    rejection: Rejection | None
    formulas: tuple[Formula, ...]
    justifications: tuple[str, ...]
    graph: nx.DiGraph
    unused: tuple[int, ...] = ()

    @property
    def conclusion(self) -> Formula | None:
        return self.formulas[-1] if self.accepted and self.formulas else None

    def tree_text(self) -> list[str]:
        """The derivation of the last line as an indented tree."""
        if not self.formulas:
            return []

        def label(line):
            return f"{line}. {format_formula(self.formulas[line - 1])}  [{self.justifications[line - 1]}]"

        return dag_to_indented_text(self.graph, len(self.formulas), label=label)


class _NoMatch(Exception):
    def __init__(self, reason: str, message: str, detail: Any = None):
        super().__init__(message)
        self.reason = reason
        self.message = message
        self.detail = detail


# ===== side conditions =====


def _propositional_countermodel(formula: Formula) -> dict[str, bool] | None:
    props = propositions(formula)
    if len(props) > config.BUDGETS.max_taut_vars:
        msg = f"Truth table over {len(props)} propositions exceeds --max-taut-vars."
        logger.error(msg)
        raise BudgetExceededError(msg)
    for assignment in all_assignments(props):
        if not holds(formula, assignment):
            return assignment
    return None


def _require_tautology(formula: Formula, reason: str, what: str):
    counter = _propositional_countermodel(formula)
    if counter is not None:
        msg = f'Side condition fails: "{format_formula(formula)}" is not a tautology ({what}).'
        raise _NoMatch(reason, msg, counter)


def is_tautology(formula: Formula) -> tuple[bool, dict | None]:
    """Propositional tautology over the basic inequalities as variables."""
    leaves = literals(formula)
    if len(leaves) > config.BUDGETS.max_taut_vars:
        msg = f"Truth table over {len(leaves)} basic inequalities exceeds --max-taut-vars."
        logger.error(msg)
        raise BudgetExceededError(msg)
    counter = falsifying_assignment(formula, leaves)
    if counter is None:
        return True, None
    return False, {format_formula(leaf): value for leaf, value in counter.items()}


def _linear_terms(literal, names: dict) -> tuple[dict[str, Fraction], Fraction]:
    """Linear form of a literal over abstracted real variables."""
    coefs: dict[str, Fraction] = {}

    def add(key, coef):
        name = names.setdefault(key, f"x{len(names) + 1}")
        coefs[name] = coefs.get(name, Fraction(0)) + coef

    if isinstance(literal, ExpectationInequality):
        for a, gamble in literal.terms:
            add(gamble, a)
        return coefs, literal.bound
    if isinstance(literal, GambleInequality):
        for b, phi in literal.left.terms:
            add(phi, b)
        for b, phi in negate_terms(literal.right.terms):
            add(phi, b)
        return coefs, Fraction(0)
    msg = f'"{format_formula(literal)}" is not an inequality.'
    raise _NoMatch("not-linear-valid", msg)


def is_linear_valid(formula: Formula) -> tuple[bool, dict | None]:
    """Validity with every e-term (or gamble formula) read as a free real.

    Each branch of the negation is an LP; a feasible one is a witness.
    """
    names: dict = {}
    forms = {lit: _linear_terms(lit, names) for lit in literals(formula)}
    limit = config.BUDGETS.max_branches
    for count, branch in enumerate(branches(Not(formula), list(forms)), 1):
        if count > limit:
            msg = f"Ineq check needs more than {limit} branches (--max-branches)."
            logger.error(msg)
            raise BudgetExceededError(msg)
        system = LinearSystem()
        for name in names.values():
            system.add_variable(name)
        for lit, truth in branch.items():
            coefs, bound = forms[lit]
            if truth:
                system.add(coefs, ">=", bound)
            else:
                system.add({k: -v for k, v in coefs.items()}, ">", -bound)
        witness = lp_feasible(system)
        if witness is not None:
            readable = {}
            for key, name in names.items():
                text = f"e({format_formula(key)})" if isinstance(key, Gamble) else format_formula(key)
                readable[text] = format_rational(witness[name])
            return False, readable
    return True, None


# ===== schema helpers =====


def _normalized(terms, bound, *, inequality: bool):
    first = terms[0][0] if terms else Fraction(0)
    if first == 0 or (inequality and first < 0):
        msg = "first coefficient must be positive"
        raise _NoMatch("schema-mismatch", msg, "term 1")
    return tuple((a / first, g) for a, g in terms), bound / first


def _equation(formula: Formula):
    """(terms, bound) of an equation written with "="."""
    if (
        isinstance(formula, And)
        and isinstance(formula.left, ExpectationInequality)
        and isinstance(formula.right, ExpectationInequality)
        and formula.right.terms == negate_terms(formula.left.terms)
        and formula.right.bound == -formula.left.bound
    ):
        return _normalized(formula.left.terms, formula.left.bound, inequality=False)
    msg = "expected an equation between expectation terms"
    raise _NoMatch("schema-mismatch", msg, "top level")


def _inequality(formula: Formula):
    if isinstance(formula, ExpectationInequality):
        return _normalized(formula.terms, formula.bound, inequality=True)
    msg = "expected a single expectation inequality"
    raise _NoMatch("schema-mismatch", msg, "top level")


def _expect(condition: bool, message: str, position: str):
    if not condition:
        raise _NoMatch("schema-mismatch", message, position)


def _term_count(terms, count: int):
    _expect(len(terms) == count, f"expected {count} expectation terms, found {len(terms)}", "terms")


def _indicator_arg(gamble: Gamble, position: str) -> Formula:
    _expect(
        len(gamble.terms) == 1 and gamble.terms[0][0] == 1,
        "expected e(phi), an indicator gamble",
        position,
    )
    return gamble.terms[0][1]


def _scaled(gamble: Gamble, factor: Fraction) -> tuple:
    return tuple((factor * b, phi) for b, phi in gamble.terms)


# ===== schemas =====


def _match_additivity(formula, *, inequality: bool):
    terms, bound = _inequality(formula) if inequality else _equation(formula)
    _term_count(terms, 3)
    (_, whole), (c1, g1), (c2, g2) = terms
    _expect(c1 == -1 and c2 == -1 and bound == 0, "expected e(g1 + g2) - e(g1) - e(g2)", "coefficients")
    _expect(whole.terms == g1.terms + g2.terms, "sum gamble is not g1 followed by g2", "term 1")
    return {"gamma1": g1, "gamma2": g2}


def _match_e2(formula):
    terms, bound = _equation(formula)
    _term_count(terms, 2)
    (_, scaled), (c, unit) = terms
    _expect(len(scaled.terms) == 1, "expected e(a phi)", "term 1")
    a, phi = scaled.terms[0]
    _expect(unit == Gamble(((Fraction(1), phi),)), "expected a e(phi) with the same phi", "term 2")
    _expect(c == -a and bound == 0, "coefficient of e(phi) must equal a", "coefficients")
    return {"a": a, "phi": phi}


def _match_constant(formula, constant: Formula, value: int):
    terms, bound = _equation(formula)
    _term_count(terms, 1)
    _expect(terms[0][1] == Gamble(((Fraction(1), constant),)), "wrong constant gamble", "term 1")
    _expect(bound == value, f"right-hand side must be {value}", "bound")
    return {}


def _match_e5(formula, side_text: str | None):
    terms, bound = _inequality(formula)
    _term_count(terms, 2)
    (_, larger), (c, smaller) = terms
    _expect(c == -1 and bound == 0, "expected e(gamma2) - e(gamma1) >= 0", "coefficients")
    literal = GambleInequality(larger, smaller)
    if side_text is None:
        result = gamble_formula_check(literal)
        if not result.valid:
            msg = f'Side condition fails: "{format_formula(literal)}" is not a valid gamble inequality.'
            raise _NoMatch("gamble-side-condition", msg, result.countermodel)
    else:
        side = _parse_binding("side", side_text)
        for condition in (side, Implies(side, literal)):
            result = gamble_formula_check(condition)
            if not result.valid:
                msg = f'Side condition fails: "{format_formula(condition)}" is not valid.'
                raise _NoMatch("gamble-side-condition", msg, result.countermodel)
    return {"gamma1": smaller, "gamma2": larger}


def _match_affine(formula, constant: Formula):
    terms, bound = _equation(formula)
    _term_count(terms, 2)
    (_, combined), (c, gamma) = terms
    a = -c
    if a < 0:
        msg = f"coefficient a = {format_rational(a)} must be >= 0"
        raise _NoMatch("coefficient-sign", msg, "term 2")
    scaled = _scaled(gamma, a)
    if constant == TRUE:
        b = bound
        _expect(
            combined.terms == scaled + ((b, TRUE),) or (b == 0 and combined.terms == scaled),
            "expected e(a gamma + b true) = a e(gamma) + b",
            "term 1",
        )
    else:
        _expect(bound == 0, "expected e(a gamma + b false) = a e(gamma)", "bound")
        if combined.terms == scaled:
            b = Fraction(0)
        else:
            _expect(
                combined.terms[:-1] == scaled and combined.terms[-1][1] == FALSE,
                "expected e(a gamma + b false) = a e(gamma)",
                "term 1",
            )
            b = combined.terms[-1][0]
    return {"a": a, "b": b, "gamma": gamma}


def _match_e9(formula):
    """Inequality form only; the belief Choquet integral is merely supermodular."""
    terms, bound = _inequality(formula)
    n = (len(terms)).bit_length() - 1
    _expect(
        n >= 1 and len(terms) == 2**n and bound == 0,
        "expected e(g1 v ... v gn) and one term per nonempty subset",
        "terms",
    )
    gammas = []
    for index in range(n):
        c, gamma = terms[1 + index]
        _expect(c == -1, "singleton terms enter with coefficient 1", f"term {index + 2}")
        gammas.append(gamma)
    position = 1 + n
    for size in range(2, n + 1):
        for subset in combinations(range(n), size):
            c, gamma = terms[position]
            expected = -((-1) ** (size + 1))
            _expect(c == expected, "inclusion-exclusion sign", f"term {position + 1}")
            meet = gamble_join_all([gammas[i] for i in subset], "min")
            if not gambles_equal(gamma, meet):
                names = "^".join(f"g{i + 1}" for i in subset)
                msg = f"term {position + 1} is not pointwise equal to {names}"
                raise _NoMatch("join-mismatch", msg, f"term {position + 1}")
            position += 1
    if not gambles_equal(terms[0][1], gamble_join_all(gammas, "max")):
        msg = "left-hand gamble is not pointwise equal to the join of the singletons"
        raise _NoMatch("join-mismatch", msg, "term 1")
    return {f"gamma{i + 1}": g for i, g in enumerate(gammas)}


def _match_e10(formula):
    terms, bound = _equation(formula)
    _expect(bound == 0 and len(terms) >= 2, "expected e(b1 phi1 + ... ) = b1 e(phi1) + ...", "terms")
    whole = terms[0][1]
    _term_count(terms, len(whole.terms) + 1)
    bound_vars = {}
    phis = []
    for index, ((b, phi), (c, unit)) in enumerate(zip(whole.terms, terms[1:]), 1):
        if b < 0:
            msg = f"coefficient b{index} = {format_rational(b)} must be >= 0"
            raise _NoMatch("coefficient-sign", msg, f"term {index + 1}")
        _expect(c == -b, f"coefficient of e(phi{index}) must be b{index}", f"term {index + 1}")
        _expect(_indicator_arg(unit, f"term {index + 1}") == phi, f"term {index + 1} must be e(phi{index})", f"term {index + 1}")
        bound_vars[f"b{index}"] = b
        bound_vars[f"phi{index}"] = phi
        phis.append(phi)
    for index in range(len(phis) - 1):
        _require_tautology(
            Implies(phis[index + 1], phis[index]),
            "chain-side-condition",
            f"phi{index + 2} => phi{index + 1}",
        )
    return bound_vars


def _match_e11(formula):
    _expect(isinstance(formula, Implies), "expected (e(phi1) >= e(phi2)) -> (...)", "top level")
    terms, bound = _inequality(formula.left)
    _term_count(terms, 2)
    (_, g1), (c, g2) = terms
    _expect(c == -1 and bound == 0, "expected e(phi1) >= e(phi2)", "antecedent")
    phi1 = _indicator_arg(g1, "antecedent term 1")
    phi2 = _indicator_arg(g2, "antecedent term 2")
    eq_terms, eq_bound = _equation(formula.right)
    _term_count(eq_terms, 2)
    (_, union), (c2, again) = eq_terms
    _expect(
        union == Gamble(((Fraction(1), Or(phi1, phi2)),)) and again == g1 and c2 == -1 and eq_bound == 0,
        "expected e(phi1|phi2) = e(phi1)",
        "consequent",
    )
    return {"phi1": phi1, "phi2": phi2}


def _match_g1(formula):
    _expect(
        isinstance(formula, And)
        and isinstance(formula.left, GambleInequality)
        and formula.right == GambleInequality(formula.left.right, formula.left.left),
        "expected an equation phi|psi = phi + psi",
        "top level",
    )
    union, parts = formula.left.left, formula.left.right
    _expect(
        len(parts.terms) == 2 and all(b == 1 for b, _ in parts.terms),
        "right-hand side must be 1 phi + 1 psi",
        "right gamble",
    )
    phi, psi = parts.terms[0][1], parts.terms[1][1]
    _expect(union == Gamble(((Fraction(1), Or(phi, psi)),)), "left-hand side must be phi|psi", "left gamble")
    _require_tautology(Not(And(phi, psi)), "disjointness-side-condition", "phi & psi <=> false")
    return {"phi": phi, "psi": psi}


def _match_g2(formula):
    _expect(isinstance(formula, GambleInequality), "expected phi <= psi", "top level")
    psi = _indicator_arg(formula.left, "larger side")
    phi = _indicator_arg(formula.right, "smaller side")
    _require_tautology(Implies(phi, psi), "implication-side-condition", "phi => psi")
    return {"phi": phi, "psi": psi}


def _match(axiom: str, formula: Formula, side: str | None) -> dict:
    if axiom == "E1":
        return _match_additivity(formula, inequality=False)
    if axiom == "E6":
        return _match_additivity(formula, inequality=True)
    if axiom == "E2":
        return _match_e2(formula)
    if axiom == "E3":
        return _match_constant(formula, FALSE, 0)
    if axiom == "E4":
        return _match_constant(formula, TRUE, 1)
    if axiom == "E5":
        return _match_e5(formula, side)
    if axiom == "E7":
        return _match_affine(formula, TRUE)
    if axiom == "E8":
        return _match_affine(formula, FALSE)
    if axiom == "E9":
        return _match_e9(formula)
    if axiom == "E10":
        return _match_e10(formula)
    if axiom == "E11":
        return _match_e11(formula)
    if axiom == "G1":
        return _match_g1(formula)
    return _match_g2(formula)


# ===== bindings =====


def _binding_kind(name: str) -> str:
    if name == "side":
        return "gamble-ineq"
    if re.match(r"^(a|b)\d*$", name):
        return "rational"
    if re.match(r"^(phi|psi)\d*$", name):
        return "prop"
    return "gamble"


def _parse_binding(name: str, text: str):
    kind = _binding_kind(name)
    try:
        if kind == "rational":
            return parse_rational(text)
        return parse(text, kind)
    except ExpectLogicError as exc:
        msg = f'Binding "{name}" = "{text}" cannot be read as {kind}: {exc}'
        raise ProofFormatError(msg) from exc


def _check_binding_names(axiom: str, bindings: Mapping[str, str]):
    allowed = METAVARIABLES[axiom]
    for name in bindings:
        known = allowed.match(name) if isinstance(allowed, re.Pattern) else name in allowed
        if not known:
            msg = f'Schema {axiom} has no metavariable "{name}".'
            raise ProofFormatError(msg)


def _binding_text(value) -> str:
    return format_rational(value) if isinstance(value, Fraction) else format_formula(value)


def _compare_bindings(bound: Mapping[str, Any], bindings: Mapping[str, str]):
    for name, text in bindings.items():
        if name == "side":
            continue
        wanted = _parse_binding(name, text)
        if name not in bound or bound[name] != wanted:
            found = _binding_text(bound[name]) if name in bound else None
            msg = f'Binding {name} = "{text}" does not match the instance ({found}).'
            raise _NoMatch("binding-mismatch", msg, {name: found})


# ===== public operations =====


def is_axiom_instance(
    formula: Formula,
    axiom: str,
    system: str | None = None,
    bindings: Mapping[str, str] | None = None,
) -> AxiomMatch:
    """Structural schema match plus side-condition discharge."""
    if axiom not in AXIOMS:
        msg = f'Unknown axiom "{axiom}".'
        raise ProofFormatError(msg)
    if system is not None:
        name, members = SYSTEMS[system]
        if axiom not in members:
            return AxiomMatch(False, "not-in-system", f"{axiom} not in {name}")
    bindings = dict(bindings or {})
    _check_binding_names(axiom, bindings)
    try:
        bound = _match(axiom, formula, bindings.get("side"))
        _compare_bindings(bound, bindings)
    except _NoMatch as exc:
        return AxiomMatch(False, exc.reason, f"not an instance of {axiom}: {exc.message}", exc.detail)
    return AxiomMatch(True, bound=bound)


def _language(system: str) -> str:
    return "gamble-ineq" if system == "axg" else "expectation"


def _check_line(number, line, formula, formulas, system) -> Rejection | None:
    name, members = SYSTEMS[system]
    m = JUSTIFICATION.match(line.by)
    rule = m["rule"] or "MP"
    if rule not in members:
        return Rejection(number, "not-in-system", f"{rule} not in {name}")
    if line.bindings and rule not in AXIOMS:
        msg = f"Line {number}: {rule} takes no bindings."
        raise ProofFormatError(msg)
    if rule == "MP":
        i, j = int(m["i"]), int(m["j"])
        if not (1 <= i < number and 1 <= j < number):
            msg = f"MP {i} {j} must refer to earlier lines"
            return Rejection(number, "mp-reference", msg, {"i": i, "j": j})
        if formulas[j - 1] != Implies(formulas[i - 1], formula):
            msg = f"line {j} is not (line {i}) -> (line {number})"
            return Rejection(number, "mp-mismatch", msg, {"i": i, "j": j})
        return None
    if rule == "Taut":
        ok, counter = is_tautology(formula)
        if not ok:
            return Rejection(number, "not-tautology", "not a propositional tautology", counter)
        return None
    if rule == "Ineq":
        ok, witness = is_linear_valid(formula)
        if not ok:
            return Rejection(number, "not-linear-valid", "not a valid linear inequality formula", witness)
        return None
    match = is_axiom_instance(formula, rule, system, line.bindings)
    if not match.ok:
        return Rejection(number, match.reason, match.message, match.detail)
    return None


def check_proof(derivation: Derivation) -> ProofResult:
    """Accept iff every line is an axiom instance or follows by MP."""
    system = derivation.system
    formulas, justifications, premises = [], [], {}
    rejection = None
    for number, line in enumerate(derivation.lines, 1):
        justifications.append(line.by)
        premises[number] = []
        try:
            formula = parse(line.formula, _language(system))
        except FormulaSyntaxError as exc:
            rejection = Rejection(number, "syntax", f"unparsable formula: {exc}", {"offset": exc.offset})
            break
        formulas.append(formula)
        rejection = _check_line(number, line, formula, formulas, system)
        if rejection is not None:
            break
        m = JUSTIFICATION.match(line.by)
        if m["i"] is not None:
            premises[number] = [int(m["i"]), int(m["j"])]
    graph = dag_from_premises(premises)
    if rejection is not None:
        logger.debug("-> Derivation rejected at line %i: %s", rejection.line, rejection.reason)
        return ProofResult(system, False, rejection, tuple(formulas), tuple(justifications), graph)
    unused = tuple(unreachable_nodes(graph, len(formulas))) if formulas else ()
    if unused:
        logger.warning(
            "Lines not used for the conclusion: %s", ", ".join(str(n) for n in unused)
        )
    return ProofResult(system, True, None, tuple(formulas), tuple(justifications), graph, unused)


def verify_conclusion(result: ProofResult) -> bool:
    """Semantic validity of an accepted derivation's last formula."""
    if not result.accepted or result.conclusion is None:
        return False
    semantics = SYSTEM_SEMANTICS[result.system]
    if semantics == "g":
        return gamble_formula_check(result.conclusion).valid
    return valid(result.conclusion, semantics).valid
