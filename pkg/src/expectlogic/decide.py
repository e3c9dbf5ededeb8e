"""Satisfiability and validity of expectation formulas, natural-extension bounds.

All four semantics share one skeleton: the Boolean structure over the basic
inequalities is enumerated with branch-and-prune, every branch becomes a
linear system over atom-level variables and is handed to lp_feasible. A
feasible branch is turned into a concrete structure (the certificate) that
is model-checked against the input before it is returned.

Per semantics the variables are:

prob
    one weight per atom.
lp
    one probability vector per distinct expectation term plus a free
    variable t_i; term i is attained by measure i and no other measure goes
    below it.
bel
    one mass per nonempty set of atoms; e(gamma) is the sum of m(S) times the
    minimum of gamma on S.
poss
    one possibility value per atom and one threshold variable per set
    {gamma > x}; where the threshold variable must equal the maximum
    exactly, the maximising atom is guessed.
"""

import logging
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from expectlogic import config
from expectlogic.errors import (
    BudgetExceededError,
    CertificateError,
    InconsistentAssumptionsError,
    KindMismatchError,
    LPError,
)
from expectlogic.formulas import (
    ExpectationInequality,
    Formula,
    Gamble,
    Implies,
    LikelihoodInequality,
    Not,
    branches,
    conjunction,
    expectation_terms,
    format_formula,
    literals,
    map_literals,
    propositions,
)
from expectlogic.gambles import Atom, enumerate_atoms, gamble_value
from expectlogic.lp import LinearSystem, lp_feasible, lp_optimize
from expectlogic.modelcheck import check
from expectlogic.models import (
    BeliefStructure,
    CredalStructure,
    PossibilityStructure,
    ProbabilityStructure,
    Structure,
    World,
)
from expectlogic.parser import likelihood_to_expectation
from expectlogic.utils import denominator_lcm, powerset

logger = logging.getLogger(__name__)

SEMANTICS = ("prob", "lp", "bel", "poss")

ZERO = Fraction(0)


@dataclass(frozen=True)
class SatVerdict:
    satisfiable: bool
    certificate: Structure | None
    semantics: str
    branches: int
    lp_solves: int


@dataclass(frozen=True)
class ValidityVerdict:
    valid: bool
    countermodel: Structure | None
    semantics: str
    branches: int
    lp_solves: int


# ===== input preparation =====


def _integer_literal(literal):
    if not isinstance(literal, ExpectationInequality):
        return literal
    scale = denominator_lcm([a for a, _ in literal.terms] + [literal.bound])
    if scale == 1:
        return literal
    return ExpectationInequality(
        tuple((a * scale, g) for a, g in literal.terms), literal.bound * scale
    )


def to_integer_formula(formula: Formula) -> Formula:
    """Expectation formula with integer coefficients and bounds.

    Likelihood terms l(phi) become e(1 phi); every basic inequality is
    multiplied by the lcm of its denominators. Gamble coefficients stay as
    they are.
    """
    return map_literals(likelihood_to_expectation(formula), _integer_literal)


def is_integer_formula(formula: Formula) -> bool:
    return all(
        isinstance(lit, ExpectationInequality)
        and all(a.denominator == 1 for a, _ in lit.terms)
        and lit.bound.denominator == 1
        for lit in literals(formula)
    )


@dataclass
class _Query:
    formula: Formula
    atoms: list[Atom]
    terms: list[Gamble]
    literals: list[ExpectationInequality]
    values: dict[Gamble, list[Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        for gamble in self.terms:
            self.values[gamble] = [gamble_value(gamble, atom) for atom in self.atoms]


def _check_budgets(props: Sequence[str], terms: Sequence[Gamble]):
    budgets = config.BUDGETS
    if len(props) > budgets.max_props:
        msg = (
            f"Query mentions {len(props)} propositions, the budget is "
            f"{budgets.max_props} (--max-props)."
        )
        logger.error(msg)
        raise BudgetExceededError(msg)
    if len(terms) > budgets.max_terms:
        msg = (
            f"Query has {len(terms)} distinct expectation terms, the budget is "
            f"{budgets.max_terms} (--max-terms)."
        )
        logger.error(msg)
        raise BudgetExceededError(msg)


def _prepare(formula: Formula) -> _Query:
    integer = to_integer_formula(formula)
    lits = literals(integer)
    for lit in lits:
        if not isinstance(lit, ExpectationInequality):
            msg = (
                f'"{format_formula(lit)}" is not an expectation or likelihood inequality; '
                "gamble-inequality formulas are decided by gamble_formula_check."
            )
            raise KindMismatchError(msg)
    props = propositions(integer)
    terms = expectation_terms(integer)
    _check_budgets(props, terms)
    return _Query(integer, enumerate_atoms(props), terms, lits)


@dataclass
class _Stats:
    branches: int = 0
    lp_solves: int = 0

    def count_branch(self):
        self.branches += 1
        limit = config.BUDGETS.max_branches
        if self.branches > limit:
            msg = f"Search needs more than {limit} branches (--max-branches)."
            logger.error(msg)
            raise BudgetExceededError(msg)

    def feasible(self, system: LinearSystem):
        self.lp_solves += 1
        return lp_feasible(system)


def _worlds(atoms: Sequence[Atom]) -> tuple[World, ...]:
    return tuple(World(f"w{n}", atom.true_props()) for n, atom in enumerate(atoms, 1))


# ===== encodings =====


@dataclass(frozen=True)
class _Row:
    coefs: dict[str, Fraction]
    relation: str
    rhs: Fraction
    label: str


class _Encoding:
    """Linear encoding of e(gamma) for one semantics."""

    def __init__(self, query: _Query):
        self.query = query
        self.atoms = query.atoms

    def declare(self, system: LinearSystem):
        raise NotImplementedError

    def term_form(self, gamble: Gamble) -> tuple[dict[str, Fraction], Fraction]:
        """Linear form (coefficients, constant) equal to e(gamble)."""
        raise NotImplementedError

    def certificate(self, witness: dict[str, Fraction]) -> Structure:
        raise NotImplementedError

    def literal_row(self, literal: ExpectationInequality, truth: bool, label: str) -> _Row:
        coefs, constant = defaultdict(Fraction), ZERO
        for a, gamble in literal.terms:
            form, const = self.term_form(gamble)
            for var, value in form.items():
                coefs[var] += a * value
            constant += a * const
        rhs = literal.bound - constant
        if truth:
            return _Row(dict(coefs), ">=", rhs, label)
        # not (lhs >= b) is -lhs > -b
        return _Row({var: -value for var, value in coefs.items()}, ">", -rhs, label)

    def system(self, rows: Sequence[_Row]) -> LinearSystem:
        system = LinearSystem()
        self.declare(system)
        for row in rows:
            system.add(row.coefs, row.relation, row.rhs, label=row.label)
        return system

    def solve(self, rows: Sequence[_Row], stats: _Stats) -> dict[str, Fraction] | None:
        return stats.feasible(self.system(rows))


class ProbEncoding(_Encoding):
    def _var(self, index: int) -> str:
        return f"x{index + 1}"

    def declare(self, system):
        names = [system.add_variable(self._var(i), nonnegative=True) for i in range(len(self.atoms))]
        self._simplex(system, names)

    @staticmethod
    def _simplex(system, names):
        system.add(dict.fromkeys(names, 1), "=", 1, label="total")

    def term_form(self, gamble):
        values = self.query.values[gamble]
        return {self._var(i): v for i, v in enumerate(values)}, ZERO

    def certificate(self, witness):
        used = [i for i in range(len(self.atoms)) if witness[self._var(i)] > 0]
        worlds = _worlds([self.atoms[i] for i in used])
        mu = {w.id: witness[self._var(i)] for w, i in zip(worlds, used)}
        return ProbabilityStructure(worlds, mu=mu)


class LowerProbEncoding(_Encoding):
    """One witness measure per distinct expectation term (identity mapping)."""

    def __init__(self, query):
        super().__init__(query)
        self.k = max(1, len(query.terms))

    def _var(self, j: int, i: int) -> str:
        return f"m{j + 1}_{i + 1}"

    def term_var(self, index: int) -> str:
        return f"t{index + 1}"

    def declare(self, system):
        n = len(self.atoms)
        for j in range(self.k):
            for i in range(n):
                system.add_variable(self._var(j, i), nonnegative=True)
        for index in range(len(self.query.terms)):
            system.add_variable(self.term_var(index))
        for j in range(self.k):
            system.add({self._var(j, i): 1 for i in range(n)}, "=", 1, label=f"total_{j + 1}")
        for index, gamble in enumerate(self.query.terms):
            values = self.query.values[gamble]
            t = self.term_var(index)
            for j in range(self.k):
                coefs = {self._var(j, i): v for i, v in enumerate(values)}
                coefs[t] = -1
                relation = "=" if j == index else ">="
                system.add(coefs, relation, 0, label=f"term{index + 1}_measure{j + 1}")

    def term_form(self, gamble):
        return {self.term_var(self.query.terms.index(gamble)): Fraction(1)}, ZERO

    def certificate(self, witness):
        n = len(self.atoms)
        used = [i for i in range(n) if any(witness[self._var(j, i)] > 0 for j in range(self.k))]
        worlds = _worlds([self.atoms[i] for i in used])
        measures = tuple(
            {w.id: witness[self._var(j, i)] for w, i in zip(worlds, used)} for j in range(self.k)
        )
        return CredalStructure(worlds, measures=measures)


class BeliefEncoding(_Encoding):
    """Masses on nonempty sets of atoms; e(gamma) = sum m(S) * min_S gamma."""

    def __init__(self, query):
        super().__init__(query)
        self.subsets = list(powerset(range(len(self.atoms)), nonempty=True))

    @staticmethod
    def _var(subset) -> str:
        return "m_" + "_".join(str(i + 1) for i in subset)

    def declare(self, system):
        names = [system.add_variable(self._var(s), nonnegative=True) for s in self.subsets]
        system.add(dict.fromkeys(names, 1), "=", 1, label="total")

    def term_form(self, gamble):
        values = self.query.values[gamble]
        return {self._var(s): min(values[i] for i in s) for s in self.subsets}, ZERO

    def certificate(self, witness):
        focal = [s for s in self.subsets if witness[self._var(s)] > 0]
        used = sorted({i for s in focal for i in s})
        worlds = _worlds([self.atoms[i] for i in used])
        world_of = {i: w.id for w, i in zip(worlds, used)}
        mass = {frozenset(world_of[i] for i in s): witness[self._var(s)] for s in focal}
        return BeliefStructure(worlds, mass=mass)


class PossibilityEncoding(_Encoding):
    """Per-atom possibility values with guessed maximisers for threshold sets."""

    def __init__(self, query):
        super().__init__(query)
        self.thresholds: dict[Gamble, tuple[Fraction, list[tuple[Fraction, frozenset[int]]]]] = {}
        self.sets: list[frozenset[int]] = []
        for gamble in query.terms:
            values = query.values[gamble]
            levels = sorted(set(values))
            steps = []
            for low, high in zip(levels, levels[1:]):
                above = frozenset(i for i, v in enumerate(values) if v > low)
                steps.append((high - low, above))
                if above not in self.sets:
                    self.sets.append(above)
            self.thresholds[gamble] = (levels[0], steps)

    def _var(self, index: int) -> str:
        return f"p{index + 1}"

    def _set_var(self, subset: frozenset[int]) -> str:
        return "y_" + "_".join(str(i + 1) for i in sorted(subset))

    def declare(self, system):
        n = len(self.atoms)
        for i in range(n):
            system.add_variable(self._var(i), nonnegative=True)
        for subset in self.sets:
            system.add_variable(self._set_var(subset))
        for i in range(n):
            system.add({self._var(i): 1}, "<=", 1, label=f"{self._var(i)}_max")
        for subset in self.sets:
            y = self._set_var(subset)
            system.add({y: 1}, "<=", 1, label=f"{y}_max")
            for i in sorted(subset):
                system.add({y: 1, self._var(i): -1}, ">=", 0, label=f"{y}_ge_{self._var(i)}")

    def term_form(self, gamble):
        base, steps = self.thresholds[gamble]
        coefs = defaultdict(Fraction)
        for width, subset in steps:
            coefs[self._set_var(subset)] += width
        return dict(coefs), base

    def _guess_rows(self, guesses) -> list[_Row]:
        rows = []
        for subset, atom in guesses:
            p = self._var(atom)
            if subset is None:
                rows.append(_Row({p: Fraction(1)}, ">=", Fraction(1), f"pin_{p}"))
            else:
                y = self._set_var(subset)
                rows.append(_Row({y: Fraction(1), p: Fraction(-1)}, "<=", ZERO, f"{y}_at_{p}"))
        return rows

    def solve(self, rows, stats):
        # threshold sets that some row rewards for being large need y_S = max exactly
        exact = [
            s
            for s in self.sets
            if any(row.coefs.get(self._set_var(s), ZERO) > 0 for row in rows)
        ]
        exact.sort(key=lambda s: (-len(s), self.sets.index(s)))
        everything = frozenset(range(len(self.atoms)))
        order = [None, *exact]

        def candidates(subset, guesses):
            scope = everything if subset is None else subset
            for earlier, atom in guesses:
                earlier_scope = everything if earlier is None else earlier
                if scope <= earlier_scope and atom in scope:
                    return [atom]
            return sorted(scope)

        def search(guesses):
            stats.count_branch()
            witness = stats.feasible(self.system([*rows, *self._guess_rows(guesses)]))
            if witness is None or len(guesses) == len(order):
                return witness
            subset = order[len(guesses)]
            for atom in candidates(subset, guesses):
                found = search([*guesses, (subset, atom)])
                if found is not None:
                    return found
            return None

        return search([])

    def certificate(self, witness):
        used = [i for i in range(len(self.atoms)) if witness[self._var(i)] > 0]
        worlds = _worlds([self.atoms[i] for i in used])
        poss = {w.id: witness[self._var(i)] for w, i in zip(worlds, used)}
        return PossibilityStructure(worlds, poss=poss)


ENCODINGS = {
    "prob": ProbEncoding,
    "lp": LowerProbEncoding,
    "bel": BeliefEncoding,
    "poss": PossibilityEncoding,
}


def _verify_certificate(certificate: Structure, formula: Formula):
    if not check(certificate, formula).verdict:
        msg = (
            f"Certificate ({certificate.kind}, {len(certificate.worlds)} worlds) does not "
            f'satisfy "{format_formula(formula)}".'
        )
        raise CertificateError(msg)


# ===== public operations =====


def satisfiable(formula: Formula, semantics: str = "prob") -> SatVerdict:
    """Decide satisfiability in the structures of one semantics.

    Likelihood formulas are accepted and decided through l(phi) = e(1 phi).
    A SAT verdict carries a certificate that satisfies the formula.
    """
    if semantics not in ENCODINGS:
        msg = f'Unknown semantics "{semantics}", expected one of {", ".join(SEMANTICS)}.'
        raise ValueError(msg)
    query = _prepare(formula)
    encoding = ENCODINGS[semantics](query)
    stats = _Stats()
    for branch in branches(query.formula, query.literals):
        stats.count_branch()
        rows = [
            encoding.literal_row(lit, truth, f"lit{query.literals.index(lit) + 1}")
            for lit, truth in branch.items()
        ]
        witness = encoding.solve(rows, stats)
        if witness is None:
            continue
        certificate = encoding.certificate(witness)
        _verify_certificate(certificate, formula)
        logger.debug(
            "-> SAT under %s after %i branches and %i LP solves.",
            semantics,
            stats.branches,
            stats.lp_solves,
        )
        return SatVerdict(True, certificate, semantics, stats.branches, stats.lp_solves)
    logger.debug(
        "-> UNSAT under %s after %i branches and %i LP solves.",
        semantics,
        stats.branches,
        stats.lp_solves,
    )
    return SatVerdict(False, None, semantics, stats.branches, stats.lp_solves)


def valid(formula: Formula, semantics: str = "prob") -> ValidityVerdict:
    """Valid iff the negation is unsatisfiable; the countermodel satisfies it."""
    verdict = satisfiable(Not(formula), semantics)
    return ValidityVerdict(
        not verdict.satisfiable,
        verdict.certificate,
        semantics,
        verdict.branches,
        verdict.lp_solves,
    )


def entails(
    assumptions: Sequence[Formula], conclusion: Formula, semantics: str = "prob"
) -> ValidityVerdict:
    """Validity of (a1 & ... & an) -> conclusion."""
    if not assumptions:
        return valid(conclusion, semantics)
    return valid(Implies(conjunction(list(assumptions)), conclusion), semantics)


def _basic_assumption(assumption: Formula) -> ExpectationInequality:
    if isinstance(assumption, LikelihoodInequality):
        assumption = likelihood_to_expectation(assumption)
    if not isinstance(assumption, ExpectationInequality):
        msg = (
            f'Assumption "{format_formula(assumption)}" is not a basic inequality; '
            "split conjunctions and drop negations."
        )
        raise ValueError(msg)
    return _integer_literal(assumption)


def infer_lower_bound(
    assumptions: Sequence[Formula], gamble: Gamble, *, cross_check: bool = True
) -> Fraction:
    """Natural extension: the largest b with assumptions |= e(gamble) >= b (lp).

    The bound is the optimum of one LP over the witness-measure construction,
    minimising the lower expectation of gamble. With cross_check the result is
    confirmed by two validity queries, e(gamble) >= b must follow and
    e(gamble) > b must not.
    """
    basics = [_basic_assumption(a) for a in assumptions]
    formula = conjunction(basics)
    terms = [gamble] + [g for g in expectation_terms(formula) if g != gamble]
    props = propositions(gamble, *basics)
    _check_budgets(props, terms)
    query = _Query(formula, enumerate_atoms(props), terms, basics)
    encoding = LowerProbEncoding(query)
    system = LinearSystem()
    encoding.declare(system)
    for index, basic in enumerate(basics, 1):
        row = encoding.literal_row(basic, True, f"assumption{index}")
        system.add(row.coefs, row.relation, row.rhs, label=row.label)
    system.set_objective({encoding.term_var(0): 1})
    result = lp_optimize(system)
    if result.status == "infeasible":
        msg = "Assumptions are inconsistent under lower expectations; they entail every bound."
        raise InconsistentAssumptionsError(msg)
    if result.status != "optimal":
        msg = f"Natural-extension LP ended with status {result.status}."
        raise LPError(msg)
    bound = result.optimum
    logger.debug("-> Natural extension lower bound: %s", bound)
    if cross_check:
        _cross_check_bound(basics, gamble, bound)
    return bound


def _cross_check_bound(basics, gamble: Gamble, bound: Fraction):
    at_least = ExpectationInequality(((Fraction(1), gamble),), bound)
    above = Not(ExpectationInequality(((Fraction(-1), gamble),), -bound))
    if not entails(basics, at_least, "lp").valid:
        msg = f"Cross-check failed: the assumptions do not entail e(gamble) >= {bound}."
        raise CertificateError(msg)
    if entails(basics, above, "lp").valid:
        msg = f"Cross-check failed: the assumptions entail e(gamble) > {bound}."
        raise CertificateError(msg)
