"""Gambles as functions of truth assignments.

Covers valuation, the canonical decomposition over atoms (complete
conjunctions of literals), pointwise max/min of gambles and the decision
procedure for Boolean combinations of gamble inequalities.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from expectlogic import config
from expectlogic.errors import AtomCapError, BudgetExceededError, CertificateError
from expectlogic.formulas import (
    TRUE,
    Formula,
    Gamble,
    GambleInequality,
    Not,
    Prop,
    branches,
    conjunction,
    holds,
    literals,
    propositions,
)
from expectlogic.models import PlainStructure, World

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    """Truth assignment to an ordered proposition list."""

    props: tuple[str, ...]
    values: tuple[bool, ...]

    @cached_property
    def _lookup(self) -> dict[str, bool]:
        return dict(zip(self.props, self.values))

    def __getitem__(self, name: str) -> bool:
        return self._lookup[name]

    def get(self, name: str, default=None):
        return self._lookup.get(name, default)

    def true_props(self) -> frozenset[str]:
        return frozenset(p for p, v in zip(self.props, self.values) if v)

    def to_formula(self) -> Formula:
        """The complete conjunction of literals true exactly at this atom."""
        return conjunction(
            [Prop(p) if v else Not(Prop(p)) for p, v in zip(self.props, self.values)]
        )

    def __str__(self):
        if not self.props:
            return "true"
        return "".join(p if v else f"¬{p}" for p, v in zip(self.props, self.values))


def check_atom_cap(props: Sequence[str], cap: int | None = None):
    cap = config.BUDGETS.atom_cap if cap is None else cap
    if len(props) > cap:
        msg = (
            f"{len(props)} propositions exceed the atom cap of {cap} "
            f"({2 ** len(props)} atoms)."
        )
        logger.error(msg)
        raise AtomCapError(msg)


def enumerate_atoms(props: Sequence[str], cap: int | None = None) -> list[Atom]:
    """All atoms over props, all-true first (pq, p¬q, ¬pq, ¬p¬q)."""
    props = tuple(props)
    check_atom_cap(props, cap)
    return [Atom(props, values) for values in product((True, False), repeat=len(props))]


def gamble_value(gamble: Gamble, assignment: Mapping[str, bool]) -> Fraction:
    """Sum of the coefficients of all terms whose formula holds."""
    return sum(
        (coef for coef, formula in gamble.terms if holds(formula, assignment)),
        Fraction(0),
    )


@dataclass(frozen=True)
class CanonicalGamble:
    """Weights b_A of a gamble on the mutually exclusive atoms over props."""

    props: tuple[str, ...]
    weights: dict[Atom, Fraction]

    def atoms(self) -> list[Atom]:
        return list(self.weights)

    def values(self) -> list[Fraction]:
        return sorted(set(self.weights.values()))

    def to_gamble(self) -> Gamble:
        """Gamble sum of b_A rho_A; zero weights are left out."""
        return Gamble(
            tuple(
                (weight, atom.to_formula())
                for atom, weight in self.weights.items()
                if weight != 0
            )
        )

    def atoms_above(self, threshold: Fraction) -> list[Atom]:
        return [atom for atom, weight in self.weights.items() if weight > threshold]


def pad_gamble(gamble: Gamble, props: Sequence[str]) -> Gamble:
    """Add 0-coefficient terms so that the gamble mentions every prop."""
    missing = [p for p in props if p not in set(propositions(gamble))]
    return Gamble(gamble.terms + tuple((Fraction(0), Prop(p)) for p in missing))


def canonical_form(
    gamble: Gamble, props: Sequence[str] | None = None, cap: int | None = None
) -> CanonicalGamble:
    """Decompose a gamble over the atoms of its (or the given) propositions."""
    if props is None:
        props = propositions(gamble)
    else:
        props = tuple(props)
        extra = set(propositions(gamble)) - set(props)
        if extra:
            msg = f"Gamble mentions propositions outside the atom basis: {sorted(extra)}"
            raise ValueError(msg)
    atoms = enumerate_atoms(props, cap)
    return CanonicalGamble(
        tuple(props), {atom: gamble_value(gamble, atom) for atom in atoms}
    )


def gamble_join(gamble1: Gamble, gamble2: Gamble, mode: str = "max") -> Gamble:
    """Pointwise max (mode "max") or min ("min") of two gambles.

    The result is a linear combination of the atoms over the union of both
    proposition sets, so it is again a gamble in the syntactic sense.
    """
    if mode not in ("max", "min"):
        msg = f'Unknown join mode "{mode}".'
        raise ValueError(msg)
    props = tuple(sorted(set(propositions(gamble1)) | set(propositions(gamble2))))
    canon1 = canonical_form(pad_gamble(gamble1, props), props)
    canon2 = canonical_form(pad_gamble(gamble2, props), props)
    pick = max if mode == "max" else min
    weights = {atom: pick(canon1.weights[atom], canon2.weights[atom]) for atom in canon1.weights}
    return CanonicalGamble(props, weights).to_gamble()


def gamble_join_all(gambles: Sequence[Gamble], mode: str = "max") -> Gamble:
    result = gambles[0]
    for gamble in gambles[1:]:
        result = gamble_join(result, gamble, mode)
    return result


def gambles_equal(gamble1: Gamble, gamble2: Gamble, cap: int | None = None) -> bool:
    """Pointwise equality on all atoms over the joint propositions."""
    props = tuple(sorted(set(propositions(gamble1)) | set(propositions(gamble2))))
    return all(
        gamble_value(gamble1, atom) == gamble_value(gamble2, atom)
        for atom in enumerate_atoms(props, cap)
    )


def literal_slack(literal: GambleInequality, assignment: Mapping[str, bool]) -> Fraction:
    """left - right at one truth assignment."""
    return gamble_value(literal.left, assignment) - gamble_value(literal.right, assignment)


# ===== Boolean combinations of gamble inequalities =====


@dataclass(frozen=True)
class GambleCheckResult:
    valid: bool
    countermodel: PlainStructure | None
    satisfiable: bool
    model: PlainStructure | None


def _plain_structure(atoms: list[Atom]) -> PlainStructure:
    worlds = tuple(
        World(f"w{index}", atom.true_props()) for index, atom in enumerate(atoms, 1)
    )
    return PlainStructure(worlds)


def satisfying_atoms(formula: Formula, props: Sequence[str]) -> list[Atom] | None:
    """Smallest world set (as atoms) found for a gamble-inequality formula.

    A literal holds in a plain structure iff it holds at every world. For each
    Boolean branch the worlds are drawn from the atoms that satisfy all
    positive literals, with one witness atom per negated literal.
    """
    atoms = enumerate_atoms(props)
    pointwise = {}

    def holds_at(literal, atom_index):
        if literal not in pointwise:
            pointwise[literal] = [literal_slack(literal, atom) >= 0 for atom in atoms]
        return pointwise[literal][atom_index]

    max_branches = config.BUDGETS.max_branches
    for count, branch in enumerate(branches(formula, literals(formula)), 1):
        if count > max_branches:
            msg = f"Gamble formula needs more than {max_branches} Boolean branches."
            logger.error(msg)
            raise BudgetExceededError(msg)
        positive = [lit for lit, truth in branch.items() if truth]
        negative = [lit for lit, truth in branch.items() if not truth]
        allowed = [
            index
            for index in range(len(atoms))
            if all(holds_at(lit, index) for lit in positive)
        ]
        if not allowed:
            continue
        chosen = []
        for lit in negative:
            witness = next((i for i in allowed if not holds_at(lit, i)), None)
            if witness is None:
                break
            if witness not in chosen:
                chosen.append(witness)
        else:
            if not chosen:
                chosen = [allowed[0]]
            logger.debug("-> Gamble formula branch satisfied by atoms %s", chosen)
            return [atoms[i] for i in sorted(chosen)]
    return None


def gamble_formula_check(formula: Formula) -> GambleCheckResult:
    """Validity and satisfiability of a gamble-inequality formula.

    Both returned structures are re-checked with the model checker.
    """
    from expectlogic.modelcheck import check

    props = propositions(formula)
    check_atom_cap(props)
    model_atoms = satisfying_atoms(formula, props)
    counter_atoms = satisfying_atoms(Not(formula), props)

    model = None if model_atoms is None else _plain_structure(model_atoms)
    countermodel = None if counter_atoms is None else _plain_structure(counter_atoms)
    if model is not None and not check(model, formula).verdict:
        msg = "Gamble formula model failed re-verification."
        raise CertificateError(msg)
    if countermodel is not None and check(countermodel, formula).verdict:
        msg = "Gamble formula countermodel failed re-verification."
        raise CertificateError(msg)
    return GambleCheckResult(
        valid=countermodel is None,
        countermodel=countermodel,
        satisfiable=model is not None,
        model=model,
    )


def constant_gamble(value: Fraction | int) -> Gamble:
    return Gamble(((Fraction(value), TRUE),))
