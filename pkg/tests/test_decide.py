from fractions import Fraction
from itertools import combinations, product

import pytest
from expectlogic.decide import (
    entails,
    infer_lower_bound,
    is_integer_formula,
    satisfiable,
    to_integer_formula,
    valid,
)
from expectlogic.errors import (
    BudgetExceededError,
    InconsistentAssumptionsError,
    KindMismatchError,
)
from expectlogic.formulas import (
    And,
    ExpectationInequality,
    Gamble,
    Not,
    Or,
    Prop,
    evaluate,
    expectation_terms,
    format_formula,
    holds,
    literals,
    propositions,
)
from expectlogic.lp import LinearSystem, lp_feasible
from expectlogic.modelcheck import check
from expectlogic.models import CredalStructure, ProbabilityStructure
from expectlogic.parser import parse
from hypothesis import HealthCheck, given, settings
from strategies import expectation_formulas

F = Fraction
SEMANTICS = ("prob", "lp", "bel", "poss")


def brute_force_prob_sat(formula):
    """Expand every leaf assignment and solve one atom LP per satisfying row."""
    lits = literals(formula)
    props = propositions(formula)
    atoms = [dict(zip(props, values)) for values in product((True, False), repeat=len(props))]
    for truths in product((True, False), repeat=len(lits)):
        row = dict(zip(lits, truths))
        if not evaluate(formula, row.__getitem__):
            continue
        system = LinearSystem()
        names = [system.add_variable(f"x{i}", nonnegative=True) for i in range(len(atoms))]
        system.add(dict.fromkeys(names, 1), "=", 1)
        for lit, truth in row.items():
            coefs = {
                name: sum(
                    (a * c * holds(phi, atom) for a, gamble in lit.terms for c, phi in gamble.terms),
                    F(0),
                )
                for name, atom in zip(names, atoms)
            }
            system.add(coefs, ">=" if truth else "<", lit.bound)
        if lp_feasible(system) is not None:
            return True
    return False


def test_integer_formula():
    formula = parse("1/2 e(p) >= 1/3 | e(q) < 3/4")
    integer = to_integer_formula(formula)
    assert format_formula(integer) == "3 e(1 p) >= 2 | !(4 e(1 q) >= 3)"
    assert is_integer_formula(integer)
    assert not is_integer_formula(formula)


def test_sat_with_certificate():
    formula = parse("2 e(p) >= 1")
    verdict = satisfiable(formula, "prob")
    assert verdict.satisfiable
    assert isinstance(verdict.certificate, ProbabilityStructure)
    assert check(verdict.certificate, formula).verdict
    assert verdict.branches >= 1
    assert verdict.lp_solves >= 1


@pytest.mark.parametrize("semantics", SEMANTICS)
def test_monotonicity_forces_unsat(semantics):
    verdict = satisfiable(parse("e(p) - e(true) > 0"), semantics)
    assert not verdict.satisfiable
    assert verdict.certificate is None


def test_additivity_separates_prob_and_lp():
    formula = parse("e(p) + e(!p) < 1")
    assert not satisfiable(formula, "prob").satisfiable
    verdict = satisfiable(formula, "lp")
    assert verdict.satisfiable
    assert isinstance(verdict.certificate, CredalStructure)
    assert check(verdict.certificate, formula).verdict
    # one witness measure per expectation term
    assert len(verdict.certificate.measures) <= 2


def test_additivity_validity():
    formula = parse("e(p + q) = e(p) + e(q)")
    assert valid(formula, "prob").valid
    verdict = valid(formula, "lp")
    assert not verdict.valid
    assert not check(verdict.countermodel, formula).verdict
    # the lower expectation is superadditive
    assert valid(parse("e(p + q) >= e(p) + e(q)"), "lp").valid


def test_maxitivity_of_possibility():
    formula = parse("(e(p) >= e(q)) -> (e(p|q) = e(p))")
    assert valid(formula, "poss").valid
    assert not valid(formula, "prob").valid


@pytest.mark.parametrize(
    ("text", "verdicts"),
    [
        ("l(p) >= 1/2 & l(!p) >= 1/2", (True, True, True, True)),
        ("l(p) > 1/2 & l(!p) > 1/2", (False, False, False, True)),
        ("e(p) + e(!p) > 1", (False, False, False, True)),
        ("e(p&q) > e(p)", (False, False, False, False)),
    ],
)
def test_sat_per_semantics(text, verdicts):
    formula = parse(text)
    for semantics, expected in zip(SEMANTICS, verdicts):
        verdict = satisfiable(formula, semantics)
        assert verdict.satisfiable is expected, semantics
        if expected:
            assert check(verdict.certificate, formula).verdict


def test_entails():
    assumptions = [parse("2 e(p) >= 1")]
    assert entails(assumptions, parse("2 e(p|q) >= 1"), "lp").valid
    assert not entails(assumptions, parse("2 e(q) >= 1"), "lp").valid
    assert entails([], parse("e(p) >= 0"), "bel").valid


def test_infer_lower_bound():
    assert infer_lower_bound([], parse("2 p + 1 q - 1 true", "gamble")) == -1
    two = [parse("2 e(p) >= 1"), parse("2 e(q) >= 1")]
    assert infer_lower_bound(two, parse("p&q", "gamble")) == 0
    assert infer_lower_bound([parse("2 e(p) >= 1")], parse("p|q", "gamble")) == F(1, 2)
    assert infer_lower_bound([parse("l(p) >= 1/3")], parse("3 p", "gamble")) == 1


def test_infer_lower_bound_errors():
    with pytest.raises(InconsistentAssumptionsError):
        infer_lower_bound([parse("e(p) >= 1"), parse("e(!p) >= 1")], parse("p", "gamble"))
    with pytest.raises(ValueError, match="not a basic inequality"):
        infer_lower_bound([parse("e(p) < 1")], parse("p", "gamble"))


def test_budgets(temp_config):
    temp_config.load_config(max_props=1)
    with pytest.raises(BudgetExceededError, match="--max-props"):
        satisfiable(parse("e(p) + e(q) >= 1"))
    temp_config.load_config(max_terms=1)
    with pytest.raises(BudgetExceededError, match="--max-terms"):
        satisfiable(parse("e(p) + e(q) >= 1"))
    temp_config.load_config(max_branches=1)
    with pytest.raises(BudgetExceededError, match="--max-branches"):
        satisfiable(parse("e(p) > 1 | e(q) > 1"))


def test_bad_input():
    with pytest.raises(ValueError, match="Unknown semantics"):
        satisfiable(parse("e(p) >= 0"), "credal")
    with pytest.raises(KindMismatchError, match="gamble_formula_check"):
        satisfiable(parse("p >= q"))


@pytest.mark.slow
@settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
@given(formula=expectation_formulas())
def test_prob_agrees_with_brute_force(temp_config, formula):
    temp_config.load_config(max_terms=8)
    verdict = satisfiable(formula, "prob")
    assert verdict.satisfiable is brute_force_prob_sat(formula)


@pytest.mark.slow
@settings(
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
@given(formula=expectation_formulas())
def test_prob_sat_carries_over(temp_config, formula):
    temp_config.load_config(max_terms=8)
    if not satisfiable(formula, "prob").satisfiable:
        return
    # a probability measure is a belief function and a singleton credal set
    for semantics in ("lp", "bel"):
        verdict = satisfiable(formula, semantics)
        assert verdict.satisfiable
        assert check(verdict.certificate, formula).verdict


# ===== exhaustive corpus over p and q =====

P, Q = Prop("p"), Prop("q")
BASIS = (P, Not(P), Q, And(P, Q), Or(P, Q))
COEFS = (-2, -1, 1, 2)
RHS = range(-2, 3)


def indicator(phi):
    return Gamble(((F(1), phi),))


def corpus_literals():
    """Every one- and two-term inequality over the indicator basis."""
    for a, phi, b in product(COEFS, BASIS, RHS):
        yield ExpectationInequality(((F(a), indicator(phi)),), F(b))
    for (phi, psi), a1, a2, b in product(combinations(BASIS, 2), COEFS, COEFS, RHS):
        terms = ((F(a1), indicator(phi)), (F(a2), indicator(psi)))
        yield ExpectationInequality(terms, F(b))


SEEDS = [ExpectationInequality(((F(2), indicator(phi)),), F(1)) for phi in BASIS] + [
    ExpectationInequality(((F(1), indicator(phi)), (F(-1), indicator(psi))), F(0))
    for phi, psi in combinations(BASIS, 2)
]


def boolean_layer(formulas):
    for formula in formulas:
        yield Not(formula)
    for left, right in combinations(formulas, 2):
        yield And(left, right)
        yield Or(left, right)


def corpus(depth):
    if depth == 0:
        formulas = corpus_literals()
    elif depth == 1:
        formulas = boolean_layer(SEEDS)
    else:
        inner = [f for f in boolean_layer(SEEDS[: len(BASIS)]) if not isinstance(f, Not)]
        formulas = [Not(f) for f in inner]
        for seed, f in product(SEEDS, inner):
            formulas.extend((And(seed, f), Or(Not(seed), f)))
    # keep to the default --max-terms budget
    return [f for f in formulas if len(expectation_terms(f)) <= 4]


@pytest.mark.slow
@pytest.mark.parametrize("depth", [0, 1, 2])
def test_exhaustive_corpus(depth):
    formulas = corpus(depth)
    assert len(formulas) > 100
    for formula in formulas:
        text = format_formula(formula)
        verdicts = {}
        for semantics in SEMANTICS:
            verdict = satisfiable(formula, semantics)
            verdicts[semantics] = verdict.satisfiable
            if verdict.satisfiable:
                assert check(verdict.certificate, formula).verdict, (semantics, text)
            else:
                assert verdict.certificate is None
        assert verdicts["prob"] is brute_force_prob_sat(formula), text
        # probability measures are belief functions, beliefs are lower envelopes
        if verdicts["prob"]:
            assert verdicts["bel"], text
        if verdicts["bel"]:
            assert verdicts["lp"], text
