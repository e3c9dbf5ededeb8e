from fractions import Fraction

import pytest
from expectlogic.errors import UnassignedPropositionError
from expectlogic.formulas import (
    FALSE,
    TRUE,
    And,
    Gamble,
    Not,
    Or,
    Prop,
    all_assignments,
    branches,
    conjunction,
    disjunction,
    expectation_terms,
    falsifying_assignment,
    formula_size,
    holds,
    indicator,
    is_propositional,
    literals,
    map_literals,
    partial_evaluate,
    propositions,
)
from expectlogic.parser import parse

p, q, r = Prop("p"), Prop("q"), Prop("r")


def test_holds():
    f = parse("p -> q | !r", "prop")
    assert holds(f, {"p": False, "q": False, "r": True})
    assert not holds(f, {"p": True, "q": False, "r": True})
    assert holds(TRUE, {})
    assert not holds(FALSE, {})


def test_unassigned_proposition():
    with pytest.raises(UnassignedPropositionError, match='"q" is not assigned'):
        holds(And(p, q), {"p": True})


def test_conjunction_disjunction():
    assert conjunction([]) == TRUE
    assert disjunction([]) == FALSE
    assert conjunction([p, q, r]) == And(And(p, q), r)
    assert disjunction([p]) == p


def test_propositions_and_literals():
    f = parse("e(p + q) >= 1 & !(e(r) >= 0) | e(p + q) >= 1")
    assert propositions(f) == ("p", "q", "r")
    assert len(literals(f)) == 2
    assert expectation_terms(f) == [
        Gamble(((Fraction(1), p), (Fraction(1), q))),
        indicator(r),
    ]


def test_formula_size():
    assert formula_size(p) == 1
    assert formula_size(And(p, Not(q))) == 4
    # e-literal: node + (coef + gamble) per term; gamble: (coef + formula) per term
    assert formula_size(parse("e(p) >= 0")) == 1 + 1 + (1 + 1)
    assert is_propositional(And(p, TRUE))
    assert not is_propositional(parse("e(p) >= 0"))


def test_partial_evaluate():
    a, b = parse("e(p) >= 0"), parse("e(q) >= 0")
    f = Or(a, Not(b))
    assert partial_evaluate(f, {}) is None
    assert partial_evaluate(f, {a: True}) is True
    assert partial_evaluate(f, {a: False}) is None
    assert partial_evaluate(f, {a: False, b: True}) is False


def test_branches_cover_models():
    a, b, c = (parse(f"e({x}) >= 0") for x in "pqr")
    f = And(Or(a, b), Not(c))
    found = list(branches(f))
    # every branch fixes c to False and is a model whatever the rest is
    assert all(branch[c] is False for branch in found)
    models = 0
    for values in all_assignments(["a", "b", "c"]):
        truth = {a: values["a"], b: values["b"], c: values["c"]}
        in_branch = sum(
            all(truth[k] == v for k, v in branch.items()) for branch in found
        )
        # branches are mutually exclusive and cover exactly the models
        expected = (values["a"] or values["b"]) and not values["c"]
        assert in_branch == int(expected)
        models += in_branch
    assert models == 3


def test_falsifying_assignment():
    a = parse("e(p) >= 0")
    assert falsifying_assignment(Or(a, Not(a))) is None
    assert falsifying_assignment(Or(a, a)) == {a: False}


def test_map_literals():
    f = parse("!(e(p) >= 0) -> e(q) >= 1")
    g = map_literals(f, lambda lit: Not(lit))
    assert g.left == Not(Not(f.left.arg))
    assert map_literals(TRUE, lambda lit: 1 / 0) == TRUE


def test_all_assignments():
    rows = list(all_assignments(["p", "q"]))
    assert rows[0] == {"p": True, "q": True}
    assert rows[-1] == {"p": False, "q": False}
    assert len(rows) == 4
