from fractions import Fraction

import pytest
from expectlogic.errors import KindMismatchError
from expectlogic.expectation import expect
from expectlogic.formulas import Prop
from expectlogic.modelcheck import (
    check,
    eval_likelihood,
    eval_term,
    upper_expectation_formula,
)
from expectlogic.models import PlainStructure, World, load_structure
from expectlogic.parser import likelihood_to_expectation, parse
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import structures_of

F = Fraction


@pytest.fixture()
def load(datadir):
    def _load(name):
        return load_structure((datadir / name).read_text(encoding="utf-8"))

    return _load


@pytest.mark.parametrize(
    ("name", "text", "verdict"),
    [
        ("prob.json", "e(p + 2 q) >= 1", True),
        ("prob.json", "e(p + 2 q) > 1", False),
        ("prob.json", "e(p) = 1/2 & e(q) < 1/2", True),
        ("prob.json", "e(p) - e(q) >= 1/4", True),
        ("prob.json", "l(p&q) >= 1/4 -> l(p) >= 1/2", True),
        ("prob.json", "!(l(!p) = 1/2)", False),
        ("belief.json", "e(p + q) >= 5/4", True),
        ("belief.json", "e(p + q) > 5/4", False),
        ("belief.json", "l(p) = 1/4", True),
        ("poss.json", "e(2 p + q) = 2", True),
        ("poss.json", "l(q) = 1/2 & l(!p) = 1/2", True),
        ("poss.json", "e(q) <= 1/4 | e(p) < 1", False),
    ],
)
def test_check(load, name, text, verdict):
    assert check(load(name), parse(text)).verdict is verdict


def test_check_credal_reads_lower_expectation(credal_pair):
    first, second = credal_pair
    assert check(first, parse("e(1 true + 1 q2 + 2 q3) >= 13/8")).verdict
    assert not check(first, parse("e(1 true + 1 q2 + 2 q3) > 13/8")).verdict
    assert not check(second, parse("e(1 true + 1 q2 + 2 q3) >= 13/8")).verdict
    # lower probability of q3
    assert eval_likelihood(first, Prop("q3")) == 0
    assert eval_term(first, parse("q3", "gamble")) == 0


def test_upper_expectation_formula(credal_pair):
    first, _ = credal_pair
    formula = parse("e(1 true + 1 q2 + 2 q3) >= 21/8")
    assert not check(first, formula).verdict
    assert check(first, upper_expectation_formula(formula)).verdict
    strict = upper_expectation_formula(parse("e(1 true + 1 q2 + 2 q3) > 21/8"))
    assert not check(first, strict).verdict


def test_trace(load):
    result = check(load("prob.json"), parse("e(p) >= 1/2 | e(q) > 0"))
    assert result.verdict
    assert [value for _, value in result.trace] == [F(1, 2), F(-1, 4)]
    assert result.trace_lines()[0] == "1 e(1 p) >= 1/2  [lhs = 1/2]"


def test_gamble_inequalities(load):
    structure = load("prob.json")
    result = check(structure, parse("p >= q"))
    assert result.verdict
    assert result.trace[0][1] == 0
    result = check(structure, parse("q >= p"))
    assert not result.verdict
    assert result.trace[0][1] == -1


def test_plain_structure():
    plain = PlainStructure((World("w1", frozenset({"p"})), World("w2", frozenset())))
    assert check(plain, parse("2 p <= p + 1 true")).verdict
    assert not check(plain, parse("p >= 1/2 true")).verdict
    with pytest.raises(KindMismatchError, match="no expectation"):
        check(plain, parse("e(p) >= 0"))
    with pytest.raises(KindMismatchError, match="no likelihood"):
        check(plain, parse("l(p) >= 0"))


def test_propositional_formula_is_rejected(load):
    with pytest.raises(KindMismatchError, match="not an inequality"):
        check(load("prob.json"), Prop("p"))


@pytest.mark.parametrize("kind", ["prob", "lp", "bel", "poss"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_likelihood_matches_expectation(kind, data):
    structure = data.draw(structures_of(kind, props=("p", "q")))
    for text in ("p", "p&!q", "p|q", "true"):
        phi = parse(text, "prop")
        mode = "lower" if kind == "lp" else "point"
        assert eval_likelihood(structure, phi) == expect(structure, parse(text, "gamble"), mode)


def test_likelihood_to_expectation():
    formula = parse("l(p) >= 1/2 | 2 l(p&!q) < 1/4")
    assert likelihood_to_expectation(formula) == parse("e(p) >= 1/2 | 2 e(p&!q) < 1/4")
