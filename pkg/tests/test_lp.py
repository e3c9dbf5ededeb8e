from fractions import Fraction

import pytest
from expectlogic.errors import LPError
from expectlogic.lp import LinearSystem, Relation, format_system, lp_feasible, lp_optimize
from hypothesis import given
from hypothesis import strategies as st

F = Fraction


def make_system(*names, nonnegative=True):
    system = LinearSystem()
    for name in names:
        system.add_variable(name, nonnegative=nonnegative)
    return system


def test_feasible_with_exact_witness():
    system = make_system("x", "y")
    system.add({"x": 1, "y": 1}, "=", 1)
    system.add({"x": 3}, ">=", 1)
    system.add({"y": 2}, ">=", F(1, 3))
    witness = lp_feasible(system)
    assert witness is not None
    assert witness["x"] + witness["y"] == 1
    assert witness["x"] >= F(1, 3)
    assert witness["y"] >= F(1, 6)
    assert all(isinstance(v, Fraction) for v in witness.values())


def test_infeasible():
    system = make_system("x", "y")
    system.add({"x": 1, "y": 1}, "=", 1)
    system.add({"x": 1}, ">", F(1, 2))
    system.add({"y": 1}, ">=", F(1, 2))
    assert lp_feasible(system) is None


def test_strict_inequalities():
    # x > 0 and x < 1/1000000 is feasible over the rationals
    system = make_system("x", nonnegative=False)
    system.add({"x": 1}, ">", 0)
    system.add({"x": 1}, "<", F(1, 1000000))
    witness = lp_feasible(system)
    assert 0 < witness["x"] < F(1, 1000000)

    system = make_system("x", nonnegative=False)
    system.add({"x": 1}, ">", 0)
    system.add({"x": 1}, "<=", 0)
    assert lp_feasible(system) is None


def test_free_variables():
    system = make_system("x", "y", nonnegative=False)
    system.add({"x": 1, "y": -1}, "=", -5)
    system.add({"x": 1}, "<=", -2)
    witness = lp_feasible(system)
    assert witness["x"] <= -2
    assert witness["x"] - witness["y"] == -5


def test_no_constraints():
    system = make_system("x")
    assert lp_feasible(system) == {"x": 0}


def test_optimize():
    system = make_system("x", "y")
    system.add({"x": 1, "y": 1}, "<=", 4)
    system.add({"x": 1, "y": 3}, "<=", 6)
    system.set_objective({"x": 3, "y": 5}, maximize=True)
    result = lp_optimize(system)
    assert result.status == "optimal"
    assert result.optimum == 14
    assert result.witness == {"x": 3, "y": 1}


def test_optimize_minimum_over_simplex():
    system = make_system("a", "b", "c")
    system.add({"a": 1, "b": 1, "c": 1}, "=", 1)
    system.add({"a": 1}, ">=", F(1, 4))
    system.set_objective({"a": 2, "b": 1, "c": 3})
    assert lp_optimize(system).optimum == F(5, 4)


def test_optimize_unbounded_and_infeasible():
    system = make_system("x")
    system.add({"x": 1}, ">=", 1)
    system.set_objective({"x": 1}, maximize=True)
    assert lp_optimize(system).status == "unbounded"

    system = make_system("x")
    system.add({"x": 1}, "<=", -1)
    system.set_objective({"x": 1})
    assert lp_optimize(system).status == "infeasible"


def test_errors():
    system = make_system("x")
    with pytest.raises(LPError, match="defined twice"):
        system.add_variable("x")
    with pytest.raises(LPError, match="Unknown LP variables"):
        system.add({"z": 1}, ">=", 0)
    system.add({"x": 1}, ">=", 0)
    with pytest.raises(LPError, match="declared before constraints"):
        system.add_variable("y")
    with pytest.raises(LPError, match="needs an objective"):
        lp_optimize(system)
    system.add({"x": 1}, ">", 0)
    system.set_objective({"x": 1})
    with pytest.raises(LPError, match="non-strict"):
        lp_optimize(system)


def test_negated_relations_are_stored_as_ge():
    system = make_system("x")
    constraint = system.add({"x": 2}, "<=", 3)
    assert constraint.relation is Relation.GE
    assert constraint.coefs == (-2,)
    assert constraint.rhs == -3


def test_format_system():
    system = make_system("x", "y")
    system.add({"x": 1, "y": -1}, ">=", F(1, 2), label="gap")
    system.set_objective({"y": 1})
    assert format_system(system) == (
        "variables: x (>= 0), y (>= 0)\ngap: 1 x - 1 y >= 1/2\nminimize: 1 y"
    )


@given(
    st.lists(
        st.tuples(
            st.fractions(min_value=-3, max_value=3, max_denominator=3),
            st.fractions(min_value=-3, max_value=3, max_denominator=3),
            st.sampled_from([">=", ">", "=", "<=", "<"]),
            st.fractions(min_value=-2, max_value=2, max_denominator=3),
        ),
        min_size=1,
        max_size=4,
    )
)
def test_witnesses_satisfy_their_system(rows):
    system = make_system("x", "y")
    system.add({"x": 1, "y": 1}, "=", 1)
    for a, b, relation, rhs in rows:
        system.add({"x": a, "y": b}, relation, rhs)
    witness = lp_feasible(system)
    if witness is not None:
        assert not system.violations(witness)
