"""Hypothesis strategies for formulas, gambles and structures."""

from fractions import Fraction

from expectlogic.formulas import (
    TRUE,
    And,
    ExpectationInequality,
    Gamble,
    Implies,
    Not,
    Or,
    Prop,
)
from expectlogic.models import (
    BeliefStructure,
    CredalStructure,
    PossibilityStructure,
    ProbabilityStructure,
    World,
)
from expectlogic.utils import powerset
from hypothesis import strategies as st

PROPS = ("p", "q", "r")

coefficients = st.fractions(min_value=-3, max_value=3, max_denominator=4)
small_ints = st.integers(min_value=-2, max_value=2).map(Fraction)


def propositional(props=PROPS, max_leaves=4):
    leaves = st.sampled_from([Prop(p) for p in props] + [TRUE])
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
            st.tuples(sub, sub).map(lambda t: Implies(*t)),
        ),
        max_leaves=max_leaves,
    )


def gambles(props=PROPS, max_terms=3, coefs=coefficients):
    term = st.tuples(coefs, propositional(props, max_leaves=3))
    return st.lists(term, min_size=1, max_size=max_terms).map(lambda t: Gamble(tuple(t)))


def nonnegative_gambles(props=PROPS, max_terms=3):
    return gambles(props, max_terms, st.fractions(min_value=0, max_value=3, max_denominator=4))


@st.composite
def worlds(draw, props=PROPS, min_size=1, max_size=4):
    valuations = draw(
        st.lists(
            st.frozensets(st.sampled_from(props)),
            min_size=min_size,
            max_size=max_size,
        )
    )
    return tuple(World(f"w{i}", v) for i, v in enumerate(valuations, 1))


@st.composite
def distributions(draw, size, denominator=8):
    """Probability vector of the given size on a 1/denominator grid."""
    cuts = sorted(
        draw(st.lists(st.integers(0, denominator), min_size=size - 1, max_size=size - 1))
    )
    bounds = [0, *cuts, denominator]
    return [Fraction(hi - lo, denominator) for lo, hi in zip(bounds, bounds[1:])]


@st.composite
def probability_structures(draw, props=PROPS, max_worlds=4):
    ws = draw(worlds(props, max_size=max_worlds))
    weights = draw(distributions(len(ws)))
    return ProbabilityStructure(ws, mu={w.id: x for w, x in zip(ws, weights)})


@st.composite
def credal_structures(draw, props=PROPS, max_worlds=4, max_measures=3):
    ws = draw(worlds(props, max_size=max_worlds))
    count = draw(st.integers(1, max_measures))
    measures = tuple(
        {w.id: x for w, x in zip(ws, draw(distributions(len(ws))))} for _ in range(count)
    )
    return CredalStructure(ws, measures=measures)


@st.composite
def belief_structures(draw, props=PROPS, max_worlds=4, max_focal=4):
    ws = draw(worlds(props, max_size=max_worlds))
    subsets = [frozenset(s) for s in powerset([w.id for w in ws], nonempty=True)]
    focal = draw(
        st.lists(st.sampled_from(subsets), min_size=1, max_size=max_focal, unique=True)
    )
    masses = draw(distributions(len(focal)))
    mass = {}
    for f, m in zip(focal, masses):
        if m:
            mass[f] = m
    if not mass:
        mass[focal[0]] = Fraction(1)
    return BeliefStructure(ws, mass=mass)


@st.composite
def possibility_structures(draw, props=PROPS, max_worlds=4):
    ws = draw(worlds(props, max_size=max_worlds))
    values = [Fraction(draw(st.integers(0, 8)), 8) for _ in ws]
    values[draw(st.integers(0, len(ws) - 1))] = Fraction(1)
    return PossibilityStructure(ws, poss={w.id: v for w, v in zip(ws, values)})


def structures_of(kind, **kwargs):
    return {
        "prob": probability_structures,
        "lp": credal_structures,
        "bel": belief_structures,
        "poss": possibility_structures,
    }[kind](**kwargs)


def expectation_literals(props=("p", "q"), max_terms=2):
    term = st.tuples(small_ints, gambles(props, max_terms=2, coefs=small_ints))
    return st.builds(
        ExpectationInequality,
        st.lists(term, min_size=1, max_size=max_terms).map(tuple),
        small_ints,
    )


def expectation_formulas(props=("p", "q"), max_leaves=3):
    return st.recursive(
        expectation_literals(props),
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
        ),
        max_leaves=max_leaves,
    )
