"""Expectation operators for the structure kinds.

Gambles are evaluated world by world on the world's valuation. The
threshold form x1 + sum (x[i+1] - x[i]) nu(X > x[i]) is shared by the
probability, belief/plausibility and possibility expectations through
`choquet`.
"""

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from expectlogic.errors import KindMismatchError
from expectlogic.formulas import Gamble, negate_terms
from expectlogic.gambles import gamble_value
from expectlogic.lp import LinearSystem, lp_optimize
from expectlogic.models import (
    BeliefStructure,
    CredalStructure,
    PossibilityStructure,
    ProbabilityStructure,
    Structure,
    World,
    belief,
    measure_of,
    plausibility,
    possibility,
)
from expectlogic.utils import powerset

logger = logging.getLogger(__name__)

ZERO = Fraction(0)


@dataclass(frozen=True)
class ValueProfile:
    """Distinct values of a gamble with the world sets above each threshold.

    above[i] is the set of worlds where the gamble exceeds values[i]; there is
    one set per value except the largest.
    """

    values: tuple[Fraction, ...]
    above: tuple[frozenset[str], ...]
    world_values: Mapping[str, Fraction]


def world_values(worlds: Sequence[World], gamble: Gamble) -> dict[str, Fraction]:
    return {w.id: gamble_value(gamble, w.valuation()) for w in worlds}


def value_profile(worlds: Sequence[World], gamble: Gamble) -> ValueProfile:
    per_world = world_values(worlds, gamble)
    values = tuple(sorted(set(per_world.values())))
    above = tuple(
        frozenset(wid for wid, v in per_world.items() if v > x) for x in values[:-1]
    )
    return ValueProfile(values, above, per_world)


def choquet(profile: ValueProfile, weight: Callable[[frozenset[str]], Fraction]) -> Fraction:
    """x1 + sum over thresholds of (x[i+1] - x[i]) * weight(X > x[i])."""
    values = profile.values
    total = values[0]
    for i, upper_set in enumerate(profile.above):
        total += (values[i + 1] - values[i]) * weight(upper_set)
    return total


def negated(gamble: Gamble) -> Gamble:
    return Gamble(negate_terms(gamble.terms))


# ===== probability =====


def expect_measure(worlds: Sequence[World], mu: Mapping[str, Fraction], gamble: Gamble) -> Fraction:
    """Per-world weighted sum of the gamble's values."""
    per_world = world_values(worlds, gamble)
    return sum((mu.get(wid, ZERO) * v for wid, v in per_world.items()), ZERO)


def expect_prob(structure: ProbabilityStructure, gamble: Gamble) -> Fraction:
    """Sum over the values x of the gamble of x * mu(X = x)."""
    per_world = world_values(structure.worlds, gamble)
    total = ZERO
    for x in sorted(set(per_world.values())):
        level_set = [wid for wid, v in per_world.items() if v == x]
        total += x * measure_of(structure.mu, level_set)
    return total


def expect_prob_telescoping(structure: ProbabilityStructure, gamble: Gamble) -> Fraction:
    profile = value_profile(structure.worlds, gamble)
    return choquet(profile, lambda event: measure_of(structure.mu, event))


# ===== credal sets =====


@dataclass(frozen=True)
class CredalBounds:
    lower: Fraction
    upper: Fraction
    # positions of the attaining measures in the credal list (first one wins)
    lower_index: int
    upper_index: int


def expect_bounds(structure: CredalStructure, gamble: Gamble) -> CredalBounds:
    """Minimum and maximum of the expectation over the listed measures."""
    values = [expect_measure(structure.worlds, mu, gamble) for mu in structure.measures]
    lower, upper = min(values), max(values)
    return CredalBounds(lower, upper, values.index(lower), values.index(upper))


# ===== belief functions =====


def expect_choquet(structure: BeliefStructure, gamble: Gamble, mode: str = "bel") -> Fraction:
    """Expected belief (mode bel) or expected plausibility (mode plaus)."""
    if mode not in ("bel", "plaus"):
        msg = f'Unknown Choquet mode "{mode}", expected bel or plaus.'
        raise ValueError(msg)
    weight = belief if mode == "bel" else plausibility
    profile = value_profile(structure.worlds, gamble)
    return choquet(profile, lambda event: weight(structure, event))


def mass_min_oracle(structure: BeliefStructure, gamble: Gamble, mode: str = "min") -> Fraction:
    """Sum over focal sets A of m(A) times the min (or max) of the gamble on A."""
    if mode not in ("min", "max"):
        msg = f'Unknown oracle mode "{mode}", expected min or max.'
        raise ValueError(msg)
    pick = min if mode == "min" else max
    per_world = world_values(structure.worlds, gamble)
    return sum(
        (m * pick(per_world[wid] for wid in focal) for focal, m in structure.mass.items()),
        ZERO,
    )


def _polytope_minimum(structure: BeliefStructure, values: Mapping[str, Fraction]) -> Fraction:
    system = LinearSystem()
    ids = structure.world_ids
    names = {wid: system.add_variable(f"mu_{wid}", nonnegative=True) for wid in ids}
    system.add(dict.fromkeys(names.values(), 1), "=", 1, label="total")
    for subset in powerset(ids, nonempty=True):
        bel = belief(structure, frozenset(subset))
        if bel > 0 and len(subset) < len(ids):
            system.add(
                {names[wid]: 1 for wid in subset}, ">=", bel, label=f"bel_{'_'.join(subset)}"
            )
    system.set_objective({names[wid]: values[wid] for wid in ids})
    result = lp_optimize(system)
    logger.debug("-> Dominating-measure polytope minimum: %s", result.optimum)
    return result.optimum


def belief_polytope_minimum(structure: BeliefStructure, gamble: Gamble) -> Fraction:
    """min of E_mu(gamble) over the measures mu with mu(U) >= Bel(U) for all U."""
    return _polytope_minimum(structure, world_values(structure.worlds, gamble))


def belief_polytope_event_minimum(structure: BeliefStructure, event) -> Fraction:
    """min of mu(event) over the dominating measures of the belief function."""
    event = frozenset(event)
    values = {wid: Fraction(int(wid in event)) for wid in structure.world_ids}
    return _polytope_minimum(structure, values)


# ===== possibility =====


def expect_poss(structure: PossibilityStructure, gamble: Gamble) -> Fraction:
    profile = value_profile(structure.worlds, gamble)
    return choquet(profile, lambda event: possibility(structure, event))


# ===== dispatch =====


def expect_lower(structure: Structure, gamble: Gamble) -> Fraction:
    if isinstance(structure, ProbabilityStructure):
        return expect_prob(structure, gamble)
    if isinstance(structure, CredalStructure):
        return expect_bounds(structure, gamble).lower
    if isinstance(structure, BeliefStructure):
        return expect_choquet(structure, gamble, "bel")
    if isinstance(structure, PossibilityStructure):
        return -expect_poss(structure, negated(gamble))
    msg = f"No expectation on {structure.kind} structures."
    raise KindMismatchError(msg)


def expect_upper(structure: Structure, gamble: Gamble) -> Fraction:
    if isinstance(structure, ProbabilityStructure):
        return expect_prob(structure, gamble)
    if isinstance(structure, CredalStructure):
        return expect_bounds(structure, gamble).upper
    if isinstance(structure, BeliefStructure):
        return expect_choquet(structure, gamble, "plaus")
    if isinstance(structure, PossibilityStructure):
        return expect_poss(structure, gamble)
    msg = f"No expectation on {structure.kind} structures."
    raise KindMismatchError(msg)


def expect(structure: Structure, gamble: Gamble, mode: str = "point") -> Fraction:
    """Expectation in the given mode; point is the value e(gamble) takes in formulas.

    Credal structures have no point expectation.
    """
    if mode == "lower":
        return expect_lower(structure, gamble)
    if mode == "upper":
        return expect_upper(structure, gamble)
    if mode != "point":
        msg = f'Unknown mode "{mode}".'
        raise ValueError(msg)
    if isinstance(structure, CredalStructure):
        msg = "Credal structures have lower and upper expectations only."
        raise KindMismatchError(msg)
    if isinstance(structure, PossibilityStructure):
        return expect_poss(structure, gamble)
    return expect_lower(structure, gamble)
