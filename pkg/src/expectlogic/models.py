"""Structures over a finite world set and their documents.

The JSON document format is described by pydantic models (schema level). The
runtime structures are frozen dataclasses; `validate` reports the violated
invariants of a structure as a list of messages.
"""

import json
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import ClassVar, Literal, Union

from pydantic import BaseModel, Field, ValidationError, constr, root_validator, validator

from expectlogic.errors import KindMismatchError, StructureError
from expectlogic.fields import Probability, Rational
from expectlogic.lp import LinearSystem, lp_feasible
from expectlogic.utils import format_rational, powerset

logger = logging.getLogger(__name__)

PROP_NAME = r"^[A-Za-z_][A-Za-z0-9_]*$"

# Required document key per structure kind.
KIND_KEYS = {
    "plain": None,
    "prob": "mu",
    "credal": "measures",
    "belief": "mass",
    "poss": "poss",
}

# inclusion-exclusion is checked directly up to this many worlds
B3_CHECK_MAX_WORLDS = 5


# === Runtime structures ===


class Valuation(Mapping):
    """Closed-world truth assignment: unlisted propositions are false."""

    def __init__(self, true_props: Iterable[str]):
        self._true = frozenset(true_props)

    def __getitem__(self, name: str) -> bool:
        return name in self._true

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._true))

    def __len__(self) -> int:
        return len(self._true)


@dataclass(frozen=True)
class World:
    id: str  # noqa: A003
    props: frozenset[str] = frozenset()

    def valuation(self) -> Valuation:
        return Valuation(self.props)


@dataclass(frozen=True)
class PlainStructure:
    kind: ClassVar[str] = "plain"
    worlds: tuple[World, ...]

    @property
    def world_ids(self) -> tuple[str, ...]:
        return tuple(w.id for w in self.worlds)


@dataclass(frozen=True)
class ProbabilityStructure(PlainStructure):
    kind: ClassVar[str] = "prob"
    mu: Mapping[str, Fraction] = None


@dataclass(frozen=True)
class CredalStructure(PlainStructure):
    kind: ClassVar[str] = "credal"
    measures: tuple[Mapping[str, Fraction], ...] = ()


@dataclass(frozen=True)
class BeliefStructure(PlainStructure):
    """Belief function given by its mass (Moebius) assignment."""

    kind: ClassVar[str] = "belief"
    mass: Mapping[frozenset[str], Fraction] = None


@dataclass(frozen=True)
class PossibilityStructure(PlainStructure):
    kind: ClassVar[str] = "poss"
    poss: Mapping[str, Fraction] = None


Structure = Union[
    PlainStructure,
    ProbabilityStructure,
    CredalStructure,
    BeliefStructure,
    PossibilityStructure,
]


# === Documents (schema level) ===


def unique_ids(cls, worlds):
    if not worlds:
        msg = "world set empty"
        raise ValueError(msg)
    ids = [w.id for w in worlds]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        msg = f"duplicate world ids: {', '.join(duplicates)}"
        raise ValueError(msg)
    return worlds


class WorldEntry(BaseModel):
    id: constr(min_length=1)  # noqa: A003
    props: list[constr(regex=PROP_NAME)] = []

    class Config:
        extra = "forbid"


class MassEntry(BaseModel):
    focal: list[str] = Field(alias="set")
    m: Rational

    class Config:
        extra = "forbid"
        allow_population_by_field_name = True

    @validator("focal")
    def focal_not_empty(cls, value):
        if not value:
            msg = "focal element empty"
            raise ValueError(msg)
        return value


class StructureDocument(BaseModel):
    kind: Literal["plain", "prob", "credal", "belief", "poss"]
    worlds: list[WorldEntry]
    mu: dict[str, Rational] | None = None
    measures: list[dict[str, Rational]] | None = None
    mass: list[MassEntry] | None = None
    poss: dict[str, Probability] | None = None

    class Config:
        extra = "forbid"
        json_encoders = {Fraction: format_rational}  # noqa: RUF012

    _unique_ids = validator("worlds", allow_reuse=True)(unique_ids)

    @root_validator(skip_on_failure=True)
    def kind_matches_keys(cls, values):
        required = KIND_KEYS[values["kind"]]
        for kind_key in ("mu", "measures", "mass", "poss"):
            present = values.get(kind_key) is not None
            if kind_key == required and not present:
                msg = f'kind "{values["kind"]}" requires the key "{kind_key}"'
                raise ValueError(msg)
            if kind_key != required and present:
                msg = f'key "{kind_key}" not allowed for kind "{values["kind"]}"'
                raise ValueError(msg)
        return values

    def to_structure(self) -> Structure:
        worlds = tuple(World(w.id, frozenset(w.props)) for w in self.worlds)
        if self.kind == "prob":
            return ProbabilityStructure(worlds, mu=dict(self.mu))
        if self.kind == "credal":
            return CredalStructure(worlds, measures=tuple(dict(m) for m in self.measures))
        if self.kind == "belief":
            mass = {}
            for entry in self.mass:
                key = frozenset(entry.focal)
                if key in mass:
                    msg = f"focal element listed twice: {sorted(key)}"
                    raise StructureError(msg, [msg])
                mass[key] = entry.m
            return BeliefStructure(worlds, mass=mass)
        if self.kind == "poss":
            return PossibilityStructure(worlds, poss=dict(self.poss))
        return PlainStructure(worlds)

    @classmethod
    def from_structure(cls, structure: Structure) -> "StructureDocument":
        order = {wid: index for index, wid in enumerate(structure.world_ids)}
        values = {
            "kind": structure.kind,
            "worlds": [{"id": w.id, "props": sorted(w.props)} for w in structure.worlds],
        }
        if isinstance(structure, ProbabilityStructure):
            values["mu"] = dict(structure.mu)
        elif isinstance(structure, CredalStructure):
            values["measures"] = [dict(m) for m in structure.measures]
        elif isinstance(structure, BeliefStructure):
            values["mass"] = [
                {"set": sorted(focal, key=order.__getitem__), "m": m}
                for focal, m in structure.mass.items()
            ]
        elif isinstance(structure, PossibilityStructure):
            values["poss"] = dict(structure.poss)
        return cls(**values)


def load_structure(document: str) -> Structure:
    """Parse and validate a structure document (JSON text)."""
    try:
        doc = StructureDocument.parse_raw(document)
    except ValidationError as exc:
        msg = f"Schema violation in structure document:\n{exc}"
        raise StructureError(msg, [str(exc)]) from exc
    structure = doc.to_structure()
    violations = validate(structure)
    if violations:
        msg = "Structure validation failed: " + "; ".join(violations)
        raise StructureError(msg, violations)
    logger.debug(
        "-> Loaded %s structure with %i worlds.", structure.kind, len(structure.worlds)
    )
    return structure


def dump_structure(structure: Structure) -> str:
    return StructureDocument.from_structure(structure).json(
        indent=2, by_alias=True, exclude_none=True
    )


def structure_to_dict(structure: Structure) -> dict:
    """JSON-compatible dict with rationals as "p/q" strings."""
    return json.loads(dump_structure(structure))


# === Validation ===


def _measure_violations(mu: Mapping[str, Fraction], ids: set[str], label: str) -> list[str]:
    violations = []
    unknown = sorted(set(mu) - ids)
    if unknown:
        violations.append(f"{label}: unknown world ids {unknown}")
    negative = sorted(wid for wid, value in mu.items() if value < 0)
    if negative:
        violations.append(f"{label}: negative weight at {negative}")
    total = sum(mu.values(), Fraction(0))
    if total != 1:
        violations.append(f"{label}: mass not 1 (sum is {format_rational(total)})")
    return violations


def _belief_violations(structure: BeliefStructure, ids: set[str]) -> list[str]:
    violations = []
    for focal, m in structure.mass.items():
        if not focal:
            violations.append("focal element empty")
        if focal - ids:
            violations.append(f"focal element with unknown worlds {sorted(focal - ids)}")
        if m < 0:
            violations.append(f"negative mass on {sorted(focal)}")
    total = sum(structure.mass.values(), Fraction(0))
    if total != 1:
        violations.append(f"mass not 1 (sum is {format_rational(total)})")
    if not violations and len(structure.worlds) <= B3_CHECK_MAX_WORLDS:
        violations.extend(inclusion_exclusion_violations(structure))
    return violations


def inclusion_exclusion_violations(
    structure: BeliefStructure, max_family: int | None = 3
) -> list[str]:
    """Direct check of Bel(U1 u ... u Un) >= sum_I (-1)^(|I|+1) Bel(n_I Ui).

    The mass representation makes this true by construction. Only families of
    at most max_family distinct subsets are visited; None visits every family,
    which is 2^(2^|W|) of them and only practical for |W| <= 3.
    """
    subsets = [frozenset(s) for s in powerset(structure.world_ids)]
    if max_family is None:
        max_family = len(subsets)
    bel = {s: belief(structure, s) for s in subsets}
    if bel[frozenset()] != 0:
        return ["Bel(empty) != 0"]
    if bel[frozenset(structure.world_ids)] != 1:
        return ["Bel(W) != 1"]
    for size in range(2, max_family + 1):
        for family in combinations(subsets, size):
            union = frozenset().union(*family)
            bound = Fraction(0)
            for k in range(1, size + 1):
                for sub in combinations(family, k):
                    bound += (-1) ** (k + 1) * bel[frozenset.intersection(*sub)]
            if bel[union] < bound:
                return [f"inclusion-exclusion fails for {[sorted(u) for u in family]}"]
    return []


def validate(structure: Structure) -> list[str]:
    """Violated invariants of the structure kind; empty list means ok."""
    violations = []
    ids = [w.id for w in structure.worlds]
    if not ids:
        violations.append("world set empty")
    if len(set(ids)) != len(ids):
        violations.append("duplicate world ids")
    id_set = set(ids)
    if isinstance(structure, ProbabilityStructure):
        violations.extend(_measure_violations(structure.mu, id_set, "mu"))
    elif isinstance(structure, CredalStructure):
        if not structure.measures:
            violations.append("credal set empty")
        for index, mu in enumerate(structure.measures, 1):
            violations.extend(_measure_violations(mu, id_set, f"measure {index}"))
    elif isinstance(structure, BeliefStructure):
        violations.extend(_belief_violations(structure, id_set))
    elif isinstance(structure, PossibilityStructure):
        unknown = sorted(set(structure.poss) - id_set)
        if unknown:
            violations.append(f"poss: unknown world ids {unknown}")
        if any(not 0 <= v <= 1 for v in structure.poss.values()):
            violations.append("poss value outside [0, 1]")
        if max(structure.poss.values(), default=Fraction(0)) != 1:
            violations.append("Poss(W) ≠ 1")
    return violations


# === Event weights ===


def _check_event(structure: Structure, event: Iterable[str]) -> frozenset[str]:
    event = frozenset(event)
    unknown = event - set(structure.world_ids)
    if unknown:
        msg = f"Unknown world ids in event: {sorted(unknown)}"
        raise StructureError(msg, [msg])
    return event


def measure_of(mu: Mapping[str, Fraction], event: Iterable[str]) -> Fraction:
    return sum((mu.get(wid, Fraction(0)) for wid in event), Fraction(0))


def belief(structure: BeliefStructure, event: frozenset[str]) -> Fraction:
    return sum((m for focal, m in structure.mass.items() if focal <= event), Fraction(0))


def plausibility(structure: BeliefStructure, event: frozenset[str]) -> Fraction:
    return sum((m for focal, m in structure.mass.items() if focal & event), Fraction(0))


def possibility(structure: PossibilityStructure, event: Iterable[str]) -> Fraction:
    return max((structure.poss.get(wid, Fraction(0)) for wid in event), default=Fraction(0))


def event_weight(structure: Structure, event: Iterable[str], mode: str = "point") -> Fraction:
    """Weight of a world set: mu, lower/upper envelope, Bel/Plaus or Poss/Nec."""
    if mode not in ("point", "lower", "upper"):
        msg = f'Unknown mode "{mode}".'
        raise ValueError(msg)
    event = _check_event(structure, event)
    if isinstance(structure, ProbabilityStructure):
        return measure_of(structure.mu, event)
    if isinstance(structure, CredalStructure):
        if mode == "point":
            msg = "Credal structures have lower and upper weights only."
            raise KindMismatchError(msg)
        values = [measure_of(mu, event) for mu in structure.measures]
        return min(values) if mode == "lower" else max(values)
    if isinstance(structure, BeliefStructure):
        return plausibility(structure, event) if mode == "upper" else belief(structure, event)
    if isinstance(structure, PossibilityStructure):
        if mode == "lower":
            # necessity
            return 1 - possibility(structure, set(structure.world_ids) - event)
        return possibility(structure, event)
    msg = "Plain structures carry no uncertainty measure."
    raise KindMismatchError(msg)


# === Conversions ===


def consonant_mass(structure: PossibilityStructure) -> BeliefStructure:
    """Belief structure with nested focal sets whose plausibility is Poss."""
    ranked = sorted(
        structure.worlds, key=lambda w: -structure.poss.get(w.id, Fraction(0))
    )
    levels = [structure.poss.get(w.id, Fraction(0)) for w in ranked] + [Fraction(0)]
    mass = {}
    for k in range(1, len(ranked) + 1):
        m = levels[k - 1] - levels[k]
        if m:
            mass[frozenset(w.id for w in ranked[:k])] = m
    return BeliefStructure(structure.worlds, mass=mass)


def reduce_credal(structure: CredalStructure) -> CredalStructure:
    """Drop measures that lie in the convex hull of the remaining ones.

    Sets with the same convex closure have the same lower and upper
    expectations, so the result is equivalent for every query.
    """
    kept = list(structure.measures)
    index = 0
    while index < len(kept) and len(kept) > 1:
        target = kept[index]
        others = kept[:index] + kept[index + 1 :]
        system = LinearSystem()
        names = [system.add_variable(f"l{j}", nonnegative=True) for j in range(len(others))]
        system.add(dict.fromkeys(names, 1), "=", 1)
        for wid in structure.world_ids:
            coefs = {
                name: mu.get(wid, Fraction(0)) for name, mu in zip(names, others)
            }
            system.add(coefs, "=", target.get(wid, Fraction(0)), label=f"w_{wid}")
        if lp_feasible(system) is not None:
            logger.debug("-> Measure %i is a convex combination of the others.", index + 1)
            del kept[index]
        else:
            index += 1
    return CredalStructure(structure.worlds, measures=tuple(kept))
