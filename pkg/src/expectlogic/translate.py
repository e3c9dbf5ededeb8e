"""Translation of expectation formulas into likelihood formulas.

Under probability e(b1 phi1 + ... + bn phin) is b1 l(phi1) + ... + bn l(phin).
Under belief and possibility e(gamma) is expanded through the threshold form
x1 + sum (x[i+1] - x[i]) l(gamma > x[i]), where {gamma > x} is the
disjunction of the atoms weighted above x. There is no translation for
lower expectations; `lp_separation_pair` gives two credal structures that
no likelihood formula tells apart.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import combinations

from expectlogic.errors import TranslationError
from expectlogic.expectation import expect_lower
from expectlogic.formulas import (
    FALSE,
    TRUE,
    ExpectationInequality,
    Formula,
    Gamble,
    LikelihoodInequality,
    Not,
    Prop,
    conjunction,
    disjunction,
    format_formula,
    formula_size,
    holds,
    map_literals,
)
from expectlogic.gambles import Atom, canonical_form, enumerate_atoms
from expectlogic.modelcheck import check
from expectlogic.models import CredalStructure, World, event_weight
from expectlogic.parser import parse
from expectlogic.utils import powerset

logger = logging.getLogger(__name__)

TRANSLATABLE = ("prob", "bel", "poss")

# prob output never exceeds this multiple of the input size
LINEAR_BLOWUP_BOUND = 2

# prime-implicant covers are computed up to this many propositions
MINIMIZE_MAX_PROPS = 8


@dataclass(frozen=True)
class TranslationReport:
    output: Formula
    blowup: Fraction
    semantics: str

    @property
    def text(self) -> str:
        return format_formula(self.output)


# ===== prime implicants =====

# an implicant assigns True, False or None (don't care) to every proposition
Implicant = tuple[bool | None, ...]


def _merge(a: Implicant, b: Implicant) -> Implicant | None:
    diff = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
    if len(diff) != 1 or a[diff[0]] is None or b[diff[0]] is None:
        return None
    return tuple(None if i == diff[0] else x for i, x in enumerate(a))


def prime_implicants(minterms: Sequence[Implicant]) -> list[Implicant]:
    current = set(minterms)
    primes = set()
    while current:
        merged, used = set(), set()
        for a, b in combinations(sorted(current, key=_implicant_key), 2):
            combined = _merge(a, b)
            if combined is not None:
                merged.add(combined)
                used.update((a, b))
        primes.update(current - used)
        current = merged
    return sorted(primes, key=_implicant_key)


def _implicant_key(implicant: Implicant):
    return tuple({True: 0, False: 1, None: 2}[x] for x in implicant)


def _covers(implicant: Implicant, minterm: Implicant) -> bool:
    return all(x is None or x == y for x, y in zip(implicant, minterm))


def minimal_cover(minterms: Sequence[Implicant]) -> list[Implicant]:
    """Essential prime implicants plus a greedy completion."""
    primes = prime_implicants(minterms)
    uncovered = set(minterms)
    cover = []
    for minterm in minterms:
        covering = [p for p in primes if _covers(p, minterm)]
        if len(covering) == 1 and covering[0] not in cover:
            cover.append(covering[0])
    for implicant in cover:
        uncovered -= {m for m in uncovered if _covers(implicant, m)}
    while uncovered:
        best = max(
            (p for p in primes if p not in cover),
            key=lambda p: (sum(_covers(p, m) for m in uncovered), [-k for k in _implicant_key(p)]),
        )
        cover.append(best)
        uncovered -= {m for m in uncovered if _covers(best, m)}
    return sorted(cover, key=_implicant_key)


def _implicant_formula(props: Sequence[str], implicant: Implicant) -> Formula:
    parts = [Prop(p) if v else Not(Prop(p)) for p, v in zip(props, implicant) if v is not None]
    return conjunction(parts)


def atoms_formula(props: Sequence[str], atoms: Sequence[Atom]) -> Formula:
    """Short propositional formula true exactly at the given atoms."""
    total = 2 ** len(props)
    if not atoms:
        return FALSE
    if len(atoms) == total:
        return TRUE
    if len(props) > MINIMIZE_MAX_PROPS:
        return disjunction([atom.to_formula() for atom in atoms])
    cover = minimal_cover([atom.values for atom in atoms])
    return disjunction([_implicant_formula(props, implicant) for implicant in cover])


# ===== translation =====


def _likelihood_terms_prob(gamble: Gamble):
    return [(b, phi) for b, phi in gamble.terms], Fraction(0)


def _likelihood_terms_threshold(gamble: Gamble):
    canonical = canonical_form(gamble)
    levels = canonical.values()
    terms = []
    for low, high in zip(levels, levels[1:]):
        above = canonical.atoms_above(low)
        terms.append((high - low, atoms_formula(canonical.props, above)))
    return terms, levels[0]


def _translate_literal(literal, expand):
    if not isinstance(literal, ExpectationInequality):
        msg = f'Only expectation formulas are translated, got "{format_formula(literal)}".'
        raise TranslationError(msg)
    terms, bound = [], literal.bound
    for a, gamble in literal.terms:
        parts, constant = expand(gamble)
        terms.extend((a * c, phi) for c, phi in parts)
        bound -= a * constant
    if not terms:
        terms = [(Fraction(0), TRUE)]
    return LikelihoodInequality(tuple(terms), bound)


def translate(formula: Formula, semantics: str = "prob") -> TranslationReport:
    """Equivalent likelihood formula for prob, bel or poss structures."""
    if semantics == "lp":
        msg = (
            "Expectation formulas have no likelihood translation under lower "
            "probability; see lp_separation_pair."
        )
        raise TranslationError(msg)
    if semantics not in TRANSLATABLE:
        msg = f'Unknown semantics "{semantics}", expected one of {", ".join(TRANSLATABLE)}.'
        raise ValueError(msg)
    expand = _likelihood_terms_prob if semantics == "prob" else _likelihood_terms_threshold
    output = map_literals(formula, lambda literal: _translate_literal(literal, expand))
    blowup = Fraction(formula_size(output), formula_size(formula))
    if semantics == "prob" and blowup > LINEAR_BLOWUP_BOUND:
        msg = f"Translation blowup {blowup} exceeds the linear bound {LINEAR_BLOWUP_BOUND}."
        raise TranslationError(msg)
    logger.debug("-> Translated for %s with blowup %s", semantics, blowup)
    return TranslationReport(output, blowup, semantics)


# ===== separation under lower probability =====

SEPARATION_WORLDS = (
    World("w1", frozenset()),
    World("w2", frozenset({"p"})),
    World("w3", frozenset({"p", "q"})),
)
SEPARATION_GAMBLE = Gamble(((Fraction(1), Prop("p")), (Fraction(1), Prop("q"))))


def _grid_measures(ids: Sequence[str], denominator: int):
    n = denominator
    for a in range(n + 1):
        for b in range(n - a + 1):
            weights = (a, b, n - a - b)
            yield dict(zip(ids, (Fraction(w, n) for w in weights)))


def _rotations(mu: dict[str, Fraction]) -> tuple[dict[str, Fraction], ...]:
    ids = list(mu)
    values = [mu[i] for i in ids]
    rotated = []
    for shift in range(len(values), 0, -1):
        candidate = dict(zip(ids, values[shift:] + values[:shift]))
        if candidate not in rotated:
            rotated.append(candidate)
    return tuple(rotated)


@cache
def find_lp_separation_pair(
    max_denominator: int = 8,
) -> tuple[CredalStructure, CredalStructure, str]:
    """Search grid credal sets for two that likelihood formulas cannot tell apart.

    Worlds are w1 = {}, w2 = {p}, w3 = {p, q}, so 1 p + 1 q takes the values
    0, 1, 2 and every world set is definable over p and q. For each grid
    denominator d from 1 up, the first structure is the cyclic rotations of a
    grid measure and the second adds one more grid measure, both in lexical
    order. The first candidate with equal `lower_probability_signature` and
    a lower expectation of 1 p + 1 q that drops is returned, together with
    the formula `k e(1 p + 1 q) > n`, n/k being the lower value of the
    second structure, that only the first satisfies.
    """
    ids = [w.id for w in SEPARATION_WORLDS]
    props = ["p", "q"]
    for denominator in range(1, max_denominator + 1):
        for seed in _grid_measures(ids, denominator):
            base = _rotations(seed)
            first = CredalStructure(SEPARATION_WORLDS, measures=base)
            signature = lower_probability_signature(first, props)
            first_value = expect_lower(first, SEPARATION_GAMBLE)
            for extra in _grid_measures(ids, denominator):
                if extra in base:
                    continue
                second = CredalStructure(SEPARATION_WORLDS, measures=(*base, extra))
                second_value = expect_lower(second, SEPARATION_GAMBLE)
                if second_value == first_value:
                    continue
                if lower_probability_signature(second, props) != signature:
                    continue
                text = (
                    f"{second_value.denominator} e(1 p + 1 q) > {second_value.numerator}"
                )
                formula = parse(text)
                if not check(first, formula).verdict or check(second, formula).verdict:
                    continue
                logger.debug("-> Separation pair at denominator %s", denominator)
                return first, second, text
    msg = f"No separation pair on grids up to denominator {max_denominator}."
    raise TranslationError(msg)


def lp_separation_pair() -> tuple[CredalStructure, CredalStructure, str]:
    """Two credal structures with equal lower probabilities on every event.

    Returns the pair found by `find_lp_separation_pair` and an expectation
    formula that holds only in the first.
    """
    return find_lp_separation_pair()


def lower_probability_signature(
    structure: CredalStructure, props: Sequence[str]
) -> dict[str, Fraction]:
    """Lower probability of every event definable over props.

    Keys are the formulas (prime-implicant form) of the atom sets.
    """
    atoms = enumerate_atoms(props)
    signature = {}
    for subset in powerset(atoms):
        formula = atoms_formula(props, subset)
        extension = [
            w.id for w in structure.worlds if holds(formula, w.valuation())
        ]
        signature[format_formula(formula)] = event_weight(structure, extension, "lower")
    return signature
