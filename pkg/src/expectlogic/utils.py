import logging
import re
from collections.abc import Iterable, Iterator
from fractions import Fraction
from itertools import chain, combinations
from math import lcm

from expectlogic.errors import ExpectLogicError

logger = logging.getLogger(__name__)

RATIONAL_PATTERN = re.compile(r"^\s*(?P<num>-?\d+)(?:\s*/\s*(?P<den>\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Read an integer or "p/q" string as an exact rational.

    Decimal points and exponents are rejected, no float ever enters.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        msg = f'Rational must be given as string "p/q" or integer, got {text!r}.'
        raise ExpectLogicError(msg)
    m = RATIONAL_PATTERN.match(text)
    if not m:
        msg = f'Not a rational "p/q" or integer: "{text}".'
        raise ExpectLogicError(msg)
    den = int(m["den"]) if m["den"] is not None else 1
    if den == 0:
        msg = f'Rational with zero denominator: "{text}".'
        raise ExpectLogicError(msg)
    return Fraction(int(m["num"]), den)


def format_rational(value: Fraction | int) -> str:
    """Reduced "p/q" spelling, plain integer when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def denominator_lcm(values: Iterable[Fraction]) -> int:
    return lcm(1, *(Fraction(v).denominator for v in values))


def powerset(items: Iterable, *, nonempty: bool = False) -> Iterator[tuple]:
    """All subsets ordered by size, then lexicographically by position."""
    items = list(items)
    start = 1 if nonempty else 0
    return chain.from_iterable(
        combinations(items, size) for size in range(start, len(items) + 1)
    )
