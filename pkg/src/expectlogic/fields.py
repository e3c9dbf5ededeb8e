"""Custom model fields for pydantic

- Rational (exact number written as integer or "p/q" string)
- Probability (Rational restricted to the unit interval)
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any, Generator

from pydantic.errors import PydanticValueError
from pydantic.typing import AnyCallable

from expectlogic.errors import ExpectLogicError
from expectlogic.utils import parse_rational

__all__ = ["Probability", "Rational", "RationalError"]

logger = logging.getLogger(__name__)


class RationalError(PydanticValueError):
    code = "rational"
    msg_template = "invalid rational: {reason}"


class Rational(Fraction):
    """
    Exact rational as model field for pydantic.

    Accepts integers and strings "p/q" or "n". Floats are refused so that no
    binary rounding can enter a structure document. The value is stored as a
    plain fractions.Fraction.
    """

    @classmethod
    def __get_validators__(cls) -> Generator[AnyCallable, None, None]:
        yield cls.validate

    @classmethod
    def validate(cls, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, float):
            raise RationalError(reason="floats are not accepted, write p/q")
        try:
            return parse_rational(value)
        except ExpectLogicError as exc:
            raise RationalError(reason=str(exc)) from exc


class Probability(Rational):
    """Rational in [0, 1]."""

    @classmethod
    def __get_validators__(cls) -> Generator[AnyCallable, None, None]:
        yield cls.validate
        yield cls.check_unit_interval

    @classmethod
    def check_unit_interval(cls, value: Fraction) -> Fraction:
        if not 0 <= value <= 1:
            raise RationalError(reason=f"{value} is outside [0, 1]")
        return value
