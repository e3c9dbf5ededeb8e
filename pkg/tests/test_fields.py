"""Tests for expectlogic.fields module."""

from fractions import Fraction

import pytest
from expectlogic.fields import Probability, Rational
from pydantic import BaseModel, ValidationError


@pytest.mark.parametrize(
    ("testdata", "expected"),
    [
        ("3/8", Fraction(3, 8)),
        ("-1/2", Fraction(-1, 2)),
        (2, Fraction(2)),
        ("10/4", Fraction(5, 2)),
        (Fraction(1, 3), Fraction(1, 3)),
    ],
)
def test_rational(testdata, expected) -> None:
    class Model(BaseModel):
        value: Rational

    m = Model(value=testdata)
    assert m.value == expected
    assert isinstance(m.value, Fraction)


@pytest.mark.parametrize("testdata", [0.375, "0.375", "1/0", "one"])
def test_rational_fail(testdata) -> None:
    class Model(BaseModel):
        value: Rational

    with pytest.raises(ValidationError, match="invalid rational"):
        Model(value=testdata)


def test_probability() -> None:
    class Model(BaseModel):
        p: Probability

    assert Model(p="1").p == 1
    assert Model(p=0).p == 0
    assert Model(p="5/8").p == Fraction(5, 8)
    with pytest.raises(ValidationError, match="outside"):
        Model(p="9/8")
    with pytest.raises(ValidationError, match="outside"):
        Model(p="-1/8")
