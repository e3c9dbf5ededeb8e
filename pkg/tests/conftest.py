# Common pytest fixtures for all test modules
from fractions import Fraction

import pytest


@pytest.fixture(scope="session")
def datadir():
    """DATADIR as a Path"""
    from pathlib import Path

    return Path(__file__).resolve().parent / "data"


@pytest.fixture()
def temp_config():
    """
    Provides a temporary config that can be safely changed in test functions.

    After the test the budgets will be reset to default.
    """
    from expectlogic import config

    yield config

    # Reset the globally changed budgets to default.
    config.load_config()


@pytest.fixture()
def credal_pair():
    """The three-measure credal set and the same set with a fourth measure.

    Worlds w1, w2, w3 are marked by q2 (w2) and q3 (w3).
    """
    from expectlogic.models import CredalStructure, World

    worlds = (
        World("w1", frozenset()),
        World("w2", frozenset({"q2"})),
        World("w3", frozenset({"q3"})),
    )

    def measure(*weights):
        return {w.id: Fraction(x) for w, x in zip(worlds, weights)}

    base = (
        measure(0, "3/8", "5/8"),
        measure("5/8", 0, "3/8"),
        measure("3/8", "5/8", 0),
    )
    first = CredalStructure(worlds, measures=base)
    second = CredalStructure(worlds, measures=(*base, measure("5/8", "3/8", 0)))
    return first, second


@pytest.fixture()
def credal(credal_pair):
    return credal_pair[0]
