import random
import sys
from fractions import Fraction

import pytest

from rahman.params import ParamSet, random_generic_params


@pytest.fixture
def rng():
    return random.Random(20070503)


@pytest.fixture
def p1234():
    return ParamSet(1, 2, 3, 4)


@pytest.fixture
def chain_q():
    """The (1/2, 1/3, 1/5, 1/7) chain used throughout."""
    return Fraction(1, 2), Fraction(1, 3), Fraction(1, 5), Fraction(1, 7)


def generic_points(seed, count):
    r = random.Random(seed)
    return [random_generic_params(r) for _ in range(count)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
