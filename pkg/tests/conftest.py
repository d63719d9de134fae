from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from mibs.core import Forest, MultiIndex, forests_up_to, populated_up_to
from mibs.evaluation import Poly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 6))


def multi_indices(max_letter: int = 4, max_mult: int = 3):
    return st.dictionaries(st.integers(0, max_letter), st.integers(1, max_mult), max_size=4).map(MultiIndex.of)


def populated(max_order: int = 5):
    return st.sampled_from(populated_up_to(max_order))


def forests(max_order: int = 4, include_empty: bool = True):
    return st.sampled_from(forests_up_to(max_order, include_empty=include_empty))


def polys(min_degree: int = 0, max_degree: int = 7):
    return st.lists(fractions, min_size=min_degree + 1, max_size=max_degree + 1).map(lambda cs: Poly(tuple(cs)))


def generic_poly(degree: int = 7) -> Poly:
    """A fixed polynomial with no special structure, degree above any order tested."""
    coeffs = [Fraction(3, 2), Fraction(-1), Fraction(2, 3), Fraction(1, 5), Fraction(-7, 4), Fraction(1, 3)]
    return Poly(tuple(coeffs[i % len(coeffs)] + i for i in range(degree + 1)))


__all__ = ["fractions", "multi_indices", "populated", "forests", "polys", "generic_poly", "Forest"]
