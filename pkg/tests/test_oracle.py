from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mibs.characters import Character, compose_characters, exact_solution_character, random_character, substitute_characters
from mibs.core import MultiIndex
from mibs.evaluation import Poly, TruncSeries, eval_bseries
from mibs.oracle import compose_oracle, flow_series, point_series, substitute_oracle, substituted_field
from mibs.verify import desk_characters, random_point, random_poly, regraded_law

Y2 = Poly.of(0, 0, 1)


def test_flow_series_examples():
    assert flow_series(Poly.of(0, 1), 1, 4).coeffs == tuple(Fraction(1, math.factorial(n)) for n in range(5))
    assert flow_series(Poly.const(1), 0, 3).coeffs == (0, 1, 0, 0)
    assert flow_series(Y2, 1, 3).coeffs == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        flow_series(Y2, 1, -1)


@given(st.integers(0, 10_000))
def test_flow_series_solves_the_ode(seed):
    rng = random.Random(seed)
    f, y0 = random_poly(rng, 3), random_point(rng)
    y = flow_series(f, y0, 5)
    derivative = TruncSeries(4, tuple(c * n for n, c in enumerate(y.coeffs) if n))
    assert derivative == f.compose_series(y).truncate(4)
    assert y[0] == y0


def test_compose_oracle_examples():
    e = Character.euler(3)
    assert compose_oracle(e, e, Y2, 1, 3).coeffs == (1, 2, 2, 1)
    rng = random.Random(7)
    b = random_character(3, rng)
    f, y0 = random_poly(rng, 5), Fraction(2, 3)
    assert compose_oracle(Character.identity(3), b, f, y0, 3) == point_series(b, f, y0, 3)
    assert compose_oracle(b, Character.identity(3), f, y0, 3) == point_series(b, f, y0, 3)


@given(st.integers(0, 10_000))
def test_composition_law_against_oracle(seed):
    rng = random.Random(seed)
    a, b = random_character(4, rng), random_character(4, rng)
    f, y0 = random_poly(rng, 6), random_point(rng)
    assert compose_oracle(a, b, f, y0, 4) == eval_bseries(compose_characters(b, a), f, y0, 4)


def test_exact_flow_composes_with_itself():
    # two half steps of the exact flow are one full step
    half = exact_solution_character(5)
    half = Character(5, 1, {beta: v / 2 ** beta.length for beta, v in half.values.items()})
    assert compose_characters(half, half) == exact_solution_character(5)


def test_substitute_oracle_examples():
    rng = random.Random(8)
    a = random_character(4, rng)
    g, y0 = random_poly(rng, 5), Fraction(-1, 3)
    assert substitute_oracle(a, Character.delta_z0(4), g, y0, 4) == eval_bseries(a, g, y0, 4)
    assert substitute_oracle(Character.identity(4), random_character(4, rng, empty=0), g, y0, 4).coeffs == (y0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        substituted_field(Character.euler(2), g, 2)
    with pytest.raises(ValueError):
        substituted_field(Character.delta_z0(2), g, 2, "other")


def test_desk_instance():
    p1, p2, q = Fraction(2, 3), Fraction(-5, 4), Fraction(3, 2)
    a, b = desk_characters(4, p1, p2, q)
    z0z1 = MultiIndex.of({0: 1, 1: 1})
    assert substitute_characters(b, a)(z0z1) == p1 * q + p2
    g = Poly.of(1, 2, -1, 1)
    y0 = Fraction(1, 2)
    law = eval_bseries(substitute_characters(b, a), g, y0, 4)
    assert substitute_oracle(a, b, g, y0, 4, "normalized") == law
    # h^2 coefficient of the oracle, with the g'g part singled out
    assert law[2] == (p1 * q + p2) * g.derivative()(y0) * g(y0)
    literal = substitute_oracle(a, b, g, y0, 4, "literal")
    assert literal != law
    assert literal == regraded_law(b, a, g, y0, 4)


@given(st.integers(0, 10_000))
def test_substitution_law_against_oracle(seed):
    rng = random.Random(seed)
    a = random_character(4, rng, empty=rng.randint(-2, 2))
    b = random_character(4, rng, empty=0)
    g, y0 = random_poly(rng, 6), random_point(rng)
    assert substitute_oracle(a, b, g, y0, 4) == eval_bseries(substitute_characters(b, a), g, y0, 4)
