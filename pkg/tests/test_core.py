from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import forests, fractions, generic_poly, multi_indices, populated
from mibs.core import (
    EMPTY,
    EMPTY_FOREST,
    Forest,
    MultiIndex,
    bracket,
    derive,
    derive_forest,
    enumerate_forests,
    enumerate_populated,
    forest_product,
    inner_product,
    insert,
    is_populated,
    lincomb_from_json,
    lincomb_to_json,
    mono_product,
    pre_lie,
    pre_lie_lin,
    star1,
    star2,
    symmetry_factor,
)
from mibs.evaluation import Poly, elementary_differential, linear_differential
from mibs.lincomb import LinComb, lin_sum

M = MultiIndex.of
z0, z1 = M({0: 1}), M({1: 1})
z0z1 = M({0: 1, 1: 1})


def lc(terms):
    return LinComb({MultiIndex.parse(k): v for k, v in terms.items()})


# ---------------------------------------------------------------------------
# linear combinations


@given(st.lists(st.tuples(st.sampled_from("abcd"), fractions)), st.lists(st.tuples(st.sampled_from("abcd"), fractions)), fractions)
def test_lincomb_vector_space(xs, ys, c):
    x, y = LinComb(xs), LinComb(ys)
    assert x + y == y + x
    assert x - x == LinComb()
    assert (x + y) * c == x * c + y * c
    assert c * x == x * c
    assert -x == x * -1
    assert all(v != 0 for _, v in (x + y).items())


def test_lincomb_helpers():
    x = LinComb({"a": 1, "b": Fraction(1, 2)})
    assert x["c"] == 0 and x.coeff("b") == Fraction(1, 2)
    assert x.map_basis(lambda _: "z") == LinComb.of("z", Fraction(3, 2))
    assert x.flat_map(lambda b: LinComb({b: 1, "n": 1})) == LinComb({"a": 1, "b": Fraction(1, 2), "n": Fraction(3, 2)})
    assert lin_sum([x, x]) == x * 2
    assert LinComb() == 0 and not LinComb({"a": 0})
    assert hash(LinComb({"a": 1, "b": 2})) == hash(LinComb([("b", 2), ("a", 1)]))


# ---------------------------------------------------------------------------
# multi-indices and forests


def test_bracket_examples():
    assert bracket(z0z1) == 1
    assert bracket(EMPTY) == 0
    assert bracket(M({0: 5, 1: 3, 2: 1, 4: 1})) == 1
    assert not is_populated(EMPTY) and not is_populated(z1) and is_populated(z0)


def test_symmetry_factor_examples():
    assert symmetry_factor(M({0: 2, 2: 1})) == 2
    assert symmetry_factor(EMPTY) == 1
    assert symmetry_factor(Forest(((z0, 2),))) == 2
    assert symmetry_factor(Forest.of(M({0: 2, 2: 1}), M({0: 2, 2: 1}))) == 8


def test_inner_product():
    assert inner_product(z0z1, z0z1) == 1
    assert inner_product(M({0: 2, 2: 1}), M({0: 1, 1: 2})) == 0
    assert inner_product(Forest(((z0, 2),)), Forest(((z0, 2),))) == 2
    assert inner_product(Forest.of(z0), z0) == 0


@given(multi_indices())
def test_multi_index_round_trips(beta):
    assert MultiIndex.from_json(json.loads(json.dumps(beta.to_json()))) == beta
    assert MultiIndex.parse(beta.text()) == beta
    assert beta.length == sum(beta.as_dict().values())


def test_multi_index_text():
    assert M({0: 2, 1: 1, 2: 1}).text() == "z0^2 z1 z2"
    assert MultiIndex.parse("z0^2 z1 z2") == M({0: 2, 1: 1, 2: 1})
    assert MultiIndex.parse("z0 z0") == M({0: 2})
    assert EMPTY.text() == "1"
    for bad in ("x0", "z", "z0^", "z-1"):
        with pytest.raises(ValueError):
            MultiIndex.parse(bad)


def test_multi_index_json_rejects_non_integers():
    with pytest.raises(ValueError):
        MultiIndex.from_json({"0": 1.5})
    with pytest.raises(ValueError):
        MultiIndex.from_json({"0": True})


def test_forest_basics():
    f = Forest.of(z0z1, z0, z0)
    assert f.count == 3 and f.length == 4
    assert f == Forest.of(z0, z0z1, z0)
    assert f.monomial() == M({0: 3, 1: 1})
    assert f * Forest.of(z0) == Forest.of(z0, z0, z0, z0z1)
    assert Forest.from_json(json.loads(json.dumps(f.to_json()))) == f
    assert f.to_json() == [{"index": {"0": 1}, "rep": 2}, {"index": {"0": 1, "1": 1}, "rep": 1}]
    assert not EMPTY_FOREST and EMPTY_FOREST.count == 0
    with pytest.raises(ValueError):
        Forest.of(EMPTY)


# ---------------------------------------------------------------------------
# enumeration


def test_enumerate_populated_examples():
    assert enumerate_populated(1) == [z0]
    assert enumerate_populated(3) == [M({0: 1, 1: 2}), M({0: 2, 2: 1})]
    assert [b.text() for b in enumerate_populated(5)] == [
        "z0 z1^4", "z0^2 z1^2 z2", "z0^3 z2^2", "z0^3 z1 z3", "z0^4 z4",
    ]
    with pytest.raises(ValueError):
        enumerate_populated(0)


@pytest.mark.parametrize("order", range(1, 9))
def test_enumerate_populated_is_exhaustive(order):
    brute = set()
    # arity k >= 1 can occur at most (order - 1) // k times
    ranges = [range(order + 1)] + [range((order - 1) // k + 1) for k in range(1, order)]
    for mults in itertools.product(*ranges):
        beta = MultiIndex(tuple(enumerate(mults)))
        if beta.length == order and is_populated(beta):
            brute.add(beta)
    got = enumerate_populated(order)
    assert len(got) == len(set(got)) and set(got) == brute


def test_enumerate_forests_examples():
    assert enumerate_forests(1) == [Forest.of(z0)]
    assert set(enumerate_forests(2)) == {Forest.of(z0z1), Forest.of(z0, z0)}
    assert set(enumerate_forests(3)) == {
        Forest.of(M({0: 1, 1: 2})), Forest.of(M({0: 2, 2: 1})), Forest.of(z0z1, z0), Forest.of(z0, z0, z0),
    }
    assert [len(enumerate_forests(n)) for n in range(1, 7)] == [1, 2, 4, 8, 15, 29]
    assert enumerate_forests(4) == sorted(enumerate_forests(4), key=lambda f: (f.count, f))


# ---------------------------------------------------------------------------
# derivation and pre-Lie product


def test_derive_examples():
    assert derive(z0) == LinComb.of(z1)
    assert mono_product(LinComb.of(z0), derive(z0z1)) == lc({"z0 z1^2": 1, "z0^2 z2": 1})
    assert mono_product(LinComb.of(z0), derive(M({0: 1, 1: 2}))) == lc({"z0 z1^3": 1, "z0^2 z1 z2": 2})
    assert derive(z0z1, 2) == lc({"z1 z2": 3, "z0 z3": 1})
    assert derive(z0z1, 0) == LinComb.of(z0z1)


@given(multi_indices(), multi_indices(), st.integers(0, 3))
def test_derive_is_derivation_preserving_length(x, y, n):
    assert derive(x * y) == mono_product(derive(x), LinComb.of(y)) + mono_product(LinComb.of(x), derive(y))
    assert all(m.length == x.length for m in derive(x, n))


def test_pre_lie_examples():
    assert pre_lie(z0, z0) == LinComb.of(z0z1)
    assert pre_lie(z0, z0z1) == lc({"z0 z1^2": 1, "z0^2 z2": 1})
    assert pre_lie(z0z1, z0) == lc({"z0 z1^2": 1})


@given(populated(4), populated(4), populated(4))
def test_novikov_identities(x, y, z):
    X, Y, Z = LinComb.of(x), LinComb.of(y), LinComb.of(z)
    left = pre_lie_lin(pre_lie(x, y), Z) - pre_lie_lin(X, pre_lie(y, z))
    assert left == pre_lie_lin(pre_lie(y, x), Z) - pre_lie_lin(Y, pre_lie(x, z))
    assert pre_lie_lin(pre_lie(x, y), Z) == pre_lie_lin(pre_lie(x, z), Y)
    assert all(is_populated(m) for m in pre_lie(x, y))


# ---------------------------------------------------------------------------
# star2


def test_star2_examples():
    assert star2(Forest.of(z0), z0) == LinComb.of(z0z1)
    assert star2(Forest.of(z0, z0), z0z1) == lc({"z0^2 z1 z2": 3, "z0^3 z3": 1})
    assert star2(EMPTY_FOREST, z0z1) == LinComb.of(z0z1)
    assert star2(Forest.of(z0), EMPTY) == LinComb.of(Forest.of(z0))


def test_star2_forest_target_counts_standalone_slot():
    # each left tree either grafts onto a target component or stays separate
    assert star2(Forest.of(z0), Forest.of(z0)) == LinComb({Forest.of(z0z1): 1, Forest.of(z0, z0): 1})


@given(forests(3), forests(3), forests(2))
def test_star2_associative(f, g, h):
    assert star2(star2(f, g), h) == star2(f, star2(g, h))


@given(forests(3), populated(4))
def test_star2_grading_and_population(f, alpha):
    for mu in star2(f, alpha):
        assert mu.length == f.length + alpha.length and is_populated(mu)


@given(forests(3), populated(3), st.sampled_from([Poly.of(1, 0, 2, 0, 0, -1, 3), generic_poly()]))
def test_star2_matches_elementary_differentials(f, alpha, poly):
    lhs = linear_differential(star2(f, alpha), poly)
    rhs = elementary_differential(alpha, poly).derivative(f.count)
    for comp in f.elements():
        rhs = rhs * elementary_differential(comp, poly)
    assert lhs == rhs


def test_forest_product_and_derive_forest():
    assert forest_product(LinComb.of(z0), LinComb.of(z0z1)) == LinComb.of(Forest.of(z0, z0z1))
    assert derive_forest(Forest.of(z0, z0)) == LinComb.of(Forest.of(z0, z1), 2)


# ---------------------------------------------------------------------------
# insertion


def insertion_by_definition(forest: Forest, alpha: MultiIndex) -> LinComb:
    """Sum over ordered arity choices ``k_j`` of ``prod_j D^{k_j} beta_j * (prod_j d/dz_{k_j}) z^alpha``."""
    parts = forest.elements()
    out = LinComb()
    arities = sorted(alpha.as_dict())
    for ks in itertools.product(arities, repeat=len(parts)):
        coeff, rest = 1, alpha.as_dict()
        for k in ks:
            coeff *= rest.get(k, 0)
            rest[k] = rest.get(k, 0) - 1
        if coeff == 0:
            continue
        term = LinComb.of(MultiIndex.of({k: m for k, m in rest.items() if m}), coeff)
        for beta, k in zip(parts, ks):
            term = mono_product(term, derive(beta, k))
        out = out + term
    return out


def insertion_by_differentials(forest: Forest, alpha: MultiIndex, f: Poly) -> Poly:
    """Mixed directional derivative of ``F_f[alpha]`` along ``F_f[beta_j]``: each letter takes at most one."""
    letters = [k for k, m in alpha.entries for _ in range(m)]
    parts = forest.elements()
    total = Poly()
    for slots in itertools.permutations(range(len(letters)), len(parts)):
        chosen = dict(zip(slots, parts))
        term = Poly.const(1)
        for pos, k in enumerate(letters):
            source = elementary_differential(chosen[pos], f) if pos in chosen else f
            term = term * source.derivative(k)
        total = total + term
    return total


def test_insert_examples():
    assert insert(z0, z0) == LinComb.of(z0)
    assert insert(z0, z0z1) == LinComb.of(z0z1, 2)
    assert star1(Forest.of(z0z1), z0) == LinComb.of(z0z1)
    assert star1(Forest.of(z0, z0), z0z1) == LinComb.of(z0z1, 2)
    assert star1(Forest.of(z0, z0, z0), z0z1) == LinComb()
    assert star1(EMPTY_FOREST, z0z1) == LinComb.of(z0z1)


def test_insert_worked_example_true_coefficients():
    got = insert(z0z1, M({0: 2, 1: 1, 2: 1}))
    assert got == lc({"z0^2 z1^2 z2": 6, "z0^3 z2^2": 1, "z0^3 z1 z3": 1})
    f = generic_poly(9)
    assert linear_differential(got, f) == insertion_by_differentials(Forest.of(z0z1), M({0: 2, 1: 1, 2: 1}), f)


@given(forests(3, include_empty=False), populated(4))
def test_star1_matches_definition(f, alpha):
    assert star1(f, alpha) == insertion_by_definition(f, alpha)


@given(forests(3, include_empty=False), populated(3))
def test_star1_matches_directional_derivatives(f, alpha):
    poly = generic_poly(9)
    assert linear_differential(star1(f, alpha), poly) == insertion_by_differentials(f, alpha, poly)


@given(forests(3, include_empty=False), populated(4), st.integers(0, 3))
def test_star1_grading_and_d_commutation(f, alpha, m):
    for mu in star1(f, alpha):
        assert mu.length == f.length + alpha.length - f.count and is_populated(mu)
    assert star1(f, derive(alpha, m)) == derive(star1(f, alpha), m)


@given(forests(2, include_empty=False), forests(2, include_empty=False), forests(2, include_empty=False))
def test_star1_forest_target_is_leibniz(f, g, h):
    gh = g * h
    # distribute the components of f between the two factors in every way
    parts = f.elements()
    expected = LinComb()
    for mask in itertools.product((0, 1), repeat=len(parts)):
        left = Forest.from_iter(p for p, s in zip(parts, mask) if s == 0)
        right = Forest.from_iter(p for p, s in zip(parts, mask) if s == 1)
        expected = expected + forest_product(star1(left, g), star1(right, h))
    assert star1(f, gh) == expected


def test_lincomb_json_round_trip():
    comb = lc({"z0^2 z1 z2": Fraction(3, 4), "z0": -2})
    data = json.loads(json.dumps(lincomb_to_json(comb)))
    assert lincomb_from_json(data) == comb
    assert {"basis": {"0": 1}, "coeff": "-2"} in data
    forests_comb = LinComb({Forest.of(z0, z0z1): Fraction(1, 3)})
    assert lincomb_from_json(json.loads(json.dumps(lincomb_to_json(forests_comb)))) == forests_comb
