"""Characters (coefficient tables) of multi-index B-series and their two convolution laws.

A character assigns a rational number to the empty multi-index and to every
populated multi-index up to a truncation order, and extends multiplicatively
to forests (the empty forest always has value 1, whatever ``a(z^0)`` is).

``compose_characters(b, a)`` gives the coefficients of ``B(a) o B(b)`` (run the
method ``b`` then ``a``); ``substitute_characters(b, a)`` gives the coefficients
of ``B(a)`` with its vector field replaced by ``h^-1 B(b, g)``.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

from mibs.core import (
    EMPTY_FOREST,
    Forest,
    MultiIndex,
    enumerate_populated,
    forests_up_to,
    is_populated,
    populated_up_to,
    star1,
    star2,
    symmetry_factor,
)
from mibs.lincomb import LinComb

__all__ = [
    "Character",
    "TruncationError",
    "exact_solution_character",
    "compose_characters",
    "substitute_characters",
    "m_b",
    "random_character",
]


class TruncationError(ValueError):
    """A character was queried above the order it was truncated at."""


@dataclass(frozen=True)
class Character:
    order: int
    empty: Fraction
    values: Mapping[MultiIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("truncation order must be non-negative")
        clean: dict[MultiIndex, Fraction] = {}
        for beta, v in self.values.items():
            if not is_populated(beta):
                raise ValueError(f"character values are only defined on populated indices, got {beta}")
            if beta.length > self.order:
                raise TruncationError(f"{beta} exceeds truncation order {self.order}")
            if v:
                clean[beta] = Fraction(v)
        object.__setattr__(self, "empty", Fraction(self.empty))
        object.__setattr__(self, "values", MappingProxyType(clean))

    def __call__(self, x: MultiIndex | Forest) -> Fraction:
        if isinstance(x, Forest):
            return self.forest_value(x)
        if not x:
            return self.empty
        if x.length > self.order:
            raise TruncationError(f"{x} has length {x.length} > truncation order {self.order}")
        if not is_populated(x):
            raise ValueError(f"{x} is not populated")
        return self.values.get(x, Fraction(0))

    def forest_value(self, forest: Forest) -> Fraction:
        out = Fraction(1)
        for comp, rep in forest.components:
            out *= self(comp) ** rep
        return out

    def require(self, order: int) -> None:
        if order > self.order:
            raise TruncationError(f"character truncated at {self.order}, need {order}")

    def truncate(self, order: int) -> Character:
        self.require(order)
        return Character(order, self.empty, {b: v for b, v in self.values.items() if b.length <= order})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        return self.order == other.order and self.empty == other.empty and dict(self.values) == dict(other.values)

    def __hash__(self) -> int:
        return hash((self.order, self.empty, frozenset(self.values.items())))

    def agrees_through(self, other: Character) -> int:
        """Largest ``p`` such that both characters agree on every populated index of length <= p."""
        top = min(self.order, other.order)
        for n in range(1, top + 1):
            if any(self(b) != other(b) for b in enumerate_populated(n)):
                return n - 1
        return top

    # constructors

    @classmethod
    def identity(cls, order: int) -> Character:
        """Unit of composition: ``B = y``."""
        return cls(order, Fraction(1))

    @classmethod
    def euler(cls, order: int) -> Character:
        return cls(order, Fraction(1), {MultiIndex.letter(0): Fraction(1)})

    @classmethod
    def delta_z0(cls, order: int) -> Character:
        """Unit of substitution: ``B(b, h, g) = h g``."""
        return cls(order, Fraction(0), {MultiIndex.letter(0): Fraction(1)})

    # serialisation

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "empty": str(self.empty),
            "values": [
                {"index": beta.to_json(), "coeff": str(v)}
                for beta, v in sorted(self.values.items(), key=lambda bv: (bv[0].length, bv[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Character:
        try:
            order = int(data["order"])
            empty = Fraction(str(data["empty"]))
            values = {}
            for item in data.get("values", []):
                beta = MultiIndex.from_json(item["index"])
                if beta in values:
                    raise ValueError(f"duplicate entry for {beta}")
                values[beta] = Fraction(str(item["coeff"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed character JSON: {exc}") from exc
        return cls(order, empty, values)


def random_character(
    order: int,
    rng: random.Random,
    empty: Fraction | int = 1,
    support: Iterable[MultiIndex] | None = None,
    span: int = 5,
) -> Character:
    """Random small rationals on every populated index up to ``order`` (or on ``support``)."""
    indices = list(support) if support is not None else populated_up_to(order)
    values = {b: Fraction(rng.randint(-span, span), rng.randint(1, span)) for b in indices}
    return Character(order, Fraction(empty), values)


# ---------------------------------------------------------------------------
# exact solution


def exact_solution_character(order: int) -> Character:
    """Coefficients of the exact flow of ``y' = f(y)``.

    ``a(z^beta) = 1/|beta| * sum a(beta_1)...a(beta_k)`` over *ordered* tuples of
    populated indices with ``z^beta = z_k z^beta_1 ... z^beta_k``.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    return Character(order, Fraction(1), {b: _exact_value(b) for b in populated_up_to(order)})


@lru_cache(maxsize=None)
def _exact_value(beta: MultiIndex) -> Fraction:
    total = Fraction(0)
    for k, _ in beta.entries:
        total += _ordered_products(beta.remove(k), k)
    return total / beta.length


@lru_cache(maxsize=None)
def _ordered_products(rest: MultiIndex, k: int) -> Fraction:
    """Sum of ``prod a(beta_i)`` over ordered k-tuples of populated indices multiplying to ``rest``."""
    if k == 0:
        return Fraction(1) if not rest else Fraction(0)
    if rest.length < k:
        return Fraction(0)
    total = Fraction(0)
    keys = [a for a, _ in rest.entries]
    for mults in itertools.product(*(range(m + 1) for _, m in rest.entries)):
        first = MultiIndex(tuple(zip(keys, mults)))
        if not is_populated(first):
            continue
        remaining = MultiIndex(tuple((a, m - c) for (a, m), c in zip(rest.entries, mults)))
        total += _exact_value(first) * _ordered_products(remaining, k - 1)
    return total


# ---------------------------------------------------------------------------
# composition


@lru_cache(maxsize=None)
def _composition_table(order: int) -> tuple[tuple[Forest, MultiIndex, MultiIndex, Fraction], ...]:
    """``(F, alpha, mu, coeff(mu in F *2 alpha) S(mu) / (S(F) S(alpha)))`` for |mu| == order."""
    rows = []
    for n_alpha in range(1, order + 1):
        forests = [EMPTY_FOREST] if n_alpha == order else [
            f for f in forests_up_to(order - n_alpha, include_empty=False) if f.length == order - n_alpha
        ]
        for alpha in enumerate_populated(n_alpha):
            for forest in forests:
                prod = star2(forest, alpha)
                for mu, c in prod.items():
                    w = c * symmetry_factor(mu) / (symmetry_factor(forest) * symmetry_factor(alpha))
                    rows.append((forest, alpha, mu, w))
    return tuple(rows)


def compose_characters(b: Character, a: Character) -> Character:
    """Character of ``B(a, h, f, .) o B(b, h, f, y)``; requires ``b(z^0) == 1``."""
    if b.empty != 1:
        raise ValueError(f"composition needs b(z^0) = 1, got {b.empty}")
    order = min(a.order, b.order)
    values: dict[MultiIndex, Fraction] = {}
    for beta in populated_up_to(order):
        values[beta] = a.empty * b(beta)
    for n in range(1, order + 1):
        for forest, alpha, mu, w in _composition_table(n):
            values[mu] += b.forest_value(forest) * a(alpha) * w
    return Character(order, a.empty * b.empty, values)


# ---------------------------------------------------------------------------
# substitution


@lru_cache(maxsize=None)
def _substitution_table(order: int) -> tuple[tuple[Forest, MultiIndex, MultiIndex, Fraction], ...]:
    """Rows ``(F, beta, gamma, weight)`` with ``|F| == order`` and ``F`` having ``|beta|`` components."""
    rows = []
    forests = [f for f in forests_up_to(order, include_empty=False) if f.length == order]
    for forest in forests:
        for beta in enumerate_populated(forest.count):
            for gamma, c in star1(forest, beta).items():
                w = c * symmetry_factor(gamma) / (symmetry_factor(forest) * symmetry_factor(beta))
                rows.append((forest, beta, gamma, w))
    return tuple(rows)


def substitute_characters(b: Character, a: Character) -> Character:
    """Character of ``B(a)`` with vector field ``h^-1 B(b, h, g, .)``; requires ``b(z^0) == 0``.

    Every letter of ``beta`` is replaced, so only forests with exactly ``|beta|``
    components contribute and the result is homogeneous in ``h``.
    """
    if b.empty != 0:
        raise ValueError(f"substitution needs b(z^0) = 0, got {b.empty}")
    order = min(a.order, b.order)
    values: dict[MultiIndex, Fraction] = {beta: Fraction(0) for beta in populated_up_to(order)}
    for n in range(1, order + 1):
        for forest, beta, gamma, w in _substitution_table(n):
            values[gamma] += b.forest_value(forest) * a(beta) * w
    return Character(order, a.empty, values)


# ---------------------------------------------------------------------------
# the M_b operator


def m_b(b: Character, x: MultiIndex | Forest, identity_weight: Fraction | int = 1) -> dict[int, LinComb]:
    """``identity_weight * x + sum_F b(F)/S(F) h^|F| (F *1 x)`` over non-empty forests ``|F| <= b.order``.

    Returned as ``{h power: combination}`` with zero grades dropped.
    """
    graded: dict[int, LinComb] = {}
    if identity_weight:
        graded[0] = LinComb.of(x, identity_weight)
    for forest in forests_up_to(b.order, include_empty=False):
        weight = b.forest_value(forest)
        if not weight:
            continue
        term = star1(forest, x) * (weight / symmetry_factor(forest))
        if term:
            graded[forest.length] = graded.get(forest.length, LinComb()) + term
    return {g: c for g, c in sorted(graded.items()) if c}


def graded_star2(left: Mapping[int, LinComb], right: Mapping[int, LinComb], max_grade: int) -> dict[int, LinComb]:
    out: dict[int, LinComb] = {}
    for (i, x), (j, y) in itertools.product(left.items(), right.items()):
        if i + j <= max_grade:
            out[i + j] = out.get(i + j, LinComb()) + star2(x, y)
    return {g: c for g, c in sorted(out.items()) if c}
