"""Finite formal linear combinations with exact rational coefficients."""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Generic, TypeVar, Union

B = TypeVar("B", bound=Hashable)
C = TypeVar("C", bound=Hashable)

Scalar = Union[int, Fraction]


class LinComb(Generic[B]):
    """An immutable finite sum ``sum c_b * b`` over hashable basis elements.

    Zero coefficients are never stored, so equality is plain dictionary
    equality and ``LinComb()`` is the zero vector.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[B, Scalar] | Iterable[tuple[B, Scalar]] = ()):
        acc: dict[B, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for basis, coeff in items:
            acc[basis] = acc.get(basis, Fraction(0)) + coeff
        self._terms = {b: Fraction(c) for b, c in acc.items() if c != 0}
        self._hash: int | None = None

    @classmethod
    def of(cls, basis: B, coeff: Scalar = 1) -> LinComb[B]:
        return cls({basis: coeff})

    @classmethod
    def _trusted(cls, terms: dict[B, Fraction]) -> LinComb[B]:
        out = cls.__new__(cls)
        out._terms = terms
        out._hash = None
        return out

    def __getitem__(self, basis: B) -> Fraction:
        return self._terms.get(basis, Fraction(0))

    def coeff(self, basis: B) -> Fraction:
        return self[basis]

    def __iter__(self) -> Iterator[B]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self):
        return self._terms.items()

    def basis(self) -> list[B]:
        return list(self._terms)

    def __add__(self, other: LinComb[B]) -> LinComb[B]:
        if not isinstance(other, LinComb):
            return NotImplemented
        out = dict(self._terms)
        for b, c in other._terms.items():
            v = out.get(b, 0) + c
            if v:
                out[b] = v
            else:
                out.pop(b, None)
        return LinComb._trusted(out)

    def __neg__(self) -> LinComb[B]:
        return LinComb._trusted({b: -c for b, c in self._terms.items()})

    def __sub__(self, other: LinComb[B]) -> LinComb[B]:
        if not isinstance(other, LinComb):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: Scalar) -> LinComb[B]:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar == 0:
            return LinComb()
        return LinComb._trusted({b: c * scalar for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def map_basis(self, fn: Callable[[B], C]) -> LinComb[C]:
        """Push the combination forward along a map of basis elements."""
        return LinComb((fn(b), c) for b, c in self._terms.items())

    def flat_map(self, fn: Callable[[B], LinComb[C]]) -> LinComb[C]:
        """Extend ``fn`` linearly from basis elements to the whole combination."""
        acc: dict[C, Fraction] = {}
        for b, c in self._terms.items():
            for b2, c2 in fn(b).items():
                acc[b2] = acc.get(b2, 0) + c * c2
        return LinComb._trusted({b: v for b, v in acc.items() if v})

    def sorted_items(self, key: Callable[[B], object] | None = None) -> list[tuple[B, Fraction]]:
        return sorted(self._terms.items(), key=(lambda bc: key(bc[0])) if key else (lambda bc: bc[0]))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for b, c in self.sorted_items():
            parts.append(f"{c}*{b}" if c != 1 else str(b))
        return " + ".join(parts)


def lin_sum(combs: Iterable[LinComb[B]]) -> LinComb[B]:
    acc: dict[B, Fraction] = {}
    for comb in combs:
        for b, c in comb.items():
            acc[b] = acc.get(b, 0) + c
    return LinComb._trusted({b: v for b, v in acc.items() if v})
