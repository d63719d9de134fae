"""Multi-indices, forests of multi-indices and their products.

A multi-index ``beta`` is the monomial ``z^beta = prod_k z_k^beta(k)``; it records
how many nodes of each arity a rooted tree has. It is *populated* when
``sum_k (1 - k) beta(k) == 1``, which is exactly when some rooted tree realises
it. Forests are commutative juxtapositions of populated multi-indices that are
never merged into one monomial.

Products implemented here:

* ``derive``   the derivation ``D = sum_k z_{k+1} d/dz_k``
* ``pre_lie``  ``beta |> beta' = z^beta D(z^beta')`` (free Novikov product)
* ``star2``    the Grossman-Larson type product dual to composition
* ``insert`` / ``star1``  (simultaneous) insertion, dual to substitution
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from mibs.lincomb import LinComb, lin_sum

__all__ = [
    "MultiIndex",
    "Forest",
    "EMPTY",
    "EMPTY_FOREST",
    "bracket",
    "is_populated",
    "symmetry_factor",
    "derive",
    "derive_forest",
    "pre_lie",
    "star2",
    "insert",
    "star1",
    "inner_product",
    "enumerate_populated",
    "enumerate_forests",
    "forest_product",
    "forests_up_to",
    "populated_up_to",
    "mono_product",
    "pre_lie_lin",
]


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Sparse ``(arity, multiplicity)`` pairs, sorted by arity, no zero entries."""

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[int, int] = {}
        for k, m in self.entries:
            if k < 0 or m < 0:
                raise ValueError(f"negative arity or multiplicity in {self.entries!r}")
            merged[k] = merged.get(k, 0) + m
        canon = tuple(sorted((k, m) for k, m in merged.items() if m))
        object.__setattr__(self, "entries", canon)

    @classmethod
    def of(cls, mapping: Mapping[int, int] | None = None) -> MultiIndex:
        return cls(tuple((mapping or {}).items()))

    @classmethod
    def letter(cls, k: int) -> MultiIndex:
        return cls(((k, 1),))

    def __getitem__(self, k: int) -> int:
        for arity, mult in self.entries:
            if arity == k:
                return mult
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def letters(self) -> Iterator[int]:
        """Arities with repetition, e.g. ``z0^2 z2 -> 0, 0, 2``."""
        for k, m in self.entries:
            yield from itertools.repeat(k, m)

    @property
    def length(self) -> int:
        return sum(m for _, m in self.entries)

    def __len__(self) -> int:
        return self.length

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __mul__(self, other: MultiIndex) -> MultiIndex:
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return MultiIndex(self.entries + other.entries)

    def remove(self, k: int, count: int = 1) -> MultiIndex:
        """Divide by ``z_k^count``; the caller guarantees divisibility."""
        if self[k] < count:
            raise ValueError(f"z{k}^{count} does not divide {self}")
        return MultiIndex(tuple((a, m - count if a == k else m) for a, m in self.entries))

    def text(self) -> str:
        if not self.entries:
            return "1"
        return " ".join(f"z{k}" if m == 1 else f"z{k}^{m}" for k, m in self.entries)

    __str__ = text

    def __repr__(self) -> str:
        return f"MultiIndex({self.text()})"

    def to_json(self) -> dict[str, int]:
        return {str(k): m for k, m in self.entries}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> MultiIndex:
        entries = []
        for key, mult in data.items():
            if not isinstance(mult, int) or isinstance(mult, bool):
                raise ValueError(f"multiplicity for arity {key} must be an integer")
            entries.append((int(key), mult))
        return cls(tuple(entries))

    @classmethod
    def parse(cls, text: str) -> MultiIndex:
        """Parse ``"z0^2 z1 z2"``; ``"1"`` or ``""`` gives the empty multi-index."""
        text = text.strip()
        if text in ("", "1"):
            return cls()
        entries = []
        for token in text.split():
            match = re.fullmatch(r"z(\d+)(?:\^(\d+))?", token)
            if not match:
                raise ValueError(f"bad multi-index factor {token!r}")
            entries.append((int(match.group(1)), int(match.group(2) or 1)))
        return cls(tuple(entries))


EMPTY = MultiIndex()


@dataclass(frozen=True, order=True)
class Forest:
    """A multiset of non-empty multi-indices stored as sorted ``(component, repetition)``."""

    components: tuple[tuple[MultiIndex, int], ...] = ()

    def __post_init__(self) -> None:
        merged: Counter[MultiIndex] = Counter()
        for comp, rep in self.components:
            if not comp:
                raise ValueError("forest components must be non-empty multi-indices")
            if rep < 0:
                raise ValueError("negative repetition count")
            merged[comp] += rep
        object.__setattr__(self, "components", tuple(sorted((c, r) for c, r in merged.items() if r)))

    @classmethod
    def of(cls, *parts: MultiIndex) -> Forest:
        return cls(tuple((p, 1) for p in parts))

    @classmethod
    def from_iter(cls, parts: Iterable[MultiIndex]) -> Forest:
        return cls(tuple((p, 1) for p in parts))

    def elements(self) -> list[MultiIndex]:
        """Components with repetition, in canonical order."""
        return [c for c, r in self.components for _ in range(r)]

    @property
    def count(self) -> int:
        return sum(r for _, r in self.components)

    @property
    def length(self) -> int:
        return sum(r * c.length for c, r in self.components)

    def __bool__(self) -> bool:
        return bool(self.components)

    def monomial(self) -> MultiIndex:
        """The merged ordinary product ``prod_j z^beta_j``."""
        return MultiIndex(tuple((k, m * r) for c, r in self.components for k, m in c.entries))

    def __mul__(self, other: Forest) -> Forest:
        if not isinstance(other, Forest):
            return NotImplemented
        return Forest(self.components + other.components)

    def is_populated(self) -> bool:
        return all(is_populated(c) for c, _ in self.components)

    def text(self) -> str:
        return "{" + ", ".join(c.text() for c in self.elements()) + "}"

    __str__ = text

    def __repr__(self) -> str:
        return f"Forest({self.text()})"

    def to_json(self) -> list[dict]:
        return [{"index": c.to_json(), "rep": r} for c, r in self.components]

    @classmethod
    def from_json(cls, data: Iterable[Mapping]) -> Forest:
        return cls(tuple((MultiIndex.from_json(item["index"]), int(item["rep"])) for item in data))


EMPTY_FOREST = Forest()

Basis = Union[MultiIndex, Forest]


def bracket(beta: MultiIndex) -> int:
    """The population functional ``sum_k (1 - k) beta(k)``."""
    return sum((1 - k) * m for k, m in beta.entries)


def is_populated(beta: MultiIndex) -> bool:
    return bool(beta) and bracket(beta) == 1


def symmetry_factor(x: Basis) -> int:
    """``prod_k (k!)^beta(k)``, extended to forests with ``r_j!`` per repeated component."""
    if isinstance(x, Forest):
        out = 1
        for comp, rep in x.components:
            out *= math.factorial(rep) * symmetry_factor(comp) ** rep
        return out
    out = 1
    for k, m in x.entries:
        out *= math.factorial(k) ** m
    return out


def inner_product(x: Basis, y: Basis) -> int:
    """Diagonal pairing ``<x, y> = delta_{x,y} S(x)``.

    Mixed arguments (one forest, one multi-index) pair to zero.
    """
    if type(x) is not type(y) or x != y:
        return 0
    return symmetry_factor(x)


# ---------------------------------------------------------------------------
# derivation


@lru_cache(maxsize=None)
def _derive_monomial(beta: MultiIndex, n: int) -> LinComb[MultiIndex]:
    if n == 0:
        return LinComb.of(beta)
    prev = _derive_monomial(beta, n - 1)
    terms: list[tuple[MultiIndex, int]] = []
    for mono, c in prev.items():
        for k, m in mono.entries:
            raised = MultiIndex(tuple((a, mm - 1 if a == k else mm) for a, mm in mono.entries) + ((k + 1, 1),))
            terms.append((raised, c * m))
    return LinComb(terms)


def derive(x: MultiIndex | LinComb[MultiIndex], n: int = 1) -> LinComb[MultiIndex]:
    """Apply ``D`` ``n`` times; linear in ``x``."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    if isinstance(x, MultiIndex):
        return _derive_monomial(x, n)
    return x.flat_map(lambda b: _derive_monomial(b, n))


def mono_product(*combs: LinComb[MultiIndex]) -> LinComb[MultiIndex]:
    """Ordinary (merging) monomial product of linear combinations."""
    acc: LinComb[MultiIndex] = LinComb.of(EMPTY)
    for comb in combs:
        acc = LinComb((a * b, ca * cb) for a, ca in acc.items() for b, cb in comb.items())
    return acc


def forest_product(*combs: LinComb[MultiIndex] | LinComb[Forest]) -> LinComb[Forest]:
    """Forest (non-merging) product; multi-index basis elements become one-component forests."""
    acc: LinComb[Forest] = LinComb.of(EMPTY_FOREST)
    for comb in combs:
        lifted = comb.map_basis(_as_forest)
        acc = LinComb((a * b, ca * cb) for a, ca in acc.items() for b, cb in lifted.items())
    return acc


def _as_forest(x: Basis) -> Forest:
    if isinstance(x, Forest):
        return x
    return Forest.of(x) if x else EMPTY_FOREST


def derive_forest(forest: Forest, n: int = 1) -> LinComb[Forest]:
    """``D^n`` on a forest by the Leibniz rule over its components."""
    out: LinComb[Forest] = LinComb.of(forest)
    for _ in range(n):
        out = out.flat_map(_derive_forest_once)
    return out


def _derive_forest_once(forest: Forest) -> LinComb[Forest]:
    parts = forest.elements()
    terms = []
    for i, comp in enumerate(parts):
        rest = parts[:i] + parts[i + 1 :]
        for d, c in derive(comp).items():
            terms.append((Forest.from_iter(rest + [d]), c))
    return LinComb(terms)


# ---------------------------------------------------------------------------
# products


def pre_lie(beta: MultiIndex, beta2: MultiIndex) -> LinComb[MultiIndex]:
    """``z^beta |> z^beta2 = z^beta D(z^beta2)``."""
    return LinComb((beta * m, c) for m, c in derive(beta2).items())


def pre_lie_lin(x: LinComb[MultiIndex], y: LinComb[MultiIndex]) -> LinComb[MultiIndex]:
    return lin_sum(pre_lie(a, b) * (ca * cb) for a, ca in x.items() for b, cb in y.items())


def star2(left: Forest | LinComb[Forest], right: Basis | LinComb) -> LinComb:
    """Grossman-Larson type product of a forest with a multi-index or a forest.

    For a single multi-index ``alpha`` this is ``(prod_j z^beta_j) D^n z^alpha``
    with ``n`` the number of components of ``left``; ``z^0`` on the right returns
    ``left`` itself. For a forest on the right every component of ``left`` is
    either grafted onto one right component or kept as a separate component,
    which makes the product associative on forests.
    """
    if isinstance(left, LinComb):
        return left.flat_map(lambda f: star2(f, right))
    if isinstance(right, LinComb):
        return right.flat_map(lambda b: star2(left, b))
    if isinstance(right, MultiIndex):
        if not right:
            return LinComb.of(left)
        if not left:
            return LinComb.of(right)
        return _star2_single(left, right)
    return _star2_forest(left, right)


@lru_cache(maxsize=None)
def _star2_single(left: Forest, right: MultiIndex) -> LinComb[MultiIndex]:
    prefix = left.monomial()
    return LinComb((prefix * m, c) for m, c in derive(right, left.count).items())


@lru_cache(maxsize=None)
def _star2_forest(left: Forest, right: Forest) -> LinComb[Forest]:
    lefts = left.elements()
    rights = right.elements()
    total: LinComb[Forest] = LinComb()
    # slot len(rights) means "stays a separate component"
    for assignment in itertools.product(range(len(rights) + 1), repeat=len(lefts)):
        groups: list[list[MultiIndex]] = [[] for _ in range(len(rights) + 1)]
        for comp, slot in zip(lefts, assignment):
            groups[slot].append(comp)
        factors = [
            _star2_single(Forest.from_iter(g), r) if g else LinComb.of(r) for g, r in zip(groups, rights)
        ]
        factors.extend(LinComb.of(comp) for comp in groups[-1])
        total = total + forest_product(*factors)
    return total


def star1(left: Forest | LinComb[Forest], right: Basis | LinComb) -> LinComb:
    """Simultaneous insertion of the components of ``left`` into ``right``.

    Each component ``beta_j`` replaces one letter ``z_{k_j}`` of the target and
    is raised to ``D^{k_j} z^{beta_j}``; all components must be placed, so the
    result vanishes when the target has fewer letters than ``left`` has
    components. Forest targets are handled by the Leibniz rule.
    """
    if isinstance(left, LinComb):
        return left.flat_map(lambda f: star1(f, right))
    if isinstance(right, LinComb):
        return right.flat_map(lambda b: star1(left, b))
    if not left:
        return LinComb.of(right)
    if isinstance(right, MultiIndex):
        return _star1_single(left, right)
    return _star1_forest(left, right)


def insert(beta: MultiIndex, alpha: Basis | LinComb) -> LinComb:
    """Insertion ``z^beta |>> z^alpha = sum_k (D^k z^beta)(d/dz_k z^alpha)``."""
    return star1(Forest.of(beta), alpha)


@lru_cache(maxsize=None)
def _star1_single(left: Forest, right: MultiIndex) -> LinComb[MultiIndex]:
    lefts = left.elements()
    if len(lefts) > right.length:
        return LinComb()
    arities = [k for k, _ in right.entries]
    total: LinComb[MultiIndex] = LinComb()
    for choice in itertools.product(arities, repeat=len(lefts)):
        used = Counter(choice)
        weight = 1
        for k, c in used.items():
            avail = right[k]
            if c > avail:
                weight = 0
                break
            weight *= math.perm(avail, c)
        if not weight:
            continue
        rest = MultiIndex(tuple((k, m - used.get(k, 0)) for k, m in right.entries))
        raised = mono_product(*(derive(b, k) for b, k in zip(lefts, choice)))
        total = total + LinComb((rest * m, c * weight) for m, c in raised.items())
    return total


@lru_cache(maxsize=None)
def _star1_forest(left: Forest, right: Forest) -> LinComb[Forest]:
    lefts = left.elements()
    rights = right.elements()
    total: LinComb[Forest] = LinComb()
    for assignment in itertools.product(range(len(rights)), repeat=len(lefts)):
        groups: list[list[MultiIndex]] = [[] for _ in rights]
        for comp, slot in zip(lefts, assignment):
            groups[slot].append(comp)
        factors = [
            _star1_single(Forest.from_iter(g), r) if g else LinComb.of(r) for g, r in zip(groups, rights)
        ]
        total = total + forest_product(*factors)
    return total


# ---------------------------------------------------------------------------
# graded enumeration


def _integer_partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    largest = n if largest is None else largest
    for part in range(min(n, largest), 0, -1):
        for rest in _integer_partitions(n - part, part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _populated_of_order(order: int) -> tuple[MultiIndex, ...]:
    # the non-leaf arities form a partition of order - 1 (the edge count);
    # list them by that partition, parts descending, in lex order
    out = []
    for parts in sorted(_integer_partitions(order - 1)):
        counts = Counter(parts)
        counts[0] = order - len(parts)
        out.append(MultiIndex(tuple(counts.items())))
    return tuple(out)


def enumerate_populated(order: int) -> list[MultiIndex]:
    """All populated multi-indices of the given length, in canonical order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return list(_populated_of_order(order))


@lru_cache(maxsize=None)
def _forests_of_order(order: int) -> tuple[Forest, ...]:
    pool = [beta for n in range(1, order + 1) for beta in _populated_of_order(n)]
    pool.sort(key=lambda b: (b.length, b))
    found: list[Forest] = []

    def build(remaining: int, start: int, acc: list[MultiIndex]) -> None:
        if remaining == 0:
            found.append(Forest.from_iter(acc))
            return
        for i in range(start, len(pool)):
            if pool[i].length <= remaining:
                acc.append(pool[i])
                build(remaining - pool[i].length, i, acc)
                acc.pop()

    build(order, 0, [])
    found.sort(key=lambda f: (f.count, f))
    return tuple(found)


def enumerate_forests(order: int) -> list[Forest]:
    """All forests of populated multi-indices with total length ``order``.

    Ordered by component count, then canonically.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    return list(_forests_of_order(order))


def forests_up_to(order: int, include_empty: bool = True) -> list[Forest]:
    out = [EMPTY_FOREST] if include_empty else []
    for n in range(1, order + 1):
        out.extend(_forests_of_order(n))
    return out


def populated_up_to(order: int) -> list[MultiIndex]:
    return [b for n in range(1, order + 1) for b in _populated_of_order(n)]


# ---------------------------------------------------------------------------
# LinComb serialisation


def lincomb_to_json(comb: LinComb[Basis]) -> list[dict]:
    return [{"basis": b.to_json(), "coeff": str(c)} for b, c in comb.sorted_items()]


def lincomb_from_json(data: Iterable[Mapping]) -> LinComb[Basis]:
    terms = []
    for item in data:
        raw = item["basis"]
        basis = Forest.from_json(raw) if isinstance(raw, list) else MultiIndex.from_json(raw)
        terms.append((basis, Fraction(item["coeff"])))
    return LinComb(terms)
