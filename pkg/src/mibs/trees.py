"""Rooted trees and the bridge from trees to populated multi-indices.

``psi`` sends a tree to its node-arity profile. It is surjective onto the
populated multi-indices but not injective, and it intertwines tree grafting
with the Novikov product and the tree Grossman-Larson product with ``star2``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from mibs.characters import Character
from mibs.core import Forest, MultiIndex, is_populated, populated_up_to, symmetry_factor
from mibs.evaluation import Poly
from mibs.lincomb import LinComb

__all__ = [
    "RootedTree",
    "LEAF",
    "AromaticTree",
    "enumerate_trees",
    "tree_factorial",
    "sigma",
    "graft",
    "gl_product",
    "psi",
    "psi_forest",
    "corolla_witness",
    "corolla_decomposition",
    "pushforward_character",
    "kappa_of",
    "tree_differential",
]


@dataclass(frozen=True)
class RootedTree:
    """Non-planar rooted tree as the canonically sorted tuple of its subtrees."""

    children: tuple[RootedTree, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(sorted(self.children, key=lambda t: t.key)))

    @classmethod
    def of(cls, *children: RootedTree) -> RootedTree:
        return cls(tuple(children))

    @cached_property
    def key(self) -> tuple:
        return (self.order, tuple(c.key for c in self.children))

    @cached_property
    def order(self) -> int:
        return 1 + sum(c.order for c in self.children)

    def __lt__(self, other: RootedTree) -> bool:
        return self.key < other.key

    def vertices(self) -> Iterator[tuple[int, ...]]:
        """Paths (child positions from the root) of every vertex, pre-order."""
        yield ()
        for i, child in enumerate(self.children):
            for path in child.vertices():
                yield (i,) + path

    def text(self) -> str:
        return "[" + "".join(c.text() for c in self.children) + "]"

    __str__ = text

    def __repr__(self) -> str:
        return f"RootedTree({self.text()})"

    @classmethod
    def parse(cls, text: str) -> RootedTree:
        """Inverse of :meth:`text`: ``[]`` is a leaf, ``[[][]]`` the cherry."""
        stack: list[list[RootedTree]] = []
        result: RootedTree | None = None
        for ch in text.strip():
            if ch == "[":
                if result is not None:
                    raise ValueError(f"trailing input in tree {text!r}")
                stack.append([])
            elif ch == "]":
                if not stack:
                    raise ValueError(f"unbalanced tree {text!r}")
                node = cls(tuple(stack.pop()))
                if stack:
                    stack[-1].append(node)
                else:
                    result = node
            elif not ch.isspace():
                raise ValueError(f"unexpected {ch!r} in tree {text!r}")
        if stack or result is None:
            raise ValueError(f"unbalanced tree {text!r}")
        return result


LEAF = RootedTree()

TreeForest = tuple  # sorted tuple of RootedTree


def tree_forest(trees: Iterable[RootedTree]) -> TreeForest:
    return tuple(sorted(trees, key=lambda t: t.key))


@lru_cache(maxsize=None)
def _trees_of_order(order: int) -> tuple[RootedTree, ...]:
    if order == 1:
        return (LEAF,)
    pool = [t for n in range(1, order) for t in _trees_of_order(n)]
    found: list[RootedTree] = []

    def build(remaining: int, start: int, acc: list[RootedTree]) -> None:
        if remaining == 0:
            found.append(RootedTree(tuple(acc)))
            return
        for i in range(start, len(pool)):
            if pool[i].order <= remaining:
                acc.append(pool[i])
                build(remaining - pool[i].order, i, acc)
                acc.pop()

    build(order - 1, 0, [])
    return tuple(sorted(found))


def enumerate_trees(order: int) -> list[RootedTree]:
    """One canonical representative per isomorphism class of rooted trees of ``order`` vertices."""
    if order < 1:
        raise ValueError("order must be at least 1")
    return list(_trees_of_order(order))


def trees_up_to(order: int) -> list[RootedTree]:
    return [t for n in range(1, order + 1) for t in _trees_of_order(n)]


def tree_factorial(t: RootedTree) -> int:
    """``t! = |t| * prod t_i!``."""
    out = t.order
    for child in t.children:
        out *= tree_factorial(child)
    return out


def sigma(t: RootedTree) -> int:
    """Order of the automorphism group of ``t``."""
    out = 1
    for child, mult in Counter(t.children).items():
        out *= math.factorial(mult) * sigma(child) ** mult
    return out


def graft(t1: RootedTree, t2: RootedTree) -> LinComb[RootedTree]:
    """Sum over the vertices ``v`` of ``t2`` of ``t1`` grafted onto ``v`` by a new edge."""
    terms = [(RootedTree(t2.children + (t1,)), 1)]
    for i, child in enumerate(t2.children):
        rest = t2.children[:i] + t2.children[i + 1 :]
        for grafted, c in graft(t1, child).items():
            terms.append((RootedTree(rest + (grafted,)), c))
    return LinComb(terms)


def _attach(t: RootedTree, placement: Mapping[tuple[int, ...], list[RootedTree]], path=()) -> RootedTree:
    kids = [_attach(c, placement, path + (i,)) for i, c in enumerate(t.children)]
    kids.extend(placement.get(path, ()))
    return RootedTree(tuple(kids))


def gl_product(left: Iterable[RootedTree], right: Iterable[RootedTree]) -> LinComb[TreeForest]:
    """Grossman-Larson product of two tree forests.

    Each tree of ``left`` is either grafted onto a vertex of some tree of
    ``right`` or kept as a separate tree; all such choices are summed.
    """
    lefts = list(left)
    rights = list(right)
    slots = [(j, path) for j, t in enumerate(rights) for path in t.vertices()]
    terms: list[tuple[TreeForest, int]] = []
    for choice in itertools.product(range(len(slots) + 1), repeat=len(lefts)):
        placements: list[dict[tuple[int, ...], list[RootedTree]]] = [{} for _ in rights]
        loose = []
        for tree, s in zip(lefts, choice):
            if s == len(slots):
                loose.append(tree)
            else:
                j, path = slots[s]
                placements[j].setdefault(path, []).append(tree)
        out = [_attach(t, p) for t, p in zip(rights, placements)]
        terms.append((tree_forest(out + loose), 1))
    return LinComb(terms)


def psi(t: RootedTree) -> MultiIndex:
    """Node-arity profile: ``beta(k)`` is the number of vertices with ``k`` children."""
    counts: Counter[int] = Counter()
    stack = [t]
    while stack:
        node = stack.pop()
        counts[len(node.children)] += 1
        stack.extend(node.children)
    return MultiIndex(tuple(counts.items()))


def psi_forest(forest: Iterable[RootedTree]) -> Forest:
    return Forest.from_iter(psi(t) for t in forest)


# ---------------------------------------------------------------------------
# corolla decomposition


def corolla_witness(beta: MultiIndex) -> RootedTree:
    """Build a tree with node-arity profile ``beta``.

    The root takes the largest arity present. Open slots are filled in
    breadth-first order, always with the smallest remaining non-zero arity,
    and only once those are exhausted with the leaves ``z0``.
    """
    if not is_populated(beta):
        raise ValueError(f"{beta} is not populated")
    pool = Counter(dict(beta.entries))
    root_arity = max(pool)
    pool[root_arity] -= 1
    arity = [root_arity]
    kids: list[list[int]] = [[]]
    open_slots: deque[int] = deque([0] * root_arity)
    while open_slots:
        parent = open_slots.popleft()
        nonzero = sorted(k for k, m in pool.items() if k and m)
        k = nonzero[0] if nonzero else 0
        if pool[k] <= 0:
            raise AssertionError("ran out of letters while slots remain")
        pool[k] -= 1
        node = len(arity)
        arity.append(k)
        kids.append([])
        kids[parent].append(node)
        open_slots.extend([node] * k)
    if +pool:
        raise AssertionError(f"letters left over: {dict(+pool)}")

    def build(node: int) -> RootedTree:
        return RootedTree(tuple(build(c) for c in kids[node]))

    return build(0)


def corolla_decomposition(beta: MultiIndex) -> tuple[int, list[MultiIndex]]:
    """``z^beta = z_n prod_j z^beta_j`` with every ``beta_j`` populated."""
    tree = corolla_witness(beta)
    return len(tree.children), [psi(c) for c in tree.children]


# ---------------------------------------------------------------------------
# characters


def pushforward_character(
    alpha: Mapping[RootedTree, Fraction] | Callable[[RootedTree], Fraction],
    order: int,
    empty: Fraction | int = 1,
) -> Character:
    """Re-express a tree B-series ``sum h^|t| alpha(t)/(sigma(t) t!) F[t]`` in the multi-index basis.

    ``a(mu) = S(mu) * sum_{psi(t) = mu} alpha(t) / (sigma(t) t!)``.
    """
    lookup = alpha if callable(alpha) else (lambda t: alpha.get(t, Fraction(0)))
    values: dict[MultiIndex, Fraction] = {b: Fraction(0) for b in populated_up_to(order)}
    for t in trees_up_to(order):
        values[psi(t)] += Fraction(lookup(t)) / (sigma(t) * tree_factorial(t))
    return Character(order, Fraction(empty), {b: v * symmetry_factor(b) for b, v in values.items()})


def tree_differential(t: RootedTree, f: Poly) -> Poly:
    """Scalar elementary differential by the tree recursion ``F[t] = f^(n) prod F[t_i]``."""
    out = f.derivative(len(t.children))
    for child in t.children:
        out = out * tree_differential(child, f)
    return out


# ---------------------------------------------------------------------------
# aromatic trees


@dataclass(frozen=True)
class AromaticTree:
    """Directed graph on ``nodes`` vertices with ``nodes - 1`` arrows and out-degree at most one."""

    nodes: int
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        if self.nodes < 1:
            raise ValueError("an aromatic tree needs at least one node")
        if len(self.arrows) != self.nodes - 1:
            raise ValueError(f"{self.nodes} nodes need {self.nodes - 1} arrows, got {len(self.arrows)}")
        out_deg = Counter(s for s, _ in self.arrows)
        for s, t in self.arrows:
            if not (0 <= s < self.nodes and 0 <= t < self.nodes):
                raise ValueError(f"arrow {(s, t)} leaves the node range")
        if any(d > 1 for d in out_deg.values()):
            raise ValueError("a node has more than one outgoing arrow")

    def in_degrees(self) -> list[int]:
        deg = [0] * self.nodes
        for _, t in self.arrows:
            deg[t] += 1
        return deg

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "arrows": [list(a) for a in self.arrows]}

    @classmethod
    def from_json(cls, data: Mapping) -> AromaticTree:
        return cls(int(data["nodes"]), tuple(tuple(a) for a in data["arrows"]))


def kappa_of(g: AromaticTree) -> MultiIndex:
    """Composition map: ``kappa(j)`` counts the nodes with ``j`` incoming arrows."""
    return MultiIndex(tuple(Counter(g.in_degrees()).items()))


def enumerate_aromatic_trees(nodes: int) -> Iterator[AromaticTree]:
    """Every labelled aromatic tree on ``nodes`` vertices (loops and cycles allowed)."""
    for sink in range(nodes):
        sources = [v for v in range(nodes) if v != sink]
        for targets in itertools.product(range(nodes), repeat=len(sources)):
            yield AromaticTree(nodes, tuple(zip(sources, targets)))


def aromatic_differential(g: AromaticTree, f: Poly) -> Poly:
    """Scalar elementary differential: every node contributes ``f^(in-degree)``."""
    out = Poly.const(1)
    for d in g.in_degrees():
        out = out * f.derivative(d)
    return out
