"""Runge-Kutta tableaux expressed as multi-index characters."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mibs.characters import Character, exact_solution_character
from mibs.trees import RootedTree, pushforward_character, tree_factorial

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ButcherTableau:
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    name: str = ""

    def __post_init__(self) -> None:
        s = len(self.b)
        if len(self.A) != s or any(len(row) != s for row in self.A) or len(self.c) != s:
            raise ValueError(f"tableau shapes do not match {s} stages")
        for i, row in enumerate(self.A):
            if sum(row) != self.c[i]:
                log.warning("row %d: c_i = %s but sum_j a_ij = %s", i, self.c[i], sum(row))

    @property
    def stages(self) -> int:
        return len(self.b)

    @classmethod
    def build(cls, A: Sequence[Sequence], b: Sequence, c: Sequence | None = None, name: str = "") -> ButcherTableau:
        A_ = tuple(tuple(Fraction(str(x)) for x in row) for row in A)
        c_ = tuple(Fraction(str(x)) for x in c) if c is not None else tuple(sum(row, Fraction(0)) for row in A_)
        return cls(A_, tuple(Fraction(str(x)) for x in b), c_, name)

    @classmethod
    def from_json(cls, data: Mapping) -> ButcherTableau:
        try:
            return cls.build(data["A"], data["b"], data.get("c"), data.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tableau: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "A": [[str(x) for x in row] for row in self.A],
            "b": [str(x) for x in self.b],
            "c": [str(x) for x in self.c],
        }

    def stage_weights(self, t: RootedTree) -> tuple[Fraction, ...]:
        return _stage_weights(self, t)

    def elementary_weight(self, t: RootedTree) -> Fraction:
        """``Phi(t) = sum_i b_i Phi_i(t)``."""
        return sum((bi * w for bi, w in zip(self.b, self.stage_weights(t))), Fraction(0))

    def character(self, order: int) -> Character:
        """Multi-index character of one step; the tree weight is ``t! Phi(t)``."""
        return pushforward_character(lambda t: tree_factorial(t) * self.elementary_weight(t), order)

    def order_report(self, order: int) -> int:
        """Largest ``p <= order`` such that the method matches the exact flow through ``h^p``."""
        return self.character(order).agrees_through(exact_solution_character(order))


@lru_cache(maxsize=None)
def _stage_weights(tab: ButcherTableau, t: RootedTree) -> tuple[Fraction, ...]:
    out = [Fraction(1)] * tab.stages
    for child in t.children:
        inner = _stage_weights(tab, child)
        for i, row in enumerate(tab.A):
            out[i] *= sum((a * w for a, w in zip(row, inner)), Fraction(0))
    return tuple(out)


EXPLICIT_EULER = ButcherTableau.build([[0]], [1], name="explicit euler")
IMPLICIT_MIDPOINT = ButcherTableau.build([["1/2"]], [1], name="implicit midpoint")
RK4 = ButcherTableau.build(
    [[0, 0, 0, 0], ["1/2", 0, 0, 0], [0, "1/2", 0, 0], [0, 0, 1, 0]],
    ["1/6", "1/3", "1/3", "1/6"],
    name="classical rk4",
)

BUILTIN = {"euler": EXPLICIT_EULER, "midpoint": IMPLICIT_MIDPOINT, "rk4": RK4}
