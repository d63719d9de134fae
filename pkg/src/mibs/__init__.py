"""Exact multi-index B-series."""

from mibs.characters import (
    Character,
    TruncationError,
    compose_characters,
    exact_solution_character,
    substitute_characters,
)
from mibs.core import (
    EMPTY,
    EMPTY_FOREST,
    Forest,
    MultiIndex,
    derive,
    enumerate_forests,
    enumerate_populated,
    insert,
    is_populated,
    pre_lie,
    star1,
    star2,
    symmetry_factor,
)
from mibs.evaluation import Poly, TruncSeries, elementary_differential, eval_bseries
from mibs.lincomb import LinComb
from mibs.rk import ButcherTableau
from mibs.trees import AromaticTree, RootedTree, corolla_witness, enumerate_trees, psi

__version__ = "0.1.0"

__all__ = [
    "AromaticTree",
    "ButcherTableau",
    "Character",
    "EMPTY",
    "EMPTY_FOREST",
    "Forest",
    "LinComb",
    "MultiIndex",
    "Poly",
    "RootedTree",
    "TruncSeries",
    "TruncationError",
    "compose_characters",
    "corolla_witness",
    "derive",
    "elementary_differential",
    "enumerate_forests",
    "enumerate_populated",
    "enumerate_trees",
    "eval_bseries",
    "exact_solution_character",
    "insert",
    "is_populated",
    "pre_lie",
    "psi",
    "star1",
    "star2",
    "substitute_characters",
    "symmetry_factor",
]
