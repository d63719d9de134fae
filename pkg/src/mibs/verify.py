"""Property suites that check every algebraic law exactly against brute force.

Each check returns a :class:`PropertyResult`; informational sections (the
substitution-convention discrepancy and the ``M_b`` weight explorer) are
reported alongside but never count as failures.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Iterator
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from mibs.characters import (
    Character,
    compose_characters,
    exact_solution_character,
    graded_star2,
    m_b,
    random_character,
    substitute_characters,
)
from mibs.core import (
    EMPTY_FOREST,
    Forest,
    MultiIndex,
    derive,
    derive_forest,
    enumerate_populated,
    forests_up_to,
    is_populated,
    mono_product,
    populated_up_to,
    pre_lie,
    pre_lie_lin,
    star1,
    star2,
)
from mibs.evaluation import Poly, TruncSeries, elementary_differential, eval_bseries, linear_differential, morphism_check
from mibs.lincomb import LinComb
from mibs.oracle import compose_oracle, flow_series, substitute_oracle
from mibs.trees import (
    enumerate_aromatic_trees,
    aromatic_differential,
    corolla_witness,
    enumerate_trees,
    gl_product,
    graft,
    kappa_of,
    psi,
    psi_forest,
    pushforward_character,
    tree_differential,
    tree_forest,
    trees_up_to,
)

SUITES = ("novikov", "morphism", "composition", "substitution", "exact", "bridge")

PARTITIONS = (1, 1, 2, 3, 5, 7, 11, 15, 22, 30)
ROOTED_TREES = (1, 1, 2, 4, 9, 20, 48, 115, 286, 719)


@dataclass
class PropertyResult:
    suite: str
    name: str
    passed: bool
    instances: int
    detail: str = ""


@dataclass
class Report:
    suite: str
    max_order: int
    results: list[PropertyResult] = field(default_factory=list)
    informational: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "max_order": self.max_order,
            "passed": self.passed,
            "results": [asdict(r) for r in self.results],
            "informational": self.informational,
        }


def _check(suite: str, name: str, cases: Iterator, predicate: Callable[..., bool]) -> PropertyResult:
    count = 0
    for case in cases:
        count += 1
        if not predicate(*case):
            return PropertyResult(suite, name, False, count, f"counterexample: {case!r}")
    return PropertyResult(suite, name, True, count)


# ---------------------------------------------------------------------------
# genericity helpers


def random_poly(rng: random.Random, degree: int, span: int = 4) -> Poly:
    coeffs = [Fraction(rng.randint(-span, span), rng.randint(1, span)) for _ in range(degree)]
    lead = 0
    while lead == 0:
        lead = rng.randint(-span, span)
    return Poly(tuple(coeffs) + (Fraction(lead, rng.randint(1, span)),))


def random_point(rng: random.Random, span: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def test_fields(max_order: int, rng: random.Random) -> list[Poly]:
    return [Poly.of(0, 0, 1), Poly.of(0, 0, 0, 1), random_poly(rng, max_order + 1)]


# ---------------------------------------------------------------------------
# suites


def novikov_suite(max_order: int) -> list[PropertyResult]:
    s = "novikov"
    basis = populated_up_to(max_order)

    def triples():
        for x, y, z in itertools.product(basis, repeat=3):
            if x.length + y.length + z.length <= max_order:
                yield x, y, z

    lx = LinComb.of

    def left_pre_lie(x, y, z):
        lhs = pre_lie_lin(pre_lie(x, y), lx(z)) - pre_lie_lin(lx(x), pre_lie(y, z))
        rhs = pre_lie_lin(pre_lie(y, x), lx(z)) - pre_lie_lin(lx(y), pre_lie(x, z))
        return lhs == rhs

    def right_commutative(x, y, z):
        return pre_lie_lin(pre_lie(x, y), lx(z)) == pre_lie_lin(pre_lie(x, z), lx(y))

    def closure(x, y):
        return all(is_populated(m) for m in pre_lie(x, y))

    pairs = [(x, y) for x, y in itertools.product(basis, repeat=2) if x.length + y.length <= max_order]
    small = min(max_order, 5)
    forests = forests_up_to(small)

    def forest_triples():
        for f, g, h in itertools.product(forests, repeat=3):
            if f.length + g.length + h.length <= small:
                yield f, g, h

    def forest_pair_targets():
        for f, g in itertools.product(forests, repeat=2):
            for w in populated_up_to(small):
                if f.length + g.length + w.length <= small:
                    yield f, g, w

    def star1_cases():
        for f in forests_up_to(small, include_empty=False):
            for x in populated_up_to(small):
                if f.length + x.length <= small:
                    yield f, x

    def grading(f, x):
        two = all(m.length == f.length + x.length for m in star2(f, x))
        one = all(m.length == f.length + x.length - f.count for m in star1(f, x))
        populated = all(is_populated(m) for m in star1(f, x)) and all(is_populated(m) for m in star2(f, x))
        return two and one and populated

    def d_commutes(f, x):
        return all(star1(f, derive(x, m)) == derive(star1(f, x), m) for m in range(4))

    def d_commutes_forest(f, g):
        return all(
            star1(f, derive_forest(g, m)) == star1(f, LinComb.of(g)).flat_map(lambda h: derive_forest(h, m))
            for m in range(3)
        )

    def leibniz(x, y):
        return derive(x * y) == mono_product(derive(x), LinComb.of(y)) + mono_product(LinComb.of(x), derive(y))

    forest_targets = [
        (f, g)
        for f in forests_up_to(small, include_empty=False)
        for g in forests_up_to(small, include_empty=False)
        if f.length + g.length <= small
    ]
    return [
        _check(s, "left pre-Lie identity", triples(), left_pre_lie),
        _check(s, "right commutativity", triples(), right_commutative),
        _check(s, "population closure of pre-Lie product", iter(pairs), closure),
        _check(s, "star2 associativity on forests", forest_triples(), lambda f, g, h: star2(star2(f, g), h) == star2(f, star2(g, h))),
        _check(s, "star2 associativity with single target", forest_pair_targets(), lambda f, g, w: star2(star2(f, g), w) == star2(f, star2(g, w))),
        _check(s, "star2 unit", iter((f,) for f in forests), lambda f: star2(EMPTY_FOREST, f) == LinComb.of(f) and star2(f, EMPTY_FOREST) == LinComb.of(f)),
        _check(s, "grading and population of star1/star2", star1_cases(), grading),
        _check(s, "star1 commutes with D", star1_cases(), d_commutes),
        _check(s, "star1 commutes with D on forest targets", iter(forest_targets), d_commutes_forest),
        _check(s, "D is a derivation", iter(pairs), leibniz),
    ]


def morphism_suite(max_order: int, seed: int = 0) -> list[PropertyResult]:
    s = "morphism"
    rng = random.Random(seed)
    fields = test_fields(max_order, rng)

    def cases():
        for forest in forests_up_to(max_order):
            for alpha in populated_up_to(max_order - forest.length):
                for f in fields:
                    yield forest, alpha, f

    def derivative_case():
        for alpha in populated_up_to(max_order):
            for f in fields:
                yield alpha, f

    return [
        _check(s, "elementary differentials are star2 morphisms", cases(), morphism_check),
        _check(
            s,
            "d/dy F[alpha] = F[D alpha]",
            derivative_case(),
            lambda alpha, f: elementary_differential(alpha, f).derivative() == linear_differential(derive(alpha), f),
        ),
    ]


def _random_instances(count: int, max_order: int, rng: random.Random):
    return [(random_poly(rng, max_order + 2), random_point(rng)) for _ in range(count)]


def composition_suite(max_order: int, seed: int = 0, pairs: int = 5) -> list[PropertyResult]:
    s = "composition"
    rng = random.Random(seed)

    def law_cases():
        for _ in range(pairs):
            a = random_character(max_order, rng)
            b = random_character(max_order, rng)
            for f, y0 in _random_instances(3, max_order, rng):
                yield a, b, f, y0

    def law(a, b, f, y0):
        return compose_oracle(a, b, f, y0, max_order) == eval_bseries(compose_characters(b, a), f, y0, max_order)

    def assoc_cases():
        for _ in range(3):
            yield tuple(random_character(max_order, rng, empty=1) for _ in range(3))

    def assoc(a, b, c):
        return compose_characters(c, compose_characters(b, a)) == compose_characters(compose_characters(c, b), a)

    def unit_cases():
        for _ in range(3):
            yield (random_character(max_order, rng, empty=rng.randint(-3, 3)),)

    def unit(a):
        ident = Character.identity(max_order)
        return compose_characters(ident, a) == a and compose_characters(a, ident) == a if a.empty == 1 else compose_characters(ident, a) == a

    def euler_twice():
        e = Character.euler(max_order)
        return compose_oracle(e, e, Poly.of(0, 0, 1), 1, max_order) == eval_bseries(compose_characters(e, e), Poly.of(0, 0, 1), 1, max_order)

    return [
        _check(s, "composition law matches Taylor oracle", law_cases(), law),
        _check(s, "composition is associative", assoc_cases(), assoc),
        _check(s, "identity character is a unit", unit_cases(), unit),
        _check(s, "two Euler steps", iter([()]), euler_twice),
    ]


def substitution_suite(max_order: int, seed: int = 0, pairs: int = 5) -> list[PropertyResult]:
    s = "substitution"
    rng = random.Random(seed + 1)

    def law_cases():
        for _ in range(pairs):
            a = random_character(max_order, rng, empty=rng.randint(-2, 2))
            b = random_character(max_order, rng, empty=0)
            for f, y0 in _random_instances(3, max_order, rng):
                yield a, b, f, y0

    def law(a, b, g, y0):
        return substitute_oracle(a, b, g, y0, max_order) == eval_bseries(substitute_characters(b, a), g, y0, max_order)

    def unit_cases():
        for _ in range(3):
            yield (random_character(max_order, rng, empty=rng.randint(-2, 2)),)

    return [
        _check(s, "substitution law matches Taylor oracle", law_cases(), law),
        _check(s, "delta_z0 is a left unit", unit_cases(), lambda a: substitute_characters(Character.delta_z0(max_order), a) == a),
    ]


def exact_suite(max_order: int, seed: int = 0) -> list[PropertyResult]:
    s = "exact"
    rng = random.Random(seed + 2)
    exact = exact_solution_character(max_order)
    fields = [Poly.of(0, 1), Poly.of(0, 0, 1), Poly.of(0, 0, 0, 1)] + [random_poly(rng, max_order + 1) for _ in range(2)]
    points = [Fraction(1), Fraction(-1, 2), Fraction(3, 7)]
    cases = [(f, y0) for f in fields for y0 in points]
    return [
        _check(s, "exact character reproduces the flow", iter(cases), lambda f, y0: eval_bseries(exact, f, y0, max_order) == flow_series(f, y0, max_order)),
        _check(s, "exact character equals tree pushforward", iter([()]), lambda: pushforward_character(lambda t: 1, max_order) == exact),
    ]


def bridge_suite(max_order: int, seed: int = 0) -> list[PropertyResult]:
    s = "bridge"
    rng = random.Random(seed + 3)
    trees = trees_up_to(max_order)

    def graft_cases():
        for t1, t2 in itertools.product(trees, repeat=2):
            if t1.order + t2.order <= max_order:
                yield t1, t2

    small = min(max_order, 5)
    small_trees = trees_up_to(small)
    tree_forests = [()] + [
        tree_forest(c)
        for n in range(1, small)
        for c in itertools.combinations_with_replacement(small_trees, n)
        if sum(t.order for t in c) < small
    ]

    def gl_cases():
        for forest in tree_forests:
            for t in small_trees:
                if sum(x.order for x in forest) + t.order <= small:
                    yield forest, t

    def gl_morphism(forest, t):
        lhs = gl_product(forest, [t]).map_basis(psi_forest)
        return lhs == star2(psi_forest(forest), Forest.of(psi(t)))

    def gl_projected(forest, t):
        single = LinComb((psi(f[0]), c) for f, c in gl_product(forest, [t]).items() if len(f) == 1)
        return single == star2(psi_forest(forest), psi(t))

    def counts(n):
        return len(enumerate_populated(n)) == PARTITIONS[n - 1] and len(enumerate_trees(n)) == ROOTED_TREES[n - 1]

    def surjective(n):
        fibres = {}
        for t in enumerate_trees(n):
            fibres.setdefault(psi(t), []).append(t)
        ok = set(fibres) == set(enumerate_populated(n))
        if n >= 4:
            ok = ok and max(len(v) for v in fibres.values()) >= 2
        return ok

    fields = test_fields(max_order, rng)

    def collapse(t, f):
        return tree_differential(t, f) == elementary_differential(psi(t), f)

    def aromatic_cases():
        for n in range(1, min(max_order, 4) + 1):
            for g in enumerate_aromatic_trees(n):
                yield g, fields[-1]

    def aromatic(g, f):
        kappa = kappa_of(g)
        return is_populated(kappa) and aromatic_differential(g, f) == elementary_differential(kappa, f)

    orders = range(1, max_order + 1)
    return [
        _check(s, "psi o corolla witness = id", ((b,) for b in populated_up_to(max(max_order, 7))), lambda b: psi(corolla_witness(b)) == b),
        _check(s, "psi is a pre-Lie morphism", graft_cases(), lambda t1, t2: graft(t1, t2).map_basis(psi) == pre_lie(psi(t1), psi(t2))),
        _check(s, "psi is a Grossman-Larson morphism", gl_cases(), gl_morphism),
        _check(s, "psi on single-tree part of Grossman-Larson", gl_cases(), gl_projected),
        _check(s, "basis counts (partitions vs rooted trees)", ((n,) for n in orders), counts),
        _check(s, "psi surjective, not injective from order 4", ((n,) for n in orders), surjective),
        _check(s, "1-D collapse of tree elementary differentials", ((t, f) for t in trees for f in fields), collapse),
        _check(s, "aromatic composition maps are populated and collapse", aromatic_cases(), aromatic),
    ]


SUITE_FUNCS: dict[str, Callable[[int], list[PropertyResult]]] = {
    "novikov": novikov_suite,
    "morphism": morphism_suite,
    "composition": composition_suite,
    "substitution": substitution_suite,
    "exact": exact_suite,
    "bridge": bridge_suite,
}


# ---------------------------------------------------------------------------
# informational sections


def desk_characters(order: int, p1=Fraction(2, 3), p2=Fraction(-5, 4), q=Fraction(3, 2)) -> tuple[Character, Character]:
    z0 = MultiIndex.letter(0)
    z0z1 = MultiIndex.of({0: 1, 1: 1})
    a = Character(order, Fraction(1), {z0: p1, z0z1: p2})
    b = Character(order, Fraction(0), {z0: Fraction(1), z0z1: q})
    return a, b


def regraded_law(b: Character, a: Character, g: Poly, y0: Fraction, order: int) -> TruncSeries:
    """Character law with the contribution of each ``z^beta`` of ``a`` shifted by ``h^|beta|``."""
    out = TruncSeries.constant(a.empty * Fraction(y0), order)
    for beta, value in a.values.items():
        piece = Character(a.order, Fraction(0), {beta: value})
        out = out + eval_bseries(substitute_characters(b, piece), g, y0, order).shift(beta.length)
    return out


def convention_report(order: int = 5, g: Poly | None = None, y0: Fraction = Fraction(1, 2)) -> dict:
    """Compare the literal substitution ``f -> B(b, h, g)`` with the character law."""
    g = g or Poly.of(1, -1, Fraction(1, 2), 2, 0, 0, Fraction(1, 3))
    a, b = desk_characters(order)
    law = eval_bseries(substitute_characters(b, a), g, y0, order)
    normalized = substitute_oracle(a, b, g, y0, order, "normalized")
    literal = substitute_oracle(a, b, g, y0, order, "literal")
    differing = [n for n in range(order + 1) if literal[n] != law[n]]
    return {
        "section": "substitution convention discrepancy",
        "instance": {"a": a.to_json(), "b": b.to_json(), "g": g.to_json(), "y0": str(y0)},
        "law": [str(c) for c in law.coeffs],
        "normalized_oracle": [str(c) for c in normalized.coeffs],
        "literal_oracle": [str(c) for c in literal.coeffs],
        "normalized_matches_law": normalized == law,
        "literal_differs_at_orders": differing,
        "literal_matches_regraded_law": literal == regraded_law(b, a, g, y0, order),
        "statement": (
            "replacing f by B(b,h,g,.) without the 1/h factor multiplies every term coming from "
            "z^beta in a by an extra h^|beta|; the character law matches the field h^-1 B(b,h,g,.)"
        ),
    }


def m_b_report(order: int = 4, seed: int = 0) -> dict:
    """Check ``M_b(F *2 beta) = M_b(F) *2 M_b(beta)`` for each identity-term weight."""
    rng = random.Random(seed + 4)
    b = random_character(order, rng, empty=0)
    z0 = MultiIndex.letter(0)
    instances = [(Forest.of(z0), z0), (Forest.of(z0), MultiIndex.of({0: 1, 1: 1})), (Forest.of(z0, z0), z0)]
    rows = []
    for weight in sorted({Fraction(0), Fraction(1), b.empty}):
        for forest, beta in instances:
            lhs: dict[int, LinComb] = {}
            for mu, c in star2(forest, beta).items():
                for grade, comb in m_b(b, mu, weight).items():
                    lhs[grade] = lhs.get(grade, LinComb()) + comb * c
            lhs = {g: c for g, c in sorted(lhs.items()) if c and g <= order}
            rhs = graded_star2(m_b(b, forest, weight), m_b(b, beta, weight), order)
            rows.append({"identity_weight": str(weight), "forest": forest.text(), "beta": beta.text(), "morphism_holds": lhs == rhs})
    return {"section": "M_b identity-weight explorer", "b_empty": str(b.empty), "rows": rows}


def run(suite: str, max_order: int, seed: int = 0) -> Report:
    names = SUITES if suite == "all" else (suite,)
    report = Report(suite, max_order)
    for name in names:
        fn = SUITE_FUNCS[name]
        report.results.extend(fn(max_order) if name in ("novikov",) else fn(max_order, seed))
    if suite in ("all", "substitution"):
        report.informational.append(convention_report(max(2, min(max_order, 5))))
        report.informational.append(m_b_report(max(2, min(max_order, 4)), seed))
    return report
