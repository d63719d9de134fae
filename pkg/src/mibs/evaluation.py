"""Exact polynomials, truncated power series and multi-index elementary differentials."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from mibs.core import Forest, MultiIndex, star2, symmetry_factor

if TYPE_CHECKING:
    from mibs.characters import Character

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Poly:
    """Polynomial in ``y`` with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self) -> None:
        cs = [Fraction(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def of(cls, *coeffs: Scalar) -> Poly:
        return cls(tuple(Fraction(c) for c in coeffs))

    @classmethod
    def const(cls, c: Scalar) -> Poly:
        return cls((Fraction(c),))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> Poly:
        return cls((Fraction(0),) * degree + (Fraction(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: Poly | Scalar) -> Poly:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Poly | Scalar) -> Poly:
        return self + (-other)

    def __rsub__(self, other: Scalar) -> Poly:
        return -self + other

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if isinstance(other, (int, Fraction)):
            return Poly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def derivative(self, k: int = 1) -> Poly:
        cs = self.coeffs
        for _ in range(k):
            cs = tuple(i * c for i, c in enumerate(cs))[1:]
        return Poly(cs)

    def __call__(self, y: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def compose_series(self, series: TruncSeries) -> TruncSeries:
        """Evaluate this polynomial at a truncated series (Horner)."""
        acc = TruncSeries.constant(Fraction(0), series.order)
        for c in reversed(self.coeffs):
            acc = acc * series + c
        return acc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Iterable[str]) -> Poly:
        return cls(tuple(Fraction(c) for c in data))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*y^{i}")
        return " + ".join(terms)


@dataclass(frozen=True)
class TruncSeries:
    """Power series in ``h`` truncated after ``h^order``.

    Coefficients are rationals, or :class:`Poly` values when the series
    coefficients are themselves functions of ``y``.
    """

    order: int
    coeffs: tuple

    def __post_init__(self) -> None:
        cs = list(self.coeffs)[: self.order + 1]
        zero = _zero_like(cs[0]) if cs else Fraction(0)
        cs += [zero] * (self.order + 1 - len(cs))
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c, order: int) -> TruncSeries:
        return cls(order, (c,))

    @classmethod
    def monomial(cls, power: int, c, order: int) -> TruncSeries:
        zero = _zero_like(c)
        return cls(order, (zero,) * power + (c,))

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __add__(self, other) -> TruncSeries:
        if isinstance(other, TruncSeries):
            n = min(self.order, other.order)
            return TruncSeries(n, tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])))
        cs = list(self.coeffs)
        cs[0] = cs[0] + other
        return TruncSeries(self.order, tuple(cs))

    __radd__ = __add__

    def __neg__(self) -> TruncSeries:
        return TruncSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> TruncSeries:
        return self + (-other)

    def __mul__(self, other) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            return TruncSeries(self.order, tuple(c * other for c in self.coeffs))
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = _zero_like(self.coeffs[0])
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        return TruncSeries(n, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> TruncSeries:
        out = TruncSeries.constant(_one_like(self.coeffs[0]), self.order)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, power: int) -> TruncSeries:
        """Multiply by ``h^power`` and re-truncate."""
        zero = _zero_like(self.coeffs[0])
        return TruncSeries(self.order, (zero,) * power + self.coeffs)

    def integrate(self) -> TruncSeries:
        """Term-wise antiderivative in ``h`` with zero constant term."""
        zero = _zero_like(self.coeffs[0])
        return TruncSeries(self.order, (zero,) + tuple(c * Fraction(1, i + 1) for i, c in enumerate(self.coeffs)))

    def truncate(self, order: int) -> TruncSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series known to order {self.order} to {order}")
        return TruncSeries(order, self.coeffs)

    def map(self, fn) -> TruncSeries:
        return TruncSeries(self.order, tuple(fn(c) for c in self.coeffs))

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> TruncSeries:
        return cls(int(data["order"]), tuple(Fraction(c) for c in data["coeffs"]))


def _zero_like(c):
    return Poly() if isinstance(c, Poly) else Fraction(0)


def _one_like(c):
    return Poly.const(1) if isinstance(c, Poly) else Fraction(1)


def elementary_differential(beta: MultiIndex, f: Poly) -> Poly:
    """``F_f[z^beta] = prod_k (f^(k))^beta(k)``."""
    if not beta:
        raise ValueError("the empty multi-index has no elementary differential")
    out = Poly.const(1)
    for k, m in beta.entries:
        out = out * f.derivative(k) ** m
    return out


def forest_differential(forest: Forest, f: Poly) -> Poly:
    out = Poly.const(1)
    for comp in forest.elements():
        out = out * elementary_differential(comp, f)
    return out


def linear_differential(comb, f: Poly) -> Poly:
    """``F_f`` extended linearly to a combination of multi-indices."""
    out = Poly()
    for beta, c in comb.items():
        out = out + elementary_differential(beta, f) * c
    return out


def eval_bseries(a: Character, f: Poly, y0: Scalar, order: int) -> TruncSeries:
    """Taylor coefficients in ``h`` of ``a(z^0) y + sum h^|b| a(b)/S(b) F_f[b](y)`` at ``y0``."""
    a.require(order)
    y0 = Fraction(y0)
    coeffs = [a.empty * y0] + [Fraction(0)] * order
    for beta, value in a.values.items():
        n = beta.length
        if n <= order and value:
            coeffs[n] += value / symmetry_factor(beta) * elementary_differential(beta, f)(y0)
    return TruncSeries(order, tuple(coeffs))


def eval_bseries_float(a: Character, f: Poly, y0: Scalar, h: float) -> float:
    """Floating-point convenience value of the truncated series at step ``h``."""
    series = eval_bseries(a, f, y0, a.order)
    return math.fsum(float(c) * h**n for n, c in enumerate(series.coeffs))


def morphism_check(forest: Forest, alpha: MultiIndex, f: Poly) -> bool:
    """Check ``F_f[F *2 alpha] == (prod_j F_f[beta_j]) * d^n F_f[alpha]`` exactly."""
    lhs = linear_differential(star2(forest, alpha), f)
    rhs = forest_differential(forest, f) * elementary_differential(alpha, f).derivative(forest.count)
    return lhs == rhs
