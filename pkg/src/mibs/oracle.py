"""Brute-force ground truth built from Taylor expansion alone.

Nothing here touches the forest products: the exact flow comes from Picard
iteration, composition from substituting one series into the polynomial
elementary differentials of the other, and substitution from building the
replaced vector field as an ``h``-series of polynomials in ``y``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal

from mibs.characters import Character
from mibs.evaluation import Poly, Scalar, TruncSeries, elementary_differential
from mibs.core import symmetry_factor

Convention = Literal["normalized", "literal"]


def flow_series(f: Poly, y0: Scalar, order: int) -> TruncSeries:
    """Taylor series of the solution of ``y' = f(y), y(0) = y0`` through ``h^order``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    y0 = Fraction(y0)
    y = TruncSeries.constant(y0, order)
    # each round fixes one more coefficient
    for _ in range(order):
        y = f.compose_series(y).integrate() + y0
    return y


def bseries_at_series(a: Character, f: Poly, point: TruncSeries, order: int) -> TruncSeries:
    """``B(a, h, f, Y)`` where ``Y`` is itself a series in ``h``."""
    a.require(order)
    out = point * a.empty
    for beta, value in a.values.items():
        if beta.length > order:
            continue
        term = elementary_differential(beta, f).compose_series(point)
        out = out + term.shift(beta.length) * (value / symmetry_factor(beta))
    return out.truncate(order)


def point_series(b: Character, f: Poly, y0: Scalar, order: int) -> TruncSeries:
    """``B(b, h, f, y0)`` summed term by term from the definition."""
    b.require(order)
    y0 = Fraction(y0)
    coeffs = [b.empty * y0] + [Fraction(0)] * order
    for beta, value in b.values.items():
        if beta.length <= order:
            coeffs[beta.length] += value / symmetry_factor(beta) * elementary_differential(beta, f)(y0)
    return TruncSeries(order, tuple(coeffs))


def compose_oracle(a: Character, b: Character, f: Poly, y0: Scalar, order: int) -> TruncSeries:
    """``B(a, h, f, .)`` evaluated at the point ``B(b, h, f, y0)``."""
    return bseries_at_series(a, f, point_series(b, f, y0, order), order)


def substituted_field(b: Character, g: Poly, order: int, convention: Convention = "normalized") -> TruncSeries:
    """The replacement vector field as an ``h``-series whose coefficients are polynomials in ``y``.

    ``normalized`` is ``h^-1 B(b, h, g, y)``; ``literal`` is ``B(b, h, g, y)``.
    """
    if b.empty != 0:
        raise ValueError(f"substitution needs b(z^0) = 0, got {b.empty}")
    b.require(order)
    offset = 1 if convention == "normalized" else 0
    if convention not in ("normalized", "literal"):
        raise ValueError(f"unknown convention {convention!r}")
    coeffs = [Poly() for _ in range(order + 1)]
    for beta, value in b.values.items():
        power = beta.length - offset
        if power <= order:
            coeffs[power] = coeffs[power] + elementary_differential(beta, g) * (value / symmetry_factor(beta))
    return TruncSeries(order, tuple(coeffs))


def substitute_oracle(
    a: Character,
    b: Character,
    g: Poly,
    y0: Scalar,
    order: int,
    convention: Convention = "normalized",
) -> TruncSeries:
    """``B(a, h, f~, y0)`` with ``f~`` from :func:`substituted_field`.

    Elementary differentials of ``a`` are expanded directly as products of
    ``y``-derivatives of ``f~``, each a series in ``h``.
    """
    a.require(order)
    y0 = Fraction(y0)
    field_series = substituted_field(b, g, order, convention)
    derivs: dict[int, TruncSeries] = {}

    def nth(k: int) -> TruncSeries:
        if k not in derivs:
            derivs[k] = field_series.map(lambda p: p.derivative(k)(y0))
        return derivs[k]

    out = TruncSeries.constant(a.empty * y0, order)
    for beta, value in a.values.items():
        if beta.length > order:
            continue
        prod = TruncSeries.constant(Fraction(1), order)
        for k, m in beta.entries:
            prod = prod * nth(k) ** m
        out = out + prod.shift(beta.length) * (value / symmetry_factor(beta))
    return out
