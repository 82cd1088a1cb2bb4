from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class PolyFit:
    """Lowest-degree exact polynomial through the data; coefficients low to high."""

    coefficients: tuple[Fraction, ...]
    residual: Fraction

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the interpolating polynomial (Newton form expanded)."""
    n = len(xs)
    dd = list(ys)
    coef = [dd[0]]
    for level in range(1, n):
        dd = [(dd[i + 1] - dd[i]) / (xs[i + level] - xs[i]) for i in range(n - level)]
        coef.append(dd[0])
    poly = [Fraction(0)] * n
    basis = [Fraction(1)]
    for k, c in enumerate(coef):
        for i, b in enumerate(basis):
            poly[i] += c * b
        nb = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nb[i + 1] += b
            nb[i] -= xs[k] * b
        basis = nb
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def fit_polynomial(xs: Sequence[object], ys: Sequence[object], max_degree: int | None = None) -> PolyFit:
    xs = [Fraction(x) for x in xs]
    ys = [Fraction(y) for y in ys]
    if len(xs) != len(ys) or not xs:
        raise ValueError("need matching non-empty data")
    top = len(xs) - 1 if max_degree is None else min(max_degree, len(xs) - 1)
    best = None
    for deg in range(top + 1):
        coeffs = _interpolate(xs[: deg + 1], ys[: deg + 1])
        fit = PolyFit(tuple(coeffs), Fraction(0))
        res = max(abs(fit(x) - y) for x, y in zip(xs, ys))
        fit = PolyFit(tuple(coeffs), res)
        if res == 0:
            return fit
        if best is None or res < best.residual:
            best = fit
    assert best is not None
    return best
