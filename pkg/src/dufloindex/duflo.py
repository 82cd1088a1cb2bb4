"""Distributions supported at the origin of g and at the identity of G.

Functions on G near e are carried by their exp-pullback Series, so exp^* and
log^* are identities on representations.  Pairing convention:
<sum a_b d^b delta, phi> = sum a_b (d^b phi)(0), without the (-1)^|b| sign.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Mapping

from .liealg import LieAlg, su2, su2_irrep
from .linalg import is_scalar_multiple_of_identity
from .polyfit import fit_polynomial
from .report import CheckResult
from .scalar import ZERO, Monomial, Scalar, Series, monomials, series_invert
from .weil import j_g


@dataclass(frozen=True)
class Dist0:
    algebra: LieAlg
    terms: Mapping[Monomial, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for b, v in dict(self.terms).items():
            b = tuple(b)
            if len(b) != self.algebra.d:
                raise ValueError("derivative multi-index has the wrong length")
            s = Scalar.coerce(v)
            if s:
                clean[b] = s
        object.__setattr__(self, "terms", clean)

    @property
    def order(self) -> int:
        return max((sum(b) for b in self.terms), default=0)

    @staticmethod
    def delta(g: LieAlg) -> Dist0:
        return Dist0(g, {(0,) * g.d: 1})

    @staticmethod
    def casimir_symbol(g: LieAlg) -> Dist0:
        """sum_i d_i^2 delta."""
        out = {}
        for i in range(g.d):
            out[tuple(2 * (k == i) for k in range(g.d))] = Scalar.of(1)
        return Dist0(g, out)

    def __add__(self, o: Dist0) -> Dist0:
        t = dict(self.terms)
        for b, v in o.terms.items():
            t[b] = t.get(b, ZERO) + v
        return Dist0(self.algebra, t)

    def scale(self, s: object) -> Dist0:
        return Dist0(self.algebra, {b: v * Scalar.coerce(s) for b, v in self.terms.items()})


@dataclass(frozen=True)
class DistG:
    """exp_*(u) for a point-supported u on g."""

    u: Dist0


def pair0(u: Dist0, phi: Series) -> Scalar:
    if phi.dim != u.algebra.d:
        raise ValueError("series dimension does not match the distribution")
    acc = ZERO
    for b, a in u.terms.items():
        acc = acc + a * phi.derivative_at_zero(b)
    return acc


def pairG(T: DistG, f_pullback: Series) -> Scalar:
    return pair0(T.u, f_pullback)


def _binom(beta: Monomial, gam: Monomial) -> int:
    out = 1
    for b, c in zip(beta, gam):
        out *= comb(b, c)
    return out


def multiply_test_function(u: Dist0, s: Series) -> Dist0:
    """u' with <u', phi> = <u, s * phi> (Leibniz rule at the origin)."""
    out: dict[Monomial, Scalar] = {}
    for beta, a in u.terms.items():
        for gam in monomials(u.algebra.d, sum(beta)):
            if any(c > b for c, b in zip(gam, beta)):
                continue
            rest = tuple(b - c for b, c in zip(beta, gam))
            coeff = s.derivative_at_zero(rest)
            if coeff:
                out[gam] = out.get(gam, ZERO) + a * coeff * _binom(beta, gam)
    return Dist0(u.algebra, out)


def duflo(u: Dist0, g: LieAlg | None = None) -> DistG:
    g = g or u.algebra
    j = j_g(g, max(u.order, 1)).series
    return DistG(multiply_test_function(u, j))


def duflo_inv(T: DistG) -> Dist0:
    g = T.u.algebra
    j = j_g(g, max(T.u.order, 1)).series
    return multiply_test_function(T.u, series_invert(j))


def su2_character_pullback(m: int, order: int) -> Series:
    """chi_m(exp X) = sin((m+1) r/2) / sin(r/2), r = |X|, for the (m+1)-dimensional irrep."""
    half = order // 2
    a = Fraction(m + 1, 2)
    # both numerator and denominator divided by r/2, as series in s = r^2
    num = [Fraction((-1) ** k, factorial(2 * k + 1)) * a ** (2 * k + 1) * 2 for k in range(half + 1)]
    den = [Fraction((-1) ** k, factorial(2 * k + 1)) * Fraction(1, 2) ** (2 * k) for k in range(half + 1)]
    return _radial(num, order) * series_invert(_radial(den, order))


def su2_jchar_pullback(m: int, order: int) -> Series:
    """j(X) chi_m(exp X) = sin((m+1) r/2) / (r/2)."""
    a = Fraction(m + 1, 2)
    num = [Fraction((-1) ** k, factorial(2 * k + 1)) * a ** (2 * k + 1) * 2 for k in range(order // 2 + 1)]
    return _radial(num, order)


def _radial(coeffs: list[Fraction], order: int) -> Series:
    r2 = Series(3, order, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
    out = Series(3, order)
    power = Series.const(3, order)
    for c in coeffs:
        out = out + power.scale(c)
        power = power * r2
    return out


def harish_chandra_check(m_values: range | list[int] = range(6), order: int = 4) -> CheckResult:
    """<Duf(Casimir symbol), chi_m> / dim = Casimir eigenvalue + <Casimir symbol, j>."""
    res = CheckResult("harish_chandra")
    g = su2()
    u = Dist0.casimir_symbol(g)
    T = duflo(u, g)
    shift = pair0(u, j_g(g, order).series)
    res.values["shift"] = str(shift)
    per_dim = []
    for m in m_values:
        val = pairG(T, su2_character_pullback(m, order))
        eig = is_scalar_multiple_of_identity(su2_irrep(m).casimir())
        res.values[f"m={m}"] = str(val)
        if eig is None:
            res.fail(f"Casimir of the spin {m}/2 irrep is not scalar")
            continue
        if val != (eig + shift) * (m + 1):
            res.fail(f"m={m}: pairing {val} but dim*(eigenvalue+shift) = {(eig + shift) * (m + 1)}")
        per_dim.append((val / (m + 1)).as_gauss())
    if any(v.im for v in per_dim):
        res.fail("pairings are not real")
        return res
    fit = fit_polynomial(list(m_values), [v.re for v in per_dim], max_degree=2)
    res.values["fit"] = " ".join(str(c) for c in fit.coefficients)
    res.values["fit_residual"] = str(fit.residual)
    if fit.residual or fit.degree != 2:
        res.fail(f"eigenvalue pattern is not exactly quadratic (degree {fit.degree}, residual {fit.residual})")
    return res
