"""Formal Gaussian integration of phi(X) exp(-lambda(X)) against the heat kernel.

h_t(X) = (4 pi t)^{-d/2} exp(-|X|^2 / 4t), so that the integral of x_i x_j is 2t delta_ij.
The bump function of the analytic statement is irrelevant for the formal series.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial

from .gradedalg import Multivector
from .report import CheckResult
from .scalar import Monomial, Scalar, Series
from .weil import SpinData, eval_at_mixed


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def gaussian_moment(beta: Monomial) -> tuple[Scalar, int]:
    """Integral of h_t X^beta as (coefficient, power of t)."""
    if any(b % 2 for b in beta):
        return Scalar(), sum(beta) // 2
    c = 1
    for b in beta:
        c *= 2 ** (b // 2) * _double_factorial(b - 1)
    return Scalar.of(c), sum(beta) // 2


@dataclass(frozen=True)
class AsympExpansion:
    """Psi_0, ..., Psi_K with the integral equal to sum_k Psi_k t^k."""

    coefficients: tuple[Multivector, ...]

    @property
    def K(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Multivector:
        return self.coefficients[k]


def _poly_mul(p: dict[Monomial, Multivector], q: dict[Monomial, Multivector], maxdeg: int):
    out: dict[Monomial, Multivector] = {}
    for a, u in p.items():
        for b, v in q.items():
            m = tuple(x + y for x, y in zip(a, b))
            if sum(m) > maxdeg:
                continue
            w = u.wedge(v)
            if w.is_zero():
                continue
            out[m] = out[m] + w if m in out else w
    return {m: v for m, v in out.items() if not v.is_zero()}


def exp_neg_lambda(sd: SpinData, maxdeg: int) -> dict[Monomial, Multivector]:
    """exp(-lambda(X)) as a polynomial in x with exterior coefficients (finite: lambda is nilpotent)."""
    d, n = sd.algebra.d, sd.n
    lin = {}
    for i, lam in enumerate(sd.lam):
        if not lam.is_zero():
            beta = tuple(int(k == i) for k in range(d))
            lin[beta] = -lam
    zero = (0,) * d
    out = {zero: Multivector.scalar(n)}
    power = {zero: Multivector.scalar(n)}
    for k in range(1, min(n // 2, maxdeg) + 1):
        power = _poly_mul(power, lin, maxdeg)
        if not power:
            break
        inv = Scalar.of(1) / factorial(k)
        for m, v in power.items():
            term = v.scale(inv)
            out[m] = out[m] + term if m in out else term
    return out


def expand(phi: Series, sd: SpinData, K: int) -> AsympExpansion:
    if phi.dim != sd.algebra.d:
        raise ValueError("series dimension does not match the Lie algebra")
    if K < 0 or 2 * K > phi.order:
        raise ValueError("expansion order exceeds what the series truncation supports")
    n = sd.n
    e = exp_neg_lambda(sd, 2 * K)
    psi = [Multivector(n) for _ in range(K + 1)]
    for a, c in phi.items():
        da = sum(a)
        if da > 2 * K:
            continue
        for b, v in e.items():
            beta = tuple(x + y for x, y in zip(a, b))
            tot = da + sum(b)
            if tot > 2 * K or tot % 2:
                continue
            coeff, tp = gaussian_moment(beta)
            if coeff:
                psi[tp] = psi[tp] + v.scale(coeff * c)
    return AsympExpansion(tuple(psi))


def check_lemma(phi: Series, sd: SpinData, K: int | None = None) -> CheckResult:
    """(a) Psi_k lies in degrees <= 2k; (b) top part of Psi_k equals that of phi(-2 Lambda)."""
    res = CheckResult("asymptotic_top_degree")
    n = sd.n
    K = n // 2 if K is None else K
    exp_ = expand(phi, sd, K)
    target = eval_at_mixed(phi, sd.Lambda.scale(-2))
    for k, psi in enumerate(exp_.coefficients):
        high = [deg for deg in psi.degrees() if deg > 2 * k or deg % 2]
        if high:
            res.fail(f"Psi_{k} has components in degrees {sorted(high)}")
        if 2 * k <= n:
            lhs, rhs = psi.grade_part(2 * k), target.grade_part(2 * k)
            if lhs != rhs:
                res.fail(f"degree {2 * k} of Psi_{k} is {lhs}, phi(-2Lambda) gives {rhs}")
    return res
