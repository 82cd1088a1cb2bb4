"""End-to-end harness on P = SU(2) over M = S^2 with structure group the maximal torus T.

Model conventions, fixed before any comparison is made:

* su(2) basis with [X1, X2] = X3 cyclic, orthonormal; T = exp(R X3) has period 4 pi.
* Horizontal frame (e1, e2) <-> (X1, X2); isotropy alpha(X3) = ad(X3) on span(X1, X2),
  the unit-rate rotation e1 -> e2.
* Integer weight labels m = 2 mu where mu is the eigenvalue of i*X3, so
  chi_m(exp s X3) = exp(-i m s / 2).  Spinors S+ / S- carry labels +1 / -1.
* E = S (x) C_w with nu = gamma + tau_w, tau_w(X3) = -i w / 2.
* Curvature of the canonical connection: Theta(X1, X2) = -[X1, X2]_t.
* Volume of M fixed by Gauss-Bonnet (chi(S^2) = 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg as la
from .duflo import Dist0, DistG, duflo_inv, pair0
from .gradedalg import Multivector, SpinorRep, berezin_supertrace, chevalley_inv, spinor_rep
from .liealg import LieAlg, Rep, abelian, su2, su2_irrep
from .polyfit import PolyFit, fit_polynomial
from .report import CheckResult, merge
from .scalar import ONE, Scalar, Series
from .weil import (FundClass, InvariantSeries, MixedElt, SpinData, build_spindata, check_gspin,
                   check_identities, chern, cw_pair, euler_series, eval_at_mixed, gamma_homomorphism,
                   inverse, j_g, j_M)

TORUS_PERIOD = 4 * math.pi
MINUS_I_HALF = Scalar.of(0, Fraction(-1, 2))


@lru_cache(maxsize=None)
def irrep(two_j: int) -> Rep:
    return su2_irrep(two_j)


@dataclass(frozen=True)
class HomogModel:
    w: int
    cutoff: int
    K: LieAlg
    torus: LieAlg
    spinor: SpinorRep
    spin: SpinData
    nu: Rep
    clifford: tuple[la.Matrix, ...]
    tau: Rep
    curvature: MixedElt
    fundclass: FundClass
    validation: CheckResult = field(compare=False)

    @property
    def n(self) -> int:
        return 2

    def torus_weight_matrix(self, two_j: int) -> la.Matrix:
        """Action of X3 on V_j (x) E."""
        r = irrep(two_j)
        e_dim = len(self.clifford[0])
        return la.matadd(la.kron(r.matrix(2), la.identity(e_dim)), la.kron(la.identity(r.dim_V), self.nu.matrix(0)))


def horizontal_curvature(K: LieAlg, torus_index: int = 2, horizontal: Sequence[int] = (0, 1)) -> Multivector:
    """Theta(e_a, e_b) = -<[X_a, X_b], X_t>, assembled as a 2-form (single torus direction)."""
    n = len(horizontal)
    out = Multivector(n)
    for p in range(n):
        for q in range(p + 1, n):
            c = K.c[horizontal[p]][horizontal[q]][torus_index]
            if c:
                out = out + Multivector.blade(n, (p, q), -c)
    return out


def gauss_bonnet_volume(alpha: Rep, curvature: MixedElt, euler_characteristic: int = 2) -> Scalar:
    per_unit = cw_pair(euler_series(alpha, alpha.dim_V // 2), curvature, FundClass(alpha.dim_V, ONE))
    if per_unit.is_zero():
        raise ValueError("Euler form integrates to zero; cannot fix the volume")
    return Scalar.of(euler_characteristic) / per_unit


def build_model(w: int = 0, cutoff: int = 20) -> HomogModel:
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    K = su2()
    torus = abelian(1)
    # isotropy: ad(X3) restricted to span(X1, X2)
    ad3 = K.ad_basis(2)
    alpha = Rep.make(torus, [[[ad3[a][b] for b in (0, 1)] for a in (0, 1)]], "isotropy")
    spin = build_spindata(alpha)
    S = spinor_rep(2)
    gamma_S = S.represent(spin.gamma[0])
    tau_w = [[MINUS_I_HALF * w]]
    tau = Rep.make(torus, [tau_w], f"C_{w}")
    nu = Rep.make(torus, [la.matadd(la.kron(gamma_S, la.identity(1)), la.kron(la.identity(2), tau_w))], "nu")
    clifford = tuple(la.kron(S.gen(i), la.identity(1)) for i in range(2))
    curvature = MixedElt(torus, 2, (horizontal_curvature(K),))

    checks = []
    gs = check_gspin(nu, clifford, alpha)
    checks.append(gs.result)
    if gs.tau is not None and not la.mat_equal(gs.tau[0], la.kron(la.identity(2), tau_w)):
        gs.result.fail("extracted tau differs from the twist")
    checks.append(gamma_homomorphism(spin))
    checks.append(check_identities(spin))
    rel = CheckResult("curvature_vs_Lambda")
    rel.values["curvature"] = str(curvature)
    rel.values["Lambda"] = str(spin.Lambda)
    if curvature != spin.Lambda.scale(-2):
        rel.fail(f"curvature {curvature} is not -2 Lambda = {spin.Lambda.scale(-2)}")
    checks.append(rel)
    validation = merge("model", checks)
    if not validation.passed:
        raise ValueError("model validation failed: " + "; ".join(validation.violations))
    V = gauss_bonnet_volume(alpha, curvature)
    return HomogModel(w, cutoff, K, torus, S, spin, nu, clifford, tau, curvature, FundClass(2, V, 1), validation)


# ---------------------------------------------------------------------------
# Peter-Weyl blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    two_j: int
    operator: la.Matrix = field(repr=False)
    grading: la.Matrix = field(repr=False)
    labels: tuple[int, ...]
    kernel: dict[int, tuple[int, int]]  # weight label -> (dim ker D+, dim ker D-)

    @property
    def multiplicity(self) -> int:
        return self.two_j + 1

    @property
    def index(self) -> int:
        return sum(p - q for p, q in self.kernel.values())


def _labels(model: HomogModel, two_j: int) -> tuple[int, ...]:
    wm = model.torus_weight_matrix(two_j)
    out = []
    for i, row in enumerate(wm):
        if any(x for j, x in enumerate(row) if j != i):
            raise ValueError("torus action is not diagonal in the ladder basis")
        lab = (row[i] * Scalar.of(0, 2)).as_gauss()  # 2 * i * (-i mu) = 2 mu
        if lab.im or lab.re.denominator != 1:
            raise ValueError(f"non-integral weight label {lab}")
        out.append(int(lab.re))
    return tuple(out)


def block_dirac(model: HomogModel, two_j: int) -> Block:
    r = irrep(two_j)
    D = la.zeros(r.dim_V * 2, r.dim_V * 2)
    for i in range(2):
        D = la.matadd(D, la.kron(r.matrix(i), model.clifford[i]))
    grading = la.kron(la.identity(r.dim_V), la.kron(model.spinor.grading_matrix(), la.identity(1)))
    labels = _labels(model, two_j)
    parity = [grading[i][i] for i in range(len(grading))]
    kernel: dict[int, tuple[int, int]] = {}
    for lab in sorted(set(labels)):
        idx = [i for i, x in enumerate(labels) if x == lab]
        counts = []
        for sign in (ONE, -ONE):
            cols = [i for i in idx if parity[i] == sign]
            rows = [i for i in idx if parity[i] == -sign]
            if not cols:
                counts.append(0)
                continue
            if not rows:
                counts.append(len(cols))
                continue
            sub = [[D[a][b] for b in cols] for a in rows]
            counts.append(len(cols) - la.rank(sub))
        if counts[0] or counts[1]:
            kernel[lab] = (counts[0], counts[1])
    return Block(two_j, D, grading, labels, kernel)


def block_checks(model: HomogModel, block: Block) -> CheckResult:
    """Oddness, weight equivariance and McKean-Singer on one block (exact)."""
    res = CheckResult(f"block[2j={block.two_j}]")
    D, G = block.operator, block.grading
    if not la.is_zero_matrix(la.anticommutator(D, G)):
        res.fail("operator does not anticommute with the grading")
    wm = model.torus_weight_matrix(block.two_j)
    if not la.is_zero_matrix(la.commutator(D, wm)):
        res.fail("operator does not commute with the torus action")
    D2 = la.matmul(D, D)
    if not la.is_zero_matrix(la.commutator(D2, wm)):
        res.fail("square of the operator does not commute with the torus action")
    st = la.trace(la.matmul(G, kernel_projector(D2)))
    res.values["supertrace_projector"] = str(st)
    if st != block.index:
        res.fail(f"supertrace of the kernel projector {st} != index {block.index}")
    return res


def kernel_projector(A: la.Matrix) -> la.Matrix:
    """Projector onto ker A along im A (A diagonalizable at eigenvalue 0)."""
    ker = la.nullspace(A)
    img = la.column_space(A)
    n = len(A)
    if len(ker) + len(img) != n:
        raise ValueError("kernel and image do not span; eigenvalue 0 is not semisimple")
    cols = ker + img
    Q = la.from_gauss([[cols[c][r] for c in range(n)] for r in range(n)])
    proj = [[ONE if (i == j and i < len(ker)) else Scalar() for j in range(n)] for i in range(n)]
    return la.matmul(la.matmul(Q, proj), la.inverse(Q))


# ---------------------------------------------------------------------------
# Distributional index
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CharSum:
    w: int
    cutoff: int
    coefficients: dict[int, int]
    flagged: tuple[int, ...]
    fit: PolyFit | None

    def table(self) -> str:
        lines = [f"{'m':>5} {'Ind(D_m)':>9}"]
        lines += [f"{m:>5} {c:>9}" for m, c in sorted(self.coefficients.items())]
        if self.fit is not None:
            lines.append(f"Q(m) coefficients (low to high): {[str(c) for c in self.fit.coefficients]}, "
                         f"residual {self.fit.residual}")
        return "\n".join(lines)


def max_contributing_spin(m: int, w: int) -> int:
    """Largest 2j whose block can have kernel of weight m.

    D~^2 = j(j+1) - mu^2 - mu*s on the vector (mu, s), which vanishes only at
    mu = s*j; that vector has label 2 mu + s + w, so 2j = |m - w| - 1.
    """
    return max(abs(m - w) - 1, 0)


def distributional_index(model: HomogModel, cutoff: int | None = None) -> CharSum:
    cutoff = model.cutoff if cutoff is None else cutoff
    totals: dict[int, int] = {}
    for two_j in range(cutoff + 1):
        b = block_dirac(model, two_j)
        for lab, (p, q) in b.kernel.items():
            totals[lab] = totals.get(lab, 0) + b.multiplicity * (p - q)
    window = cutoff // 2
    coeffs = {}
    flagged = []
    for m in range(-window, window + 1):
        if max_contributing_spin(m, model.w) <= cutoff:
            coeffs[m] = totals.get(m, 0)
        else:
            flagged.append(m)
    flagged.extend(m for m in totals if abs(m) > window)
    fit = fit_polynomial(sorted(coeffs), [coeffs[m] for m in sorted(coeffs)]) if coeffs else None
    return CharSum(model.w, cutoff, coeffs, tuple(sorted(set(flagged))), fit)


# ---------------------------------------------------------------------------
# The two sides of the index formula
# ---------------------------------------------------------------------------


def weight_power_derivative(k: int) -> Scalar:
    """c_k with sum_m m^k chi_m = c_k d^k delta on the torus (d along X3)."""
    return Scalar.of(0, 2) ** k


def torus_character_pullback(m: int, order: int) -> Series:
    """chi_m(exp x X3) = exp(-i m x / 2)."""
    a = Scalar.of(0, Fraction(-m, 2))
    return Series(1, order, {(k,): a ** k * Fraction(1, math.factorial(k)) for k in range(order + 1)})


def charsum_distribution(cs: CharSum) -> DistG:
    if cs.fit is None or cs.fit.residual:
        raise ValueError("cannot identify point-supported distribution")
    terms = {(k,): weight_power_derivative(k) * q for k, q in enumerate(cs.fit.coefficients) if q}
    return DistG(Dist0(abelian(1), terms))


def _as_series(phi: Series | InvariantSeries) -> Series:
    return phi.series if isinstance(phi, InvariantSeries) else phi


def lhs_exact(cs: CharSum, phi: Series | InvariantSeries) -> Scalar:
    """<Duf^{-1}[D~], phi>."""
    return pair0(duflo_inv(charsum_distribution(cs)), _as_series(phi))


def _integrand(model: HomogModel, phi: Series, with_j_g: bool) -> Series:
    order = max(phi.order, model.n // 2)
    F = inverse(j_M(model.spin.alpha, order)).series * chern(model.tau, order).series * phi
    if with_j_g:
        F = F * j_g(model.torus, order).series
    return F


def rhs_exact(model: HomogModel, phi: Series | InvariantSeries) -> Scalar:
    """Chern-Weil: j_M^{-1} tr(e^{-tau}) phi at curvature / 2 pi i, paired with [M]."""
    return cw_pair(_integrand(model, _as_series(phi), False), model.curvature, model.fundclass)


def rhs_local(model: HomogModel, phi: Series | InvariantSeries, normalization: Scalar | None = None) -> Scalar:
    """Local-index route: V Str(sigma^{-1} F(-2 Lambda)) / (4 pi)^{n/2}."""
    F = _integrand(model, _as_series(phi), True)
    form = eval_at_mixed(F, model.spin.Lambda.scale(-2))
    st = berezin_supertrace(chevalley_inv(form), normalization)
    return st * model.fundclass.volume * model.fundclass.orientation / (Scalar.of(4, pi_power=1) ** (model.n // 2))


def standard_phis(order: int = 3) -> list[Series]:
    return [Series(1, order, {(k,): 1}) for k in range(4)]


def theorem_check(w: int, phis: Sequence[Series], cutoff: int = 12,
                  normalization: Scalar | None = None) -> CheckResult:
    res = CheckResult(f"index_formula[w={w}]")
    model = build_model(w, cutoff)
    cs = distributional_index(model)
    for idx, phi in enumerate(phis):
        lhs = lhs_exact(cs, phi)
        cw = rhs_exact(model, phi)
        loc = rhs_local(model, phi, normalization)
        res.values[f"phi{idx}.lhs"] = str(lhs)
        res.values[f"phi{idx}.rhs_chern_weil"] = str(cw)
        res.values[f"phi{idx}.rhs_local"] = str(loc)
        if lhs != cw:
            res.fail(f"phi{idx} = {phi}: lhs {lhs} != Chern-Weil rhs {cw}")
        if lhs != loc:
            res.fail(f"phi{idx} = {phi}: lhs {lhs} != local rhs {loc}")
    return res


# ---------------------------------------------------------------------------
# Heat trace (floating point)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeatResult:
    m: int
    t_grid: tuple[float, ...]
    values: tuple[float, ...]
    extrapolated: float
    exact: int
    truncation_bound: float
    decay_rate: float | None
    casimir: float | None

    @property
    def corrected(self) -> tuple[float, ...]:
        """Values times e^{t C}: the factor the McKean-Singer step discards (diagnostic only)."""
        c = self.casimir or 0.0
        return tuple(v * math.exp(t * c) for t, v in zip(self.t_grid, self.values))

    @property
    def relative_error(self) -> float:
        if self.exact == 0:
            return abs(self.extrapolated)
        return abs(self.extrapolated - self.exact) / abs(self.exact)


@lru_cache(maxsize=None)
def casimir_value(two_j: int) -> float:
    """Eigenvalue of -sum_i r(X_i)^2 on V_j from the exact matrices (applied to the top vector)."""
    r = irrep(two_j)
    v = [[ONE if k == 0 else Scalar()] for k in range(r.dim_V)]
    acc = la.zeros(r.dim_V, 1)
    for i in range(3):
        acc = la.matadd(acc, la.matmul(r.matrix(i), la.matmul(r.matrix(i), v)))
    if any(acc[k][0] for k in range(1, r.dim_V)):
        raise ValueError("top weight vector is not a Casimir eigenvector")
    return -float(acc[0][0].as_gauss().re) + 0.0


@lru_cache(maxsize=64)
def _scalar_heat_kernel(t: float, spectral_cutoff: int, quad_points: int) -> np.ndarray:
    """sum_j dim(V_j) e^{-t C_j} chi_j(exp s X3) on the quadrature grid (before 1/vol K)."""
    s = np.arange(quad_points) * (TORUS_PERIOD / quad_points)
    p = np.zeros(quad_points, dtype=complex)
    for two_j in range(spectral_cutoff + 1):
        mus = np.arange(two_j, -two_j - 1, -2) / 2.0
        chi = np.exp(-1j * np.outer(mus, s)).sum(axis=0)
        p += (two_j + 1) * math.exp(-t * casimir_value(two_j)) * chi
    return p


def _graded_twist_trace(model: HomogModel, s: np.ndarray) -> np.ndarray:
    """Str_E nu(exp(-s X3)) from the exact nu and grading."""
    nu = la.to_complex(model.nu.matrix(0))
    G = la.to_complex(model.spinor.grading_matrix())
    evals, vecs = np.linalg.eig(nu)
    inv = np.linalg.inv(vecs)
    return np.array([np.trace(G @ vecs @ np.diag(np.exp(-sv * evals)) @ inv) for sv in s])


def heat_trace(model: HomogModel, t: float, m: int, spectral_cutoff: int = 80,
               quad_points: int = 1024) -> tuple[float, float]:
    """Heat-kernel pairing with f = chi_m at time t; returns (value, truncation bound).

    V * int_T p_t(g) Str(nu(g)^{-1}) f(g) dg with p_t the scalar heat kernel of
    -sum X_i^2 on SU(2), normalized by vol(SU(2)) = V * (length of T).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    s = np.arange(quad_points) * (TORUS_PERIOD / quad_points)
    V = complex(model.fundclass.volume).real
    vol_K = V * TORUS_PERIOD
    p = _scalar_heat_kernel(float(t), spectral_cutoff, quad_points) / vol_K
    f = np.exp(-1j * m * s / 2)
    integral = (p * _graded_twist_trace(model, s) * f).sum() * (TORUS_PERIOD / quad_points)
    # first omitted term bounds the tail geometrically for these t
    nxt = spectral_cutoff + 1
    bound = 2 * (nxt + 1) ** 2 * math.exp(-t * casimir_value(nxt))
    return float((V * integral).real), bound


def richardson_zero(ts: Sequence[float], values: Sequence[float]) -> float:
    """Value at t = 0 of the interpolating polynomial (Neville)."""
    t = list(ts)
    p = list(values)
    n = len(t)
    for level in range(1, n):
        p = [(t[i + level] * p[i] - t[i] * p[i + 1]) / (t[i + level] - t[i]) for i in range(n - level)]
    return p[0]


def heat_check(model: HomogModel, m: int, t_grid: Sequence[float] = (0.4, 0.2, 0.1, 0.05),
               spectral_cutoff: int = 80) -> HeatResult:
    cut = max(model.cutoff, 2 * abs(m), max_contributing_spin(m, model.w))
    exact = distributional_index(model, cut).coefficients
    vals, bounds = [], []
    for t in t_grid:
        v, b = heat_trace(model, t, m, spectral_cutoff)
        vals.append(v + 0.0)
        bounds.append(b)
    extrap = richardson_zero(t_grid, vals) + 0.0
    rate = None
    if exact[m] and all(v * vals[0] > 0 for v in vals):
        slope = np.polyfit(np.asarray(t_grid), np.log(np.abs(vals)), 1)[0]
        rate = float(-slope)
    two_j = max_contributing_spin(m, model.w)
    cas = casimir_value(two_j) + 0.0 if m != model.w else None
    return HeatResult(m, tuple(t_grid), tuple(vals), extrap, exact[m], max(bounds), rate, cas)


def heat_suite(w: int = 0, ms: Sequence[int] = range(-4, 5), t_grid: Sequence[float] = (0.4, 0.2, 0.1, 0.05),
               spectral_cutoff: int = 80, tolerance: float = 1e-3) -> CheckResult:
    res = CheckResult(f"heat_trace[w={w}]")
    model = build_model(w, 2 * max(abs(m - w) for m in ms) + 2)
    for m in ms:
        h = heat_check(model, m, t_grid, spectral_cutoff)
        key = f"m={m}"
        res.numeric[f"{key}.extrapolated"] = h.extrapolated
        res.numeric[f"{key}.relative_error"] = h.relative_error
        res.numeric[f"{key}.truncation_bound"] = h.truncation_bound
        for t, v, c in zip(h.t_grid, h.values, h.corrected):
            res.numeric[f"{key}.t={t}"] = v
            res.numeric[f"{key}.t={t}.casimir_corrected"] = c
        if h.decay_rate is not None:
            res.numeric[f"{key}.decay_rate"] = h.decay_rate
        if h.casimir is not None:
            res.numeric[f"{key}.block_casimir"] = h.casimir
        res.values[f"{key}.exact"] = str(h.exact)
        if h.truncation_bound > tolerance:
            res.flagged = True
        if h.relative_error > tolerance:
            res.fail(f"m={m}: extrapolated {h.extrapolated:.9g} vs exact {h.exact} "
                     f"(relative error {h.relative_error:.3g} > {tolerance:g})")
    return res
