"""Spin data of an isotropy action, evaluation of invariant series at g-valued
forms, characteristic series and Chern-Weil pairing.

Conventions: gamma(X) = -1/2 sum_{i<j} <e_i, alpha(X) e_j> e_i e_j, so that
[gamma(X), c(v)] = c(alpha(X) v) with v v = -|v|^2.  lambda = sigma(gamma) and
Lambda = sum_i X_i (x) lambda(X_i) on an orthonormal basis of g.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .gradedalg import CliffElt, Multivector, chevalley
from .liealg import LieAlg, Rep
from .report import CheckResult
from .scalar import Scalar, Series, SeriesMatrix, series_det, series_eval_univariate_function
from .scalar import series_invert, series_pfaffian, series_sqrt


@dataclass(frozen=True)
class MixedElt:
    """sum_i X_i (x) m_i with each m_i even of degree >= 2."""

    algebra: LieAlg
    n: int
    components: tuple[Multivector, ...]

    def __post_init__(self):
        if len(self.components) != self.algebra.d:
            raise ValueError("one component per basis element of g is required")
        for m in self.components:
            if m.n != self.n:
                raise ValueError("component lives in the wrong exterior algebra")
            if any(k == 0 or k % 2 for k in m.degrees()):
                raise ValueError("components must be even of positive degree")

    def scale(self, s: object) -> MixedElt:
        return MixedElt(self.algebra, self.n, tuple(m.scale(s) for m in self.components))

    def __add__(self, o: MixedElt) -> MixedElt:
        if o.algebra.d != self.algebra.d or o.n != self.n:
            raise ValueError("incompatible mixed elements")
        return MixedElt(self.algebra, self.n, tuple(a + b for a, b in zip(self.components, o.components)))

    def __neg__(self) -> MixedElt:
        return self.scale(-1)

    def __eq__(self, o: object) -> bool:
        return isinstance(o, MixedElt) and o.n == self.n and list(o.components) == list(self.components)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return " + ".join(f"X{i + 1}(x)[{m}]" for i, m in enumerate(self.components) if not m.is_zero()) or "0"


@dataclass(frozen=True)
class SpinData:
    algebra: LieAlg
    n: int
    alpha: Rep
    gamma: tuple[CliffElt, ...]
    lam: tuple[Multivector, ...]

    @property
    def Lambda(self) -> MixedElt:
        return MixedElt(self.algebra, self.n, self.lam)


def gamma_of(alpha_x: la.Matrix) -> CliffElt:
    n = len(alpha_x)
    out = CliffElt(n)
    for i in range(n):
        for j in range(i + 1, n):
            a = alpha_x[i][j]
            if a:
                out = out + CliffElt.blade(n, (i, j), a * Fraction(-1, 2))
    return out


def build_spindata(alpha: Rep) -> SpinData:
    if not alpha.is_antisymmetric():
        raise ValueError("alpha must land in so(n)")
    gam = tuple(gamma_of(alpha.matrix(i)) for i in range(alpha.algebra.d))
    return SpinData(alpha.algebra, alpha.dim_V, alpha, gam, tuple(chevalley(x) for x in gam))


def gamma_homomorphism(sd: SpinData) -> CheckResult:
    res = CheckResult("gamma_homomorphism")
    g = sd.algebra
    for i in range(g.d):
        for j in range(i + 1, g.d):
            lhs = sd.gamma[i].commutator(sd.gamma[j])
            rhs = CliffElt(sd.n)
            for k, c in enumerate(g.c[i][j]):
                if c:
                    rhs = rhs + sd.gamma[k].scale(c)
            if lhs != rhs:
                res.fail(f"[gamma(X{i + 1}), gamma(X{j + 1})] = {lhs} but gamma([X{i + 1},X{j + 1}]) = {rhs}")
    return res


def gamma_commutation(sd: SpinData) -> CheckResult:
    """[gamma(X), c(v)] = c(alpha(X) v) on basis elements."""
    res = CheckResult("gamma_commutation")
    for i in range(sd.algebra.d):
        a = sd.alpha.matrix(i)
        for j in range(sd.n):
            lhs = sd.gamma[i].commutator(CliffElt.generator(sd.n, j))
            rhs = CliffElt(sd.n, {1 << k: a[k][j] for k in range(sd.n)})
            if lhs != rhs:
                res.fail(f"[gamma(X{i + 1}), e{j + 1}] = {lhs}, expected {rhs}")
    return res


# ---------------------------------------------------------------------------
# g-spin condition on a Clifford module
# ---------------------------------------------------------------------------


@dataclass
class GSpinReport:
    result: CheckResult
    tau: list[la.Matrix] | None = None


def check_gspin(nu: Rep, clifford_action: Sequence[la.Matrix], alpha: Rep) -> GSpinReport:
    """[nu(X_i), c(e_j)] = c(alpha(X_i) e_j); then tau = nu - gamma_E commutes with c."""
    res = CheckResult("gspin")
    n = len(clifford_action)
    dim = nu.dim_V
    if alpha.dim_V != n or any(len(c) != dim for c in clifford_action) or nu.algebra.d != alpha.algebra.d:
        raise ValueError("inconsistent dimensions for the g-spin check")
    for i in range(nu.algebra.d):
        a = alpha.matrix(i)
        nui = nu.matrix(i)
        for j in range(n):
            lhs = la.commutator(nui, clifford_action[j])
            rhs = la.zeros(dim, dim)
            for k in range(n):
                if a[k][j]:
                    rhs = la.matadd(rhs, la.matscale(clifford_action[k], a[k][j]))
            if not la.mat_equal(lhs, rhs):
                res.fail(f"[nu(X{i + 1}), c(e{j + 1})] != c(alpha(X{i + 1}) e{j + 1})")
    if not res.passed:
        return GSpinReport(res)
    taus = []
    for i in range(nu.algebra.d):
        a = alpha.matrix(i)
        gam = la.zeros(dim, dim)
        for p in range(n):
            for q in range(p + 1, n):
                if a[p][q]:
                    term = la.matmul(clifford_action[p], clifford_action[q])
                    gam = la.matadd(gam, la.matscale(term, a[p][q] * Fraction(-1, 2)))
        tau = la.matsub(nu.matrix(i), gam)
        for j in range(n):
            if not la.is_zero_matrix(la.commutator(tau, clifford_action[j])):
                res.fail(f"tau(X{i + 1}) does not commute with c(e{j + 1})")
        taus.append(tau)
    return GSpinReport(res, taus)


def twist_part(tau: la.Matrix, spinor_dim: int) -> la.Matrix:
    """tau_W with tau = 1_S (x) tau_W on E = S (x) W (S the first tensor factor)."""
    dim = len(tau)
    if dim % spinor_dim:
        raise ValueError("module dimension is not a multiple of the spinor dimension")
    w = dim // spinor_dim
    block = [row[:w] for row in tau[:w]]
    if not la.mat_equal(tau, la.kron(la.identity(spinor_dim), block)):
        raise ValueError("tau does not factor as 1 (x) tau_W")
    return block


# ---------------------------------------------------------------------------
# Invariant series and evaluation at g (x) even forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantSeries:
    series: Series
    algebra: LieAlg
    invariant: bool

    @staticmethod
    def make(series: Series, algebra: LieAlg) -> InvariantSeries:
        if series.dim != algebra.d:
            raise ValueError("series dimension does not match the Lie algebra")
        return InvariantSeries(series, algebra, not invariance_defects(series, algebra))


def invariance_defects(s: Series, g: LieAlg) -> list[str]:
    """Components of sum_{j,k} c_ij^k x_j ds/dx_k that are nonzero below the truncation order."""
    out = []
    derivs = [s.derivative(k) for k in range(g.d)]
    for i in range(g.d):
        acc = Series(g.d, s.order)
        for j in range(g.d):
            for k in range(g.d):
                c = g.c[i][j][k]
                if c:
                    acc = acc + (Series.var(g.d, s.order, j) * derivs[k]).scale(c)
        if not acc.is_zero():
            out.append(f"X{i + 1}: {acc}")
    return out


def eval_at_mixed(phi: Series | InvariantSeries, eta: MixedElt) -> Multivector:
    if isinstance(phi, InvariantSeries):
        phi = phi.series
    if phi.dim != eta.algebra.d:
        raise ValueError("series dimension does not match the Lie algebra")
    if phi.order < eta.n // 2:
        raise ValueError("order too low for evaluation")
    val = phi.substitute(list(eta.components), Multivector.scalar(eta.n), lambda a, b: a.wedge(b))
    return val if val is not None else Multivector(eta.n)


def _analytic_sqrt_det(A: SeriesMatrix) -> Series:
    return series_sqrt(series_det(series_eval_univariate_function("sinhc_half", A)))


def j_g(g: LieAlg, order: int) -> InvariantSeries:
    return InvariantSeries.make(_analytic_sqrt_det(g.ad_series(order)), g)


def j_M(alpha: Rep, order: int) -> InvariantSeries:
    return InvariantSeries.make(_analytic_sqrt_det(alpha.series(order)), alpha.algebra)


def chern(tau: Rep, order: int) -> InvariantSeries:
    """tr exp(-tau(X))."""
    return InvariantSeries.make(series_eval_univariate_function("exp_neg", tau.series(order)).trace(), tau.algebra)


def j_series(kind: str, obj: LieAlg | Rep, order: int) -> InvariantSeries:
    if kind == "j_g":
        return j_g(obj, order)  # type: ignore[arg-type]
    if kind == "j_M":
        return j_M(obj, order)  # type: ignore[arg-type]
    if kind == "chern":
        return chern(obj, order)  # type: ignore[arg-type]
    raise ValueError(f"unknown characteristic series {kind!r}")


def inverse(s: InvariantSeries) -> InvariantSeries:
    return InvariantSeries.make(series_invert(s.series), s.algebra)


def euler_series(alpha: Rep, order: int) -> InvariantSeries:
    """i^{n/2} Pf(alpha(X)); with curvature/2*pi*i inserted it integrates to chi(M)."""
    n = alpha.dim_V
    if n % 2:
        raise ValueError("Euler series needs even n")
    pf = series_pfaffian(alpha.series(order))
    return InvariantSeries.make(pf.scale(Scalar.of(0, 1) ** (n // 2)), alpha.algebra)


@dataclass(frozen=True)
class FundClass:
    """Integration over an oriented homogeneous M: volume times the e_1^...^e_n coefficient."""

    n: int
    volume: Scalar
    orientation: int = 1


TWO_PI_I_INV = Scalar.of(0, Fraction(-1, 2), -1)  # 1/(2 pi i)


def cw_pair(phi: Series | InvariantSeries, curvature: MixedElt, model: FundClass) -> Scalar:
    if model.n != curvature.n:
        raise ValueError("dimension mismatch between curvature and fundamental class")
    form = eval_at_mixed(phi, curvature.scale(TWO_PI_I_INV))
    return form.top_coefficient() * model.volume * model.orientation


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def cayley_orthogonal(d: int, rng: random.Random, max_num: int = 4) -> list[list[Fraction]]:
    """Exact rational orthogonal matrix (I - A)(I + A)^{-1} for random antisymmetric A."""
    a = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            v = Fraction(rng.randint(-max_num, max_num), rng.randint(1, 3))
            a[i][j], a[j][i] = v, -v
    eye = la.identity(d)
    A = la.as_scalar_matrix(a)
    q = la.matmul(la.matsub(eye, A), la.inverse(la.matadd(eye, A)))
    return [[x.as_gauss().re for x in r] for r in q]


def transform_alpha(alpha: Rep, g_new: LieAlg, q: Sequence[Sequence[object]]) -> Rep:
    """alpha on the basis X'_i = sum_j q[j][i] X_j."""
    d = alpha.algebra.d
    mats = [alpha([q[j][i] for j in range(d)]) for i in range(d)]
    return Rep.make(g_new, mats, alpha.name)


def lambda_square_sum(sd: SpinData) -> Multivector:
    out = Multivector(sd.n)
    for m in sd.lam:
        out = out + m.wedge(m)
    return out


def check_identities(sd: SpinData, order: int = 8, seed: int = 0) -> CheckResult:
    """(a) sum lambda^lambda = 0, (b) j_g(-2 Lambda) = 1, (c) Lambda basis independence."""
    res = CheckResult(f"identities[{sd.algebra.name or 'g'}->so({sd.n})]")
    sq = lambda_square_sum(sd)
    res.values["sum_lambda_wedge_lambda"] = str(sq)
    if not sq.is_zero():
        res.fail(f"sum lambda(X_i)^lambda(X_i) = {sq}")
    jg = j_g(sd.algebra, max(order, sd.n // 2))
    val = eval_at_mixed(jg, sd.Lambda.scale(-2))
    res.values["j_g(-2Lambda)"] = str(val)
    if val != Multivector.scalar(sd.n):
        res.fail(f"j_g(-2Lambda) = {val}")
    rng = random.Random(seed)
    d = sd.algebra.d
    q = cayley_orthogonal(d, rng)
    g2 = sd.algebra.change_basis(q)
    sd2 = build_spindata(transform_alpha(sd.alpha, g2, q))
    # express the new Lambda on the old basis: component j = sum_i q[j][i] lambda'(X'_i)
    back = []
    for j in range(d):
        acc = Multivector(sd.n)
        for i in range(d):
            if q[j][i]:
                acc = acc + sd2.lam[i].scale(q[j][i])
        back.append(acc)
    if back != list(sd.lam):
        res.fail("Lambda changed under an orthogonal change of basis")
    return res


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


def rotation_generator(n: int, a: int, b: int, rate: object = 1) -> la.Matrix:
    """Matrix sending e_a -> rate*e_b and e_b -> -rate*e_a."""
    m = la.zeros(n, n)
    r = Scalar.coerce(rate)
    m[b][a] = r
    m[a][b] = -r
    return m


def fixture(name: str) -> SpinData:
    from .liealg import abelian, son, son_basis, son_matrix, su2

    if name == "abelian_rotation":
        return build_spindata(Rep.make(abelian(1), [rotation_generator(2, 0, 1)], "rot"))
    if name == "su2_adjoint":
        g = su2()
        return build_spindata(Rep.make(g, [g.ad_basis(i) for i in range(3)], "ad"))
    if name == "so4_vector":
        g = son(4)
        return build_spindata(Rep.make(g, [son_matrix(4, a, b) for a, b in son_basis(4)], "vector"))
    if name == "zero":
        return build_spindata(Rep.make(su2(), [la.zeros(2, 2)] * 3, "zero"))
    raise ValueError(f"unknown fixture {name!r}")


FIXTURES = ("abelian_rotation", "su2_adjoint", "so4_vector")


def corrupted_noninvariant() -> SpinData:
    """so(4) presented on a basis that is not orthonormal but is declared to be."""
    from .liealg import son, son_basis, son_matrix

    g = son(4)
    d = g.d
    q = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    q[5][0] = Fraction(1)  # X'_1 = E12 + E34
    g2 = g.change_basis(q, "so4-skewed")
    alpha = Rep.make(g, [son_matrix(4, a, b) for a, b in son_basis(4)])
    return build_spindata(transform_alpha(alpha, g2, q))


def corrupted_nonhomomorphic() -> SpinData:
    """alpha(X_1) = rotation in two planes, alpha(X_2) = alpha(X_3) = 0: not a Lie map on su2."""
    from .liealg import su2

    a1 = la.matadd(rotation_generator(4, 0, 1), rotation_generator(4, 2, 3))
    z = la.zeros(4, 4)
    return build_spindata(Rep.make(su2(), [a1, z, z], "broken"))


def self_dual_su2() -> SpinData:
    """su2 acting on R^4 through the self-dual factor of so(4)."""
    from .liealg import su2

    half = Fraction(1, 2)
    mats = [
        la.matscale(la.matadd(rotation_generator(4, 0, 1), rotation_generator(4, 2, 3)), half),
        la.matscale(la.matsub(rotation_generator(4, 0, 2), rotation_generator(4, 1, 3)), half),
        la.matscale(la.matadd(rotation_generator(4, 0, 3), rotation_generator(4, 1, 2)), half),
    ]
    return build_spindata(Rep.make(su2(), mats, "self-dual"))

