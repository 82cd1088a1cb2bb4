"""Lie algebras by structure constants on an orthonormal basis, and their reps."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .scalar import ONE, ZERO, Scalar, SeriesMatrix

Consts = tuple[tuple[tuple[Fraction, ...], ...], ...]


def _freeze3(c) -> Consts:
    return tuple(tuple(tuple(Fraction(x) for x in row) for row in plane) for plane in c)


@dataclass(frozen=True)
class LieAlg:
    """[X_i, X_j] = sum_k c[i][j][k] X_k, basis declared orthonormal."""

    d: int
    c: Consts
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "c", _freeze3(self.c))
        if len(self.c) != self.d or any(len(r) != self.d or any(len(v) != self.d for v in r) for r in self.c):
            raise ValueError("structure constants must be d x d x d")

    def bracket(self, x: Sequence[object], y: Sequence[object]) -> list[Scalar]:
        self._vec(x), self._vec(y)
        out = [ZERO] * self.d
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                w = Scalar.coerce(xi) * yj
                for k, ck in enumerate(self.c[i][j]):
                    if ck:
                        out[k] = out[k] + w * ck
        return out

    def _vec(self, x: Sequence[object]) -> None:
        if len(x) != self.d:
            raise ValueError(f"vector of length {len(x)} for a {self.d}-dimensional algebra")

    def basis_vector(self, i: int) -> list[Scalar]:
        return [ONE if k == i else ZERO for k in range(self.d)]

    def ad_basis(self, i: int) -> la.Matrix:
        """Matrix of ad(X_i): column j holds the coordinates of [X_i, X_j]."""
        return [[Scalar.coerce(self.c[i][j][k]) for j in range(self.d)] for k in range(self.d)]

    def ad(self, x: Sequence[object]) -> la.Matrix:
        self._vec(x)
        out = la.zeros(self.d, self.d)
        for i, xi in enumerate(x):
            if xi:
                out = la.matadd(out, la.matscale(self.ad_basis(i), xi))
        return out

    def ad_series(self, order: int) -> SeriesMatrix:
        """ad(sum_i x_i X_i) as a matrix of linear series."""
        return SeriesMatrix.from_linear([self.ad_basis(i) for i in range(self.d)], order)

    def is_abelian(self) -> bool:
        return all(not x for plane in self.c for row in plane for x in row)

    def change_basis(self, q: Sequence[Sequence[object]], name: str | None = None) -> LieAlg:
        """Structure constants in the basis X'_i = sum_j q[j][i] X_j (q invertible)."""
        qs = la.as_scalar_matrix(q)
        qinv = la.inverse(qs)
        cols = [[qs[j][i] for j in range(self.d)] for i in range(self.d)]
        c = []
        for i in range(self.d):
            plane = []
            for j in range(self.d):
                br = self.bracket(cols[i], cols[j])
                coords = [sum((qinv[k][t] * br[t] for t in range(self.d)), ZERO) for k in range(self.d)]
                plane.append([_rational(x) for x in coords])
            c.append(plane)
        return LieAlg(self.d, c, name if name is not None else self.name)


def _rational(s: Scalar) -> Fraction:
    g = s.as_gauss()
    if g.im:
        raise ValueError("structure constants must be real")
    return g.re


def _zeros3(d: int) -> list[list[list[Fraction]]]:
    return [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]


def abelian(d: int) -> LieAlg:
    return LieAlg(d, _zeros3(d), f"abelian({d})")


def su2() -> LieAlg:
    c = _zeros3(3)
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i][j][k] = Fraction(1)
        c[j][i][k] = Fraction(-1)
    return LieAlg(3, c, "su2")


def son_basis(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(a + 1, n)]


def son_matrix(n: int, a: int, b: int) -> la.Matrix:
    """E_ab = e_a e_b^T - e_b e_a^T; orthonormal for -(1/2) tr(AB)."""
    m = la.zeros(n, n)
    m[a][b] = ONE
    m[b][a] = -ONE
    return m


def lie_from_matrices(mats: Sequence[la.Matrix], name: str = "") -> LieAlg:
    """Structure constants of the span of linearly independent matrices closed under brackets."""
    d = len(mats)
    size = len(mats[0])
    flat = [[m[r][c] for m in mats] for r in range(size) for c in range(size)]
    c = _zeros3(d)
    for i in range(d):
        for j in range(d):
            br = la.commutator(mats[i], mats[j])
            target = [[br[r][cc]] for r in range(size) for cc in range(size)]
            aug = [row + t for row, t in zip(flat, target)]
            sol = _solve_consistent(aug, d)
            c[i][j] = [_rational(x) for x in sol]
    return LieAlg(d, c, name)


def _solve_consistent(aug: list[list[Scalar]], nvars: int) -> list[Scalar]:
    g = la.to_gauss(aug)
    m, pivots = la._rref(g)
    if nvars in pivots:
        raise ValueError("matrices are not closed under the bracket")
    sol = [ZERO] * nvars
    for row, pc in enumerate(pivots):
        sol[pc] = Scalar({0: m[row][nvars]})
    return sol


def son(n: int) -> LieAlg:
    return lie_from_matrices([son_matrix(n, a, b) for a, b in son_basis(n)], f"so{n}")


def so3() -> LieAlg:
    return son(3)


def builtin(name: str, *args: int) -> LieAlg:
    if name == "abelian":
        return abelian(*(args or (1,)))
    if name == "su2":
        return su2()
    if name == "so3":
        return so3()
    if name == "son":
        return son(*args)
    raise ValueError(f"unknown Lie algebra {name!r}")


def validate(g: LieAlg) -> list[str]:
    """Antisymmetry, Jacobi and ad-invariance of the declared inner product."""
    d, c = g.d, g.c
    bad = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                if c[i][j][k] != -c[j][i][k]:
                    bad.append(f"antisymmetry: c[{i}][{j}][{k}]={c[i][j][k]} vs c[{j}][{i}][{k}]={c[j][i][k]}")
                if c[i][j][k] != -c[i][k][j]:
                    bad.append(f"invariance: c[{i}][{j}][{k}]={c[i][j][k]} vs c[{i}][{k}][{j}]={c[i][k][j]}")
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for m in range(d):
                    s = sum(
                        c[j][k][l] * c[i][l][m] + c[k][i][l] * c[j][l][m] + c[i][j][l] * c[k][l][m]
                        for l in range(d)
                    )
                    if s:
                        bad.append(f"jacobi: (X{i},X{j},X{k}) component {m} = {s}")
    return bad


@dataclass(frozen=True)
class Rep:
    """Matrices R(X_i) on a dim_V space."""

    algebra: LieAlg
    dim_V: int
    matrices: tuple[tuple[tuple[Scalar, ...], ...], ...] = field(repr=False)
    name: str = ""

    @staticmethod
    def make(algebra: LieAlg, mats: Sequence[Sequence[Sequence[object]]], name: str = "") -> Rep:
        if len(mats) != algebra.d:
            raise ValueError("need one matrix per basis element")
        dim = len(mats[0])
        frozen = tuple(tuple(tuple(Scalar.coerce(x) for x in r) for r in m) for m in mats)
        if any(len(m) != dim or any(len(r) != dim for r in m) for m in frozen):
            raise ValueError("representation matrices must be square of equal size")
        return Rep(algebra, dim, frozen, name)

    def matrix(self, i: int) -> la.Matrix:
        return [list(r) for r in self.matrices[i]]

    def __call__(self, x: Sequence[object]) -> la.Matrix:
        self.algebra._vec(x)
        out = la.zeros(self.dim_V, self.dim_V)
        for i, xi in enumerate(x):
            if xi:
                out = la.matadd(out, la.matscale(self.matrix(i), xi))
        return out

    def series(self, order: int) -> SeriesMatrix:
        return SeriesMatrix.from_linear([self.matrix(i) for i in range(self.algebra.d)], order)

    def casimir(self) -> la.Matrix:
        """sum_i R(X_i)^2."""
        out = la.zeros(self.dim_V, self.dim_V)
        for i in range(self.algebra.d):
            m = self.matrix(i)
            out = la.matadd(out, la.matmul(m, m))
        return out

    def is_antisymmetric(self) -> bool:
        return all(la.mat_equal(la.transpose(self.matrix(i)), la.matscale(self.matrix(i), -1))
                   for i in range(self.algebra.d))


def validate_rep(r: Rep) -> list[str]:
    g = r.algebra
    bad = []
    for i in range(g.d):
        for j in range(g.d):
            lhs = la.commutator(r.matrix(i), r.matrix(j))
            rhs = r(list(g.c[i][j]))
            if not la.mat_equal(lhs, rhs):
                bad.append(f"homomorphism: [R(X{i}), R(X{j})] != R([X{i}, X{j}])")
    return bad


def adjoint_rep(g: LieAlg) -> Rep:
    return Rep.make(g, [g.ad_basis(i) for i in range(g.d)], f"ad({g.name})")


def su2_irrep(two_j: int) -> Rep:
    """Spin-j irrep of su2 with rational entries.

    Basis v_mu (mu = j, j-1, ..., -j) scaled so that J+ v_mu = v_{mu+1};
    then J- v_mu = (j+mu)(j-mu+1) v_{mu-1}.  With X_k = -i J_k one gets
    [X_1, X_2] = X_3; the basis is not unitary but every entry is exact.
    """
    if two_j < 0:
        raise ValueError("spin must be non-negative")
    j = Fraction(two_j, 2)
    mus = [j - k for k in range(two_j + 1)]
    n = two_j + 1
    jp, jm, j3 = la.zeros(n, n), la.zeros(n, n), la.zeros(n, n)
    for a, mu in enumerate(mus):
        j3[a][a] = Scalar.coerce(mu)
        if a > 0:
            jp[a - 1][a] = ONE
        if a + 1 < n:
            jm[a + 1][a] = Scalar.coerce((j + mu) * (j - mu + 1))
    minus_i = Scalar.of(0, -1)
    half = Fraction(1, 2)
    j1 = la.matscale(la.matadd(jp, jm), half)
    j2 = la.matscale(la.matsub(jp, jm), Scalar.of(0, -half))  # (J+ - J-)/(2i)
    mats = [la.matscale(m, minus_i) for m in (j1, j2, j3)]
    return Rep.make(su2(), mats, f"spin{two_j}/2")


def su2_irrep_weights(two_j: int) -> list[Fraction]:
    """J_3 = i X_3 eigenvalues along the basis of :func:`su2_irrep`."""
    j = Fraction(two_j, 2)
    return [j - k for k in range(two_j + 1)]


def orthonormalize(d: int, c, gram: Sequence[Sequence[object]], name: str = "") -> LieAlg:
    """Re-present (c, gram) on an orthonormal basis obtained by exact Gram-Schmidt.

    Rejects non-invariant inner products and norms that are not rational squares.
    """
    g0 = LieAlg(d, c, name)
    G = [[Fraction(x) for x in r] for r in gram]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                # <[X_i,X_j],X_k> + <X_j,[X_i,X_k]> = 0
                s = sum(g0.c[i][j][l] * G[l][k] + G[j][l] * g0.c[i][k][l] for l in range(d))
                if s:
                    raise ValueError("inner product is not ad-invariant")
    basis: list[list[Fraction]] = []
    ip = lambda u, v: sum(u[a] * G[a][b] * v[b] for a in range(d) for b in range(d))  # noqa: E731
    for i in range(d):
        v = [Fraction(1 if k == i else 0) for k in range(d)]
        for u in basis:
            p = ip(u, v)
            v = [vk - p * uk for vk, uk in zip(v, u)]
        nn = ip(v, v)
        if nn <= 0:
            raise ValueError("inner product is not positive definite")
        root = _rational_sqrt(nn)
        if root is None:
            raise ValueError(f"cannot orthonormalize exactly: norm^2 = {nn} is not a rational square")
        basis.append([x / root for x in v])
    q = [[basis[i][j] for i in range(d)] for j in range(d)]
    return g0.change_basis(q, name)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def parse_lie_text(text: str) -> LieAlg:
    """Parse ``dim N`` plus lines ``i j k value`` meaning c[i][j][k] = value (1-based).

    Antisymmetric partners are filled in; ``name NAME`` and ``#`` comments are allowed.
    """
    d = None
    name = ""
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "dim":
            d = int(parts[1])
        elif parts[0] == "name":
            name = parts[1]
        elif len(parts) == 4:
            i, j, k = (int(p) - 1 for p in parts[:3])
            entries.append((i, j, k, Fraction(parts[3])))
        else:
            raise ValueError(f"cannot parse line: {raw!r}")
    if d is None:
        raise ValueError("missing 'dim' line")
    c = _zeros3(d)
    for i, j, k, v in entries:
        if not all(0 <= x < d for x in (i, j, k)):
            raise ValueError(f"index out of range in entry {(i + 1, j + 1, k + 1)}")
        c[i][j][k] = v
        c[j][i][k] = -v
    return LieAlg(d, c, name)
