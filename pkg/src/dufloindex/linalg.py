"""Small exact matrix toolkit over Scalar / GaussQ entries.

Matrices are plain lists of lists.  Products and sums work for any ring
elements; rank, kernels and inverses need a field and go through GaussQ.
"""
from __future__ import annotations

from typing import Sequence

from .scalar import ONE, ZERO, GaussQ, Scalar

Matrix = list[list[Scalar]]


def zeros(r: int, c: int) -> Matrix:
    return [[ZERO] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def as_scalar_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Scalar.coerce(x) for x in r] for r in rows]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    n, k, m = len(a), len(b), len(b[0])
    if len(a[0]) != k:
        raise ValueError("shape mismatch in matrix product")
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = ZERO
            for t in range(k):
                x = ai[t]
                if x:
                    y = b[t][j]
                    if y:
                        acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def matadd(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def matsub(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def matscale(a: Sequence[Sequence], s: object) -> list[list]:
    s = Scalar.coerce(s)
    return [[x * s for x in r] for r in a]


def commutator(a, b):
    return matsub(matmul(a, b), matmul(b, a))


def anticommutator(a, b):
    return matadd(matmul(a, b), matmul(b, a))


def kron(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    ra, ca, rb, cb = len(a), len(a[0]), len(b), len(b[0])
    out = [[ZERO] * (ca * cb) for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            x = a[i][j]
            if not x:
                continue
            for k in range(rb):
                for l in range(cb):
                    y = b[k][l]
                    if y:
                        out[i * rb + k][j * cb + l] = x * y
    return out


def trace(a: Sequence[Sequence]):
    acc = ZERO
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*a)]


def is_zero_matrix(a: Sequence[Sequence]) -> bool:
    return all(not x for r in a for x in r)


def mat_equal(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    return len(a) == len(b) and all(
        len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b)
    )


def to_gauss(a: Sequence[Sequence]) -> list[list[GaussQ]]:
    return [[x.as_gauss() if isinstance(x, Scalar) else GaussQ.coerce(x) for x in r] for r in a]


def from_gauss(a: Sequence[Sequence[GaussQ]]) -> Matrix:
    return [[Scalar({0: x}) for x in r] for r in a]


def to_complex(a: Sequence[Sequence]):
    import numpy as np

    return np.array([[complex(x) for x in r] for r in a], dtype=complex)


def _rref(a: list[list[GaussQ]]) -> tuple[list[list[GaussQ]], list[int]]:
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = GaussQ(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(_rref(to_gauss(a))[1])


def nullspace(a: Sequence[Sequence]) -> list[list[GaussQ]]:
    """Basis of {v : a v = 0} as a list of column vectors (exact)."""
    g = to_gauss(a)
    cols = len(g[0])
    m, pivots = _rref(g)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [GaussQ() for _ in range(cols)]
        v[f] = GaussQ(1)
        for row, pc in enumerate(pivots):
            v[pc] = -m[row][f]
        basis.append(v)
    return basis


def column_space(a: Sequence[Sequence]) -> list[list[GaussQ]]:
    g = to_gauss(a)
    _, pivots = _rref(g)
    return [[g[i][c] for i in range(len(g))] for c in pivots]


def inverse(a: Sequence[Sequence]) -> Matrix:
    g = to_gauss(a)
    n = len(g)
    aug = [r + [GaussQ(1) if i == j else GaussQ() for j in range(n)] for i, r in enumerate(g)]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return from_gauss([r[n:] for r in m])


def is_scalar_multiple_of_identity(a: Sequence[Sequence]) -> Scalar | None:
    n = len(a)
    c = a[0][0]
    for i in range(n):
        for j in range(n):
            if (a[i][j] != c) if i == j else bool(a[i][j]):
                return None
    return c
