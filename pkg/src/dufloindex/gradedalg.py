"""Exterior algebra, Clifford algebra Cl(n), the Chevalley map and supertraces.

Blades are encoded as bitmasks: bit ``i`` set means ``e_{i+1}`` is present.
Clifford convention: ``v v = -|v|^2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .scalar import ONE, ZERO, GaussQ, Scalar


def blade_indices(mask: int) -> tuple[int, ...]:
    """0-based generator indices of a blade, increasing."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def blade_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def grade(mask: int) -> int:
    return bin(mask).count("1")


def _reorder_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation a|b of two increasing blades."""
    swaps = 0
    a >>= 1
    while a:
        swaps += grade(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def _blade_clifford(a: int, b: int) -> int:
    # each shared generator contributes e_i e_i = -1
    sign = _reorder_sign(a, b)
    if grade(a & b) & 1:
        sign = -sign
    return sign


class _BladeAlgebra:
    __slots__ = ("n", "_t")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None):
        self.n = n
        t: dict[int, Scalar] = {}
        top = 1 << n
        for m, v in (terms or {}).items():
            if isinstance(m, tuple):
                m = blade_mask(m)
            if m >= top or m < 0:
                raise ValueError(f"blade {blade_indices(m)} out of range for n={n}")
            s = Scalar.coerce(v)
            if s:
                t[m] = s
        self._t = t

    @classmethod
    def _raw(cls, n: int, t: dict[int, Scalar]):
        x = cls.__new__(cls)
        x.n, x._t = n, t
        return x

    @classmethod
    def scalar(cls, n: int, value: object = 1):
        return cls(n, {0: value})

    @classmethod
    def generator(cls, n: int, i: int, value: object = 1):
        """The basis vector e_{i+1} (0-based ``i``)."""
        return cls(n, {1 << i: value})

    @classmethod
    def blade(cls, n: int, indices: Sequence[int], value: object = 1):
        """Basis blade from 0-based increasing indices."""
        if list(indices) != sorted(set(indices)):
            raise ValueError("blade indices must be strictly increasing")
        return cls(n, {blade_mask(indices): value})

    @property
    def terms(self) -> dict[tuple[int, ...], Scalar]:
        return {blade_indices(m): v for m, v in self._t.items()}

    def mask_items(self):
        return self._t.items()

    def coeff(self, indices: Sequence[int] | int) -> Scalar:
        m = indices if isinstance(indices, int) else blade_mask(indices)
        return self._t.get(m, ZERO)

    def is_zero(self) -> bool:
        return not self._t

    def _check(self, o) -> None:
        if type(o) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(o).__name__}")
        if o.n != self.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={o.n}")

    def __add__(self, o):
        if not isinstance(o, _BladeAlgebra):
            o = type(self).scalar(self.n, o)
        self._check(o)
        out = dict(self._t)
        for m, v in o._t.items():
            w = out[m] + v if m in out else v
            if w:
                out[m] = w
            else:
                out.pop(m, None)
        return type(self)._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.n, {m: -v for m, v in self._t.items()})

    def __sub__(self, o):
        if not isinstance(o, _BladeAlgebra):
            o = type(self).scalar(self.n, o)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def scale(self, s: object):
        s = Scalar.coerce(s)
        if not s:
            return type(self)(self.n)
        return type(self)._raw(self.n, {m: v * s for m, v in self._t.items()})

    def _product(self, o, sign_fn):
        self._check(o)
        out: dict[int, Scalar] = {}
        for a, va in self._t.items():
            for b, vb in o._t.items():
                sgn = sign_fn(a, b)
                if sgn == 0:
                    continue
                m = a ^ b
                w = va * vb
                if sgn < 0:
                    w = -w
                if m in out:
                    w = out[m] + w
                if w:
                    out[m] = w
                else:
                    out.pop(m, None)
        return type(self)._raw(self.n, out)

    def grade_part(self, k: int):
        return type(self)._raw(self.n, {m: v for m, v in self._t.items() if grade(m) == k})

    def degrees(self) -> set[int]:
        return {grade(m) for m in self._t}

    def top_coefficient(self) -> Scalar:
        return self._t.get((1 << self.n) - 1, ZERO)

    def __eq__(self, o: object) -> bool:
        if isinstance(o, _BladeAlgebra):
            return type(o) is type(self) and o.n == self.n and o._t == self._t
        try:
            return self == type(self).scalar(self.n, o)
        except TypeError:
            return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, {self})"

    _sep = "^"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for m in sorted(self._t, key=lambda m: (grade(m), blade_indices(m))):
            name = self._sep.join(f"e{i + 1}" for i in blade_indices(m)) or "1"
            parts.append(f"{self._t[m]}*{name}")
        return " + ".join(parts)


class Multivector(_BladeAlgebra):
    """Element of the exterior algebra of R^n."""

    __slots__ = ()
    _sep = "^"

    def wedge(self, o: Multivector) -> Multivector:
        return self._product(o, lambda a, b: 0 if a & b else _reorder_sign(a, b))

    def __xor__(self, o: Multivector) -> Multivector:
        return self.wedge(o)

    def __mul__(self, o):
        # scalars scale; multivectors wedge (used by generic series substitution)
        if isinstance(o, Multivector):
            return self.wedge(o)
        return self.scale(o)

    def __rmul__(self, o):
        return self.scale(o)


class CliffElt(_BladeAlgebra):
    """Element of Cl(n) on the basis e_{i1}...e_{ik}, i1 < ... < ik."""

    __slots__ = ()
    _sep = " "

    def __mul__(self, o):
        if isinstance(o, CliffElt):
            return self._product(o, _blade_clifford)
        return self.scale(o)

    def __rmul__(self, o):
        return self.scale(o)

    def commutator(self, o: CliffElt) -> CliffElt:
        return self * o - o * self


def clifford_mul(a: CliffElt, b: CliffElt) -> CliffElt:
    return a * b


def chevalley(a: CliffElt) -> Multivector:
    return Multivector._raw(a.n, dict(a._t))


def chevalley_inv(m: Multivector) -> CliffElt:
    return CliffElt._raw(m.n, dict(m._t))


def supertrace_normalization(n: int) -> Scalar:
    return Scalar.of(0, -2) ** (n // 2)


def berezin_supertrace(a: CliffElt, normalization: Scalar | None = None) -> Scalar:
    """Str(a) = (-2i)^{n/2} times the coefficient of e_1...e_n."""
    if a.n % 2:
        raise ValueError("supertrace oracle requires even n")
    norm = supertrace_normalization(a.n) if normalization is None else normalization
    return a.top_coefficient() * norm


def exterior_exp(m: Multivector) -> Multivector:
    """exp of a nilpotent even multivector with no degree-0 part."""
    if m.coeff(0):
        raise ValueError("exterior_exp requires no degree-0 component")
    if any(d % 2 for d in m.degrees()):
        raise ValueError("exterior_exp requires an even multivector")
    out = Multivector.scalar(m.n)
    power = Multivector.scalar(m.n)
    for k in range(1, m.n // 2 + 1):
        power = power.wedge(m)
        if power.is_zero():
            break
        out = out + power.scale(Scalar.of(1) / factorial(k))
    return out


# ---------------------------------------------------------------------------
# Matrix spinor representation (independent oracle)
# ---------------------------------------------------------------------------

_S1 = [[GaussQ(0), GaussQ(1)], [GaussQ(1), GaussQ(0)]]
_S2 = [[GaussQ(0), GaussQ(0, -1)], [GaussQ(0, 1), GaussQ(0)]]
_S3 = [[GaussQ(1), GaussQ(0)], [GaussQ(0), GaussQ(-1)]]
_ID2 = [[GaussQ(1), GaussQ(0)], [GaussQ(0), GaussQ(1)]]


@dataclass(frozen=True)
class SpinorRep:
    """Graded irreducible Cl(n)-module for even n, as explicit matrices."""

    n: int
    gens: tuple[tuple[tuple[Scalar, ...], ...], ...]
    grading: tuple[tuple[Scalar, ...], ...]
    _sparse: dict[int, tuple[tuple[int, int, Scalar], ...]] = field(
        default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.grading)

    def gen(self, i: int) -> la.Matrix:
        return [list(r) for r in self.gens[i]]

    def grading_matrix(self) -> la.Matrix:
        return [list(r) for r in self.grading]

    def blade_matrix(self, mask: int) -> la.Matrix:
        out = la.identity(self.dim)
        for i in blade_indices(mask):
            out = la.matmul(out, self.gen(i))
        return out

    def _blade_entries(self, mask: int) -> tuple[tuple[int, int, Scalar], ...]:
        # blade matrices are monomial; cache their nonzero entries
        if mask not in self._sparse:
            mat = self.blade_matrix(mask)
            self._sparse[mask] = tuple((i, j, x) for i, row in enumerate(mat) for j, x in enumerate(row) if x)
        return self._sparse[mask]

    def represent(self, a: CliffElt) -> la.Matrix:
        if a.n != self.n:
            raise ValueError("dimension mismatch")
        out = la.zeros(self.dim, self.dim)
        for m, v in a.mask_items():
            for i, j, x in self._blade_entries(m):
                out[i][j] = out[i][j] + x * v
        return out

    def supertrace(self, mat: Sequence[Sequence[Scalar]]) -> Scalar:
        return la.trace(la.matmul(self.grading_matrix(), mat))


@lru_cache(maxsize=None)
def spinor_rep(n: int) -> SpinorRep:
    """Jordan-Wigner construction: c(e_{2k+1}), c(e_{2k+2}) = s3^k (x) i*s1 / i*s2 (x) 1."""
    if n not in (2, 4, 6):
        raise ValueError(f"unsupported spinor dimension n={n}")
    half = n // 2
    i_s1 = la.matscale(la.from_gauss(_S1), Scalar.of(0, 1))
    i_s2 = la.matscale(la.from_gauss(_S2), Scalar.of(0, 1))
    s3, id2 = la.from_gauss(_S3), la.from_gauss(_ID2)

    def chain(factors):
        out = [[ONE]]
        for f in factors:
            out = la.kron(out, f)
        return out

    gens = []
    for k in range(half):
        for core in (i_s1, i_s2):
            gens.append(chain([s3] * k + [core] + [id2] * (half - k - 1)))
    vol = la.identity(2**half)
    for g in gens:
        vol = la.matmul(vol, g)
    grading = la.matscale(vol, Scalar.of(0, 1) ** half)
    freeze = lambda m: tuple(tuple(r) for r in m)  # noqa: E731
    return SpinorRep(n, tuple(freeze(g) for g in gens), freeze(grading))
