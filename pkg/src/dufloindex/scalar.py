"""Exact scalars and truncated multivariate power series.

Scalars live in Q(i)[pi, 1/pi]: finite Laurent polynomials in a formal symbol
``pi`` whose coefficients are Gaussian rationals.  Series are truncated by total
degree and carry Scalar coefficients.  Nothing in this module touches floats.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Rational = int | Fraction


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class GaussQ:
    """A Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x: object) -> GaussQ:
        if isinstance(x, GaussQ):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussQ(x)
        if isinstance(x, complex):
            return GaussQ(Fraction(x.real), Fraction(x.imag))
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussQ")

    def __add__(self, o: object) -> GaussQ:
        o = GaussQ.coerce(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o: object) -> GaussQ:
        o = GaussQ.coerce(o)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, o: object) -> GaussQ:
        return GaussQ.coerce(o) - self

    def __mul__(self, o: object) -> GaussQ:
        o = GaussQ.coerce(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> GaussQ:
        return GaussQ(-self.re, -self.im)

    def conj(self) -> GaussQ:
        return GaussQ(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o: object) -> GaussQ:
        o = GaussQ.coerce(o)
        d = o.norm2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conj()
        return GaussQ(num.re / d, num.im / d)

    def __rtruediv__(self, o: object) -> GaussQ:
        return GaussQ.coerce(o) / self

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, o: object) -> bool:
        try:
            o = GaussQ.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self) -> str:
        sign = "+" if self.im >= 0 else "-"
        return f"({_fmt_q(self.re)}{sign}{_fmt_q(abs(self.im))}i)"


class Scalar:
    """Laurent polynomial in ``pi`` with Gaussian-rational coefficients.

    Immutable; zero coefficients are never stored, so ``==`` is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean: dict[int, GaussQ] = {}
        if terms:
            for k, v in terms.items():
                g = GaussQ.coerce(v)
                if g:
                    clean[int(k)] = g
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[int, GaussQ]) -> Scalar:
        s = cls.__new__(cls)
        s._terms = terms
        s._hash = None
        return s

    @staticmethod
    def coerce(x: object) -> Scalar:
        if isinstance(x, Scalar):
            return x
        return Scalar({0: GaussQ.coerce(x)})

    @staticmethod
    def of(re: Rational = 0, im: Rational = 0, pi_power: int = 0) -> Scalar:
        return Scalar({pi_power: GaussQ(re, im)})

    @property
    def terms(self) -> dict[int, GaussQ]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coeff(self, k: int = 0) -> GaussQ:
        return self._terms.get(k, GaussQ())

    def as_gauss(self) -> GaussQ:
        """Return the value as a Gaussian rational; requires no pi dependence."""
        if not self._terms:
            return GaussQ()
        if set(self._terms) != {0}:
            raise ValueError(f"scalar {self} depends on pi")
        return self._terms[0]

    def __add__(self, o: object) -> Scalar:
        o = Scalar.coerce(o)
        out = dict(self._terms)
        for k, v in o._terms.items():
            w = out.get(k)
            w = v if w is None else w + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        return Scalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, o: object) -> Scalar:
        return self + (-Scalar.coerce(o))

    def __rsub__(self, o: object) -> Scalar:
        return Scalar.coerce(o) - self

    def __mul__(self, o: object) -> Scalar:
        o = Scalar.coerce(o)
        out: dict[int, GaussQ] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in o._terms.items():
                k = k1 + k2
                w = v1 * v2
                if k in out:
                    w = out[k] + w
                if w:
                    out[k] = w
                else:
                    out.pop(k, None)
        return Scalar._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, o: object) -> Scalar:
        o = Scalar.coerce(o)
        if o.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if not o.is_monomial():
            raise ValueError("non-monomial divisor")
        ((k0, v0),) = o._terms.items()
        return Scalar._raw({k - k0: v / v0 for k, v in self._terms.items()})

    def __rtruediv__(self, o: object) -> Scalar:
        return Scalar.coerce(o) / self

    def __pow__(self, e: int) -> Scalar:
        if e < 0:
            return Scalar.coerce(1) / (self ** (-e))
        out = Scalar.coerce(1)
        for _ in range(e):
            out = out * self
        return out

    def conj(self) -> Scalar:
        """Complex conjugate, treating pi as real."""
        return Scalar._raw({k: v.conj() for k, v in self._terms.items()})

    def __eq__(self, o: object) -> bool:
        try:
            o = Scalar.coerce(o)
        except TypeError:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __complex__(self) -> complex:
        from math import pi

        return sum((complex(v) * pi**k for k, v in self._terms.items()), 0j)

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{v}·pi^{k}" for k, v in sorted(self._terms.items()))


ZERO = Scalar()
ONE = Scalar.of(1)
I = Scalar.of(0, 1)
PI = Scalar.of(1, pi_power=1)


# ---------------------------------------------------------------------------
# Truncated multivariate power series
# ---------------------------------------------------------------------------

Monomial = tuple[int, ...]


def monomials(dim: int, max_degree: int) -> Iterator[Monomial]:
    """All exponent tuples of total degree <= max_degree."""
    def rec(i: int, left: int) -> Iterator[Monomial]:
        if i == dim:
            yield ()
            return
        for e in range(left + 1):
            for rest in rec(i + 1, left - e):
                yield (e,) + rest
    yield from rec(0, max_degree)


def multi_factorial(beta: Monomial) -> int:
    out = 1
    for b in beta:
        out *= factorial(b)
    return out


class Series:
    """Truncated power series in ``dim`` variables, total degree <= ``order``."""

    __slots__ = ("dim", "order", "_c")

    def __init__(self, dim: int, order: int, coeffs: Mapping[Monomial, object] | None = None):
        self.dim = dim
        self.order = order
        c: dict[Monomial, Scalar] = {}
        for beta, v in (coeffs or {}).items():
            beta = tuple(beta)
            if len(beta) != dim:
                raise ValueError(f"monomial {beta} does not have {dim} exponents")
            if sum(beta) > order:
                continue
            s = Scalar.coerce(v)
            if s:
                c[beta] = s
        self._c = c

    @classmethod
    def _raw(cls, dim: int, order: int, c: dict[Monomial, Scalar]) -> Series:
        s = cls.__new__(cls)
        s.dim, s.order, s._c = dim, order, c
        return s

    @classmethod
    def const(cls, dim: int, order: int, value: object = 1) -> Series:
        return cls(dim, order, {(0,) * dim: value})

    @classmethod
    def var(cls, dim: int, order: int, i: int, scale: object = 1) -> Series:
        beta = [0] * dim
        beta[i] = 1
        return cls(dim, order, {tuple(beta): scale})

    @classmethod
    def linear(cls, dim: int, order: int, coeffs: Sequence[object]) -> Series:
        out = {}
        for i, a in enumerate(coeffs):
            beta = [0] * dim
            beta[i] = 1
            out[tuple(beta)] = a
        return cls(dim, order, out)

    @property
    def coeffs(self) -> dict[Monomial, Scalar]:
        return dict(self._c)

    def items(self) -> Iterable[tuple[Monomial, Scalar]]:
        return self._c.items()

    def coefficient(self, beta: Sequence[int]) -> Scalar:
        return self._c.get(tuple(beta), ZERO)

    def constant_term(self) -> Scalar:
        return self.coefficient((0,) * self.dim)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        return max((sum(b) for b in self._c), default=-1)

    def _check(self, o: Series) -> None:
        if o.dim != self.dim:
            raise ValueError(f"series dimension mismatch: {self.dim} vs {o.dim}")

    def _lift(self, o: object) -> Series:
        if isinstance(o, Series):
            self._check(o)
            return o
        return Series.const(self.dim, self.order, o)

    def truncate(self, order: int) -> Series:
        return Series._raw(self.dim, order, {b: v for b, v in self._c.items() if sum(b) <= order})

    def __add__(self, o: object) -> Series:
        o = self._lift(o)
        order = min(self.order, o.order)
        out = {b: v for b, v in self._c.items() if sum(b) <= order}
        for b, v in o._c.items():
            if sum(b) > order:
                continue
            w = out[b] + v if b in out else v
            if w:
                out[b] = w
            else:
                out.pop(b, None)
        return Series._raw(self.dim, order, out)

    __radd__ = __add__

    def __neg__(self) -> Series:
        return Series._raw(self.dim, self.order, {b: -v for b, v in self._c.items()})

    def __sub__(self, o: object) -> Series:
        return self + (-self._lift(o))

    def __rsub__(self, o: object) -> Series:
        return self._lift(o) - self

    def scale(self, s: object) -> Series:
        s = Scalar.coerce(s)
        if s.is_zero():
            return Series(self.dim, self.order)
        return Series._raw(self.dim, self.order, {b: v * s for b, v in self._c.items()})

    def __mul__(self, o: object) -> Series:
        if not isinstance(o, Series):
            return self.scale(o)
        self._check(o)
        order = min(self.order, o.order)
        out: dict[Monomial, Scalar] = {}
        for b1, v1 in self._c.items():
            d1 = sum(b1)
            if d1 > order:
                continue
            for b2, v2 in o._c.items():
                if d1 + sum(b2) > order:
                    continue
                b = tuple(x + y for x, y in zip(b1, b2))
                w = v1 * v2
                if b in out:
                    w = out[b] + w
                if w:
                    out[b] = w
                else:
                    out.pop(b, None)
        return Series._raw(self.dim, order, out)

    def __rmul__(self, o: object) -> Series:
        return self.scale(o)

    def __pow__(self, e: int) -> Series:
        if e < 0:
            return series_invert(self) ** (-e)
        out = Series.const(self.dim, self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def derivative(self, i: int) -> Series:
        out = {}
        for b, v in self._c.items():
            if b[i]:
                nb = list(b)
                nb[i] -= 1
                out[tuple(nb)] = v * b[i]
        return Series._raw(self.dim, max(self.order - 1, 0), out)

    def derivative_at_zero(self, beta: Sequence[int]) -> Scalar:
        """(d^beta s)(0) = beta! * coefficient of x^beta."""
        beta = tuple(beta)
        if sum(beta) > self.order:
            raise ValueError("order too low for pairing")
        return self.coefficient(beta) * multi_factorial(beta)

    def substitute(self, values: Sequence[object], one: object, mul: Callable | None = None):
        """Evaluate at ``x_i = values[i]`` in any commutative ring with unit ``one``."""
        mul = mul or (lambda a, b: a * b)
        powers: list[list[object]] = []
        maxdeg = [max((b[i] for b in self._c), default=0) for i in range(self.dim)]
        for i, v in enumerate(values):
            ps = [one]
            for _ in range(maxdeg[i]):
                ps.append(mul(ps[-1], v))
            powers.append(ps)
        total = None
        for b, c in self._c.items():
            term = one
            for i, e in enumerate(b):
                if e:
                    term = mul(term, powers[i][e])
            term = term * c
            total = term if total is None else total + term
        return total

    def __eq__(self, o: object) -> bool:
        if isinstance(o, Series):
            return self.dim == o.dim and self._c == o._c
        try:
            return self == Series.const(self.dim, self.order, o)
        except TypeError:
            return NotImplemented

    def equal_to_order(self, o: Series, order: int) -> bool:
        return self.truncate(order)._c == o.truncate(order)._c

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Series(dim={self.dim}, order={self.order}, {self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for b in sorted(self._c):
            mono = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(b) if e
            )
            parts.append(f"[{self._c[b]}]" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def series_invert(s: Series) -> Series:
    """Multiplicative inverse of a series with invertible (monomial) constant term."""
    c0 = s.constant_term()
    if c0.is_zero():
        raise ValueError("series inverse requires a nonzero constant term")
    inv0 = ONE / c0
    u = s.scale(inv0) - 1  # s = c0 (1 + u), u(0) = 0
    term = Series.const(s.dim, s.order)
    out = Series.const(s.dim, s.order)
    neg_u = -u
    for _ in range(s.order):
        term = term * neg_u
        if term.is_zero():
            break
        out = out + term
    return out.scale(inv0)


def binomial_half(k: int) -> Fraction:
    """Coefficient of u^k in (1+u)^(1/2)."""
    out = Fraction(1)
    for i in range(k):
        out *= (Fraction(1, 2) - i) / (i + 1)
    return out


def series_sqrt(s: Series) -> Series:
    if s.constant_term() != ONE:
        raise ValueError("sqrt requires unit constant term")
    u = s - 1
    term = Series.const(s.dim, s.order)
    out = Series.const(s.dim, s.order)
    for k in range(1, s.order + 1):
        term = term * u
        if term.is_zero():
            break
        out = out + term.scale(binomial_half(k))
    return out


# Taylor coefficients at 0 of the named analytic functions used downstream.
TAYLOR: dict[str, Callable[[int], Fraction]] = {
    "exp": lambda k: Fraction(1, factorial(k)),
    "exp_neg": lambda k: Fraction((-1) ** k, factorial(k)),
    # sinh(z/2)/(z/2)
    "sinhc_half": lambda k: Fraction(0) if k % 2 else Fraction(1, 2**k * factorial(k + 1)),
    # sin(z/2)/(z/2)
    "sinc_half": lambda k: Fraction(0) if k % 2 else Fraction((-1) ** (k // 2), 2**k * factorial(k + 1)),
    "geometric": lambda k: Fraction(1),
}


class SeriesMatrix:
    """Rectangular array of series sharing dim and order."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[Series]]):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("empty series matrix")
        width = len(rows[0])
        dims = {e.dim for r in rows for e in r}
        if any(len(r) != width for r in rows) or len(dims) != 1:
            raise ValueError("ragged rows or inconsistent series dimensions")
        order = min(e.order for r in rows for e in r)
        self.rows = [[e if e.order == order else e.truncate(order) for e in r] for r in rows]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def dim(self) -> int:
        return self.rows[0][0].dim

    @property
    def order(self) -> int:
        return self.rows[0][0].order

    def is_square(self) -> bool:
        r, c = self.shape
        return r == c

    def __getitem__(self, ij: tuple[int, int]) -> Series:
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, size: int, dim: int, order: int) -> SeriesMatrix:
        return cls([[Series.const(dim, order, 1 if i == j else 0) for j in range(size)] for i in range(size)])

    @classmethod
    def zeros(cls, rows: int, cols: int, dim: int, order: int) -> SeriesMatrix:
        return cls([[Series(dim, order) for _ in range(cols)] for _ in range(rows)])

    @classmethod
    def from_linear(cls, mats: Sequence[Sequence[Sequence[object]]], order: int) -> SeriesMatrix:
        """sum_i x_i * mats[i] as a matrix of linear series."""
        d = len(mats)
        r, c = len(mats[0]), len(mats[0][0])
        rows = []
        for a in range(r):
            row = []
            for b in range(c):
                row.append(Series.linear(d, order, [mats[i][a][b] for i in range(d)]))
            rows.append(row)
        return cls(rows)

    def __add__(self, o: SeriesMatrix) -> SeriesMatrix:
        if self.shape != o.shape:
            raise ValueError("shape mismatch")
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, o.rows)])

    def __neg__(self) -> SeriesMatrix:
        return SeriesMatrix([[-a for a in r] for r in self.rows])

    def __sub__(self, o: SeriesMatrix) -> SeriesMatrix:
        return self + (-o)

    def scale(self, s: object) -> SeriesMatrix:
        return SeriesMatrix([[a.scale(s) for a in r] for r in self.rows])

    def __matmul__(self, o: SeriesMatrix) -> SeriesMatrix:
        n, k = self.shape
        k2, m = o.shape
        if k != k2:
            raise ValueError("shape mismatch in matrix product")
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = Series(self.dim, min(self.order, o.order))
                for t in range(k):
                    a, b = self.rows[i][t], o.rows[t][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            rows.append(row)
        return SeriesMatrix(rows)

    def trace(self) -> Series:
        if not self.is_square():
            raise ValueError("trace of non-square matrix")
        acc = Series(self.dim, self.order)
        for i in range(self.shape[0]):
            acc = acc + self.rows[i][i]
        return acc

    def constant_part_is_zero(self) -> bool:
        return all(e.constant_term().is_zero() for r in self.rows for e in r)

    def __eq__(self, o: object) -> bool:
        return isinstance(o, SeriesMatrix) and self.rows == o.rows

    __hash__ = None  # type: ignore[assignment]


def series_eval_univariate_function(f: str | Callable[[int], object], A: SeriesMatrix) -> SeriesMatrix:
    """sum_k c_k A^k for the Taylor coefficients c_k of ``f``, truncated.

    ``A`` must vanish at the origin so that A^k has degree >= k.
    """
    if not A.is_square():
        raise ValueError("function of a non-square matrix")
    if not A.constant_part_is_zero():
        raise ValueError("matrix argument must vanish at the origin")
    coeff = TAYLOR[f] if isinstance(f, str) else f
    size = A.shape[0]
    order = A.order
    # Horner: c_0 + A(c_1 + A(c_2 + ...))
    out = SeriesMatrix.identity(size, A.dim, order).scale(coeff(order))
    for k in range(order - 1, -1, -1):
        out = (A @ out) + SeriesMatrix.identity(size, A.dim, order).scale(coeff(k))
    return out


def series_det(A: SeriesMatrix) -> Series:
    """Determinant by memoized Laplace expansion along rows."""
    if not A.is_square():
        raise ValueError("determinant of non-square matrix")
    n = A.shape[0]
    memo: dict[tuple[int, int], Series] = {}

    def minor(row: int, cols: int) -> Series:
        # det of rows row..n-1 restricted to column set `cols`
        if row == n:
            return Series.const(A.dim, A.order)
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = Series(A.dim, A.order)
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = A.rows[row][c]
            if not entry.is_zero():
                sub = minor(row + 1, cols & ~(1 << c))
                if not sub.is_zero():
                    term = entry * sub
                    acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[key] = acc
        return acc

    return minor(0, (1 << n) - 1)


def series_pfaffian(A: SeriesMatrix) -> Series:
    """Pfaffian of an antisymmetric series matrix (expansion along the first row)."""
    if not A.is_square():
        raise ValueError("pfaffian of non-square matrix")
    n = A.shape[0]
    if n % 2:
        return Series(A.dim, A.order)

    def pf(idx: tuple[int, ...]) -> Series:
        if not idx:
            return Series.const(A.dim, A.order)
        first, rest = idx[0], idx[1:]
        acc = Series(A.dim, A.order)
        for pos, j in enumerate(rest):
            sub = pf(rest[:pos] + rest[pos + 1:])
            term = A.rows[first][j] * sub
            acc = acc + term if pos % 2 == 0 else acc - term
        return acc

    return pf(tuple(range(n)))


def random_series(rng, dim: int, order: int, unit: bool = False, density: float = 0.5,
                  max_num: int = 5) -> Series:
    """Random series with small Gaussian-rational coefficients (test helper)."""
    coeffs = {}
    for beta in monomials(dim, order):
        if rng.random() < density:
            re = Fraction(rng.randint(-max_num, max_num), rng.randint(1, 3))
            im = Fraction(rng.randint(-max_num, max_num), rng.randint(1, 3)) if rng.random() < 0.3 else 0
            coeffs[beta] = GaussQ(re, im)
    if unit:
        coeffs[(0,) * dim] = 1
    return Series(dim, order, coeffs)


