"""Numbered acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end.

Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations

import pytest

from dufloindex import linalg as la
from dufloindex.duflo import Dist0, duflo, duflo_inv, harish_chandra_check, pair0
from dufloindex.gaussmoment import check_lemma
from dufloindex.gradedalg import (
    CliffElt, Multivector, berezin_supertrace, chevalley, chevalley_inv, clifford_mul, spinor_rep,
)
from dufloindex.indexlab import build_model, distributional_index, heat_suite, standard_phis, theorem_check
from dufloindex.liealg import su2
from dufloindex.scalar import GaussQ, Scalar, random_series
from dufloindex.weil import (
    check_identities, corrupted_noninvariant, corrupted_nonhomomorphic, fixture, gamma_homomorphism,
)


def random_element(cls, n, rng):
    terms = {m: GaussQ(Fraction(rng.randint(-6, 6), rng.randint(1, 3)), rng.randint(-3, 3))
             for m in range(1 << n) if rng.random() < 0.7}
    return cls(n, terms)


class Timer:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False

    def check(self):
        assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s, budget {self.limit} s"


@pytest.mark.acceptance(1, "Clifford product and supertrace agree with spinor matrices")
def test_criterion_1_clifford_spinor_oracle():
    rng = random.Random(1)
    with Timer(5) as t:
        for n in (2, 4):
            S = spinor_rep(n)
            for _ in range(200):
                a, b = random_element(CliffElt, n, rng), random_element(CliffElt, n, rng)
                ab = clifford_mul(a, b)
                assert la.mat_equal(S.represent(ab), la.matmul(S.represent(a), S.represent(b)))
                assert berezin_supertrace(ab) == S.supertrace(S.represent(ab))
    t.check()


@pytest.mark.acceptance(2, "Chevalley map round trip and image of quadratic elements")
def test_criterion_2_chevalley():
    rng = random.Random(2)
    with Timer(1) as t:
        for n in (2, 3, 4, 5):
            for _ in range(25):
                m = random_element(Multivector, n, rng)
                assert chevalley(chevalley_inv(m)) == m
            images = [chevalley(CliffElt.blade(n, (i, j))) for i, j in combinations(range(n), 2)]
            assert all(im.degrees() == {2} for im in images)
            rows = [[im.coeff(p) for p in combinations(range(n), 2)] for im in images]
            assert la.rank(rows) == n * (n - 1) // 2
    t.check()


@pytest.mark.acceptance(3, "Weil identities on the rotation and adjoint fixtures to order 8")
def test_criterion_3_weil_identities():
    with Timer(10) as t:
        for name in ("abelian_rotation", "su2_adjoint"):
            r = check_identities(fixture(name), order=8)
            assert r.passed, r.violations
            assert r.values["j_g(-2Lambda)"] == str(Multivector.scalar(fixture(name).n))
    t.check()


@pytest.mark.acceptance(4, "asymptotic expansion: degree containment and top-degree identity")
def test_criterion_4_top_degree():
    rng = random.Random(4)
    sd = fixture("su2_adjoint")
    with Timer(30) as t:
        for k in range(20):
            r = check_lemma(random_series(rng, 3, 4), sd)
            assert r.passed, (k, r.violations)
    t.check()


@pytest.mark.acceptance(5, "Duflo round trip and exact quadratic Casimir pattern")
def test_criterion_5_duflo():
    rng = random.Random(5)
    g = su2()
    with Timer(10) as t:
        for _ in range(20):
            u = Dist0(g, dict(random_series(rng, 3, 4, density=0.3).items()))
            phi = random_series(rng, 3, 4)
            assert pair0(duflo_inv(duflo(u)), phi) == pair0(u, phi)
        hc = harish_chandra_check(range(6))
        assert hc.passed, hc.violations
        assert hc.values["fit_residual"] == "0"
    t.check()


@pytest.mark.acceptance(6, "distributional index stable between cutoffs 20 and 30")
def test_criterion_6_index_stability():
    with Timer(60) as t:
        for w in range(-2, 3):
            model = build_model(w, 20)
            a, b = distributional_index(model, 20), distributional_index(model, 30)
            for m in range(-10, 11):
                assert isinstance(a.coefficients[m], int)
                assert a.coefficients[m] == b.coefficients[m]
            assert a.fit.degree <= 1 and a.fit.residual == 0
    t.check()


@pytest.mark.acceptance(7, "index formula: spectral side equals Chern-Weil side, 20 cases")
def test_criterion_7_index_formula():
    phis = standard_phis()
    with Timer(60) as t:
        count = 0
        for w in range(-2, 3):
            r = theorem_check(w, phis, cutoff=12)
            assert r.passed, r.violations
            count += len(phis)
        assert count == 20
    t.check()


@pytest.mark.acceptance(8, "heat trace extrapolates to the exact index within 1e-3")
def test_criterion_8_heat_trace():
    with Timer(120) as t:
        r = heat_suite(0, range(-4, 5), (0.4, 0.2, 0.1, 0.05), spectral_cutoff=80, tolerance=1e-3)
        for m in range(-4, 5):
            assert f"m={m}.t=0.05" in r.numeric
        assert r.passed, r.violations
    t.check()


@pytest.mark.acceptance(9, "each corrupted fixture makes some check fail")
def test_criterion_9_sensitivity():
    with Timer(30) as t:
        flipped = Scalar.of(0, 2)
        top = CliffElt.blade(2, (0, 1))
        assert berezin_supertrace(top, flipped) != spinor_rep(2).supertrace(spinor_rep(2).represent(top))
        assert not theorem_check(1, standard_phis(), cutoff=6, normalization=flipped).passed
        assert not check_identities(corrupted_noninvariant(), order=2).passed
        assert not gamma_homomorphism(corrupted_nonhomomorphic()).passed
    t.check()


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
