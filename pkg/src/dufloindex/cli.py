"""Command-line driver: runs the verification suites and writes text / JSON reports."""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import duflo, gaussmoment, indexlab, liealg, weil
from .report import CheckResult
from .scalar import PI, Scalar, Series, random_series

SCHEMA = 1
SUITES = ("verify-algebra", "verify-weil", "verify-gauss", "verify-duflo", "index", "verify-theorem", "heat")


@dataclass
class Settings:
    order: int = 8
    cutoff: int = 20
    twists: list[int] = field(default_factory=lambda: [-2, -1, 0, 1, 2])
    heat_twists: list[int] = field(default_factory=lambda: [0])
    heat_weights: list[int] = field(default_factory=lambda: list(range(-4, 5)))
    t_grid: list[float] = field(default_factory=lambda: [0.4, 0.2, 0.1, 0.05])
    spectral_cutoff: int = 80
    tolerance: float = 1e-3
    phis: list[list[str]] = field(default_factory=lambda: [["1"], ["0", "1"], ["0", "0", "1"], ["0", "0", "0", "1"]])
    lie_files: list[str] = field(default_factory=list)
    seed: int = 0

    def phi_series(self) -> list[Series]:
        order = max(3, max(len(p) for p in self.phis) - 1) if self.phis else 3
        return [Series(1, order, {(k,): _parse_scalar(c) for k, c in enumerate(p)}) for p in self.phis]


def _parse_scalar(text: str) -> Scalar:
    """'a', 'a/b', 'a+bi', 'bi' style Gaussian rationals."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty coefficient")
    if not t.endswith("i"):
        return Scalar.of(Fraction(t))
    body = t[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        im = body if body not in ("", "+", "-") else body + "1"
        return Scalar.of(0, Fraction(im))
    re, im = body[:cut], body[cut:]
    if im in ("+", "-"):
        im += "1"
    return Scalar.of(Fraction(re), Fraction(im))


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(",", " ").split()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def load_config(path: Path, s: Settings) -> Settings:
    phis: list[list[str]] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        try:
            if key in ("order", "cutoff", "spectral_cutoff", "seed"):
                setattr(s, key, int(value))
            elif key == "tolerance":
                s.tolerance = float(value)
            elif key in ("twist", "twists"):
                s.twists = _int_list(value)
            elif key == "heat_twists":
                s.heat_twists = _int_list(value)
            elif key == "heat_weights":
                s.heat_weights = _int_list(value)
            elif key == "t_grid":
                s.t_grid = _float_list(value)
            elif key == "phi":
                coeffs = [c for c in value.replace(",", " ").split()]
                for c in coeffs:
                    _parse_scalar(c)
                phis.append(coeffs)
            elif key == "lie":
                s.lie_files.append(str((path.parent / value).resolve()))
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    if phis:
        s.phis = phis
    return s


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_algebra(s: Settings) -> list[CheckResult]:
    out = []
    for g in (liealg.abelian(1), liealg.su2(), liealg.so3(), liealg.son(4)):
        r = CheckResult(f"validate[{g.name}]", liealg.validate(g))
        out.append(r)
        out.append(CheckResult(f"adjoint[{g.name}]", liealg.validate_rep(liealg.adjoint_rep(g))))
    for two_j in range(5):
        out.append(CheckResult(f"su2_irrep[2j={two_j}]", liealg.validate_rep(liealg.su2_irrep(two_j))))
    iso = CheckResult("su2_so3_isomorphism")
    if liealg.su2().c != su2_image_constants():
        iso.fail("structure constants of so3 on the image basis differ from su2")
    out.append(iso)
    for f in s.lie_files:
        try:
            g = liealg.parse_lie_text(Path(f).read_text())
            out.append(CheckResult(f"validate[{Path(f).name}]", liealg.validate(g)))
        except (OSError, ValueError) as exc:
            out.append(CheckResult(f"validate[{Path(f).name}]", [str(exc)]))
    return out


def su2_image_constants():
    """so3 rewritten on the basis -E23, E13, -E12 (images of X1, X2, X3)."""
    so3 = liealg.so3()  # basis E12, E13, E23 with [E_ab, E_bc] = E_ac
    q = [[0, 0, -1], [0, 1, 0], [-1, 0, 0]]
    return so3.change_basis(q).c


def suite_weil(s: Settings) -> list[CheckResult]:
    out = []
    for name in weil.FIXTURES:
        sd = weil.fixture(name)
        out.append(_renamed(weil.gamma_homomorphism(sd), name))
        out.append(_renamed(weil.gamma_commutation(sd), name))
        order = s.order if sd.algebra.d <= 3 else sd.n // 2
        out.append(weil.check_identities(sd, order=order, seed=s.seed))
    g = liealg.su2()
    ad = weil.fixture("su2_adjoint").alpha
    for label, ser in (("j_g[su2]", weil.j_g(g, s.order)), ("j_M[su2->so3]", weil.j_M(ad, s.order))):
        r = CheckResult(f"invariance[{label}]")
        if not ser.invariant:
            r.fail("series is not infinitesimally invariant")
        out.append(r)
    model = indexlab.build_model(0, 0)
    gb = CheckResult("gauss_bonnet")
    euler = weil.euler_series(model.spin.alpha, 1)
    chi = weil.cw_pair(euler, model.curvature, model.fundclass)
    gb.values["euler_characteristic"] = str(chi)
    gb.values["volume"] = str(model.fundclass.volume)
    curv = sectional_curvature(model.K)
    gb.values["sectional_curvature"] = str(curv)
    if chi != Scalar.of(2):
        gb.fail(f"Euler pairing gives {chi}")
    if model.fundclass.volume * curv != PI * 4:
        gb.fail("volume times curvature is not 4 pi")
    out.append(gb)
    return out


def sectional_curvature(K: liealg.LieAlg) -> Fraction:
    """Normal homogeneous metric on K/T: |[X1,X2]_t|^2 + 1/4 |[X1,X2]_m|^2."""
    br = K.c[0][1]
    return br[2] ** 2 + Fraction(1, 4) * (br[0] ** 2 + br[1] ** 2)


def _renamed(r: CheckResult, suffix: str) -> CheckResult:
    r.name = f"{r.name}[{suffix}]"
    return r


def suite_gauss(s: Settings) -> list[CheckResult]:
    out = []
    m = CheckResult("gaussian_moments")
    for beta, want in (((0, 0), (1, 0)), ((2,), (2, 1)), ((1,), (0, 0)), ((4, 2), (24, 3))):
        got = gaussmoment.gaussian_moment(beta)
        if got != (Scalar.of(want[0]), want[1]):
            m.fail(f"moment {beta} = {got}")
    out.append(m)
    rng = random.Random(s.seed)
    for name, count in (("su2_adjoint", 20), ("abelian_rotation", 10), ("so4_vector", 5)):
        sd = weil.fixture(name)
        r = CheckResult(f"top_degree[{name}]")
        for k in range(count):
            phi = random_series(rng, sd.algebra.d, 4)
            sub = gaussmoment.check_lemma(phi, sd)
            r.violations.extend(f"phi#{k}: {v}" for v in sub.violations)
        out.append(r)
    return out


def suite_duflo(s: Settings) -> list[CheckResult]:
    out = []
    rng = random.Random(s.seed)
    g = liealg.su2()
    r = CheckResult("round_trip[su2]")
    for k in range(20):
        u = duflo.Dist0(g, {b: v for b, v in random_series(rng, 3, 4, density=0.3).items()})
        back = duflo.duflo_inv(duflo.duflo(u))
        phi = random_series(rng, 3, 4)
        if duflo.pair0(back, phi) != duflo.pair0(u, phi):
            r.fail(f"sample {k}: round trip changes the pairing")
    out.append(r)
    out.append(duflo.harish_chandra_check())
    return out


def suite_index(s: Settings, echo: Callable[[str], None]) -> list[CheckResult]:
    out = []
    for w in s.twists:
        model = indexlab.build_model(w, s.cutoff)
        cs = indexlab.distributional_index(model)
        bigger = indexlab.distributional_index(model, s.cutoff + max(s.cutoff // 2, 1))
        r = CheckResult(f"distributional_index[w={w}]")
        r.values.update({f"m={m}": str(c) for m, c in sorted(cs.coefficients.items())})
        r.values["flagged"] = " ".join(map(str, cs.flagged))
        if cs.fit is None:
            r.fail("no stable coefficients")
        else:
            r.values["Q"] = " ".join(str(c) for c in cs.fit.coefficients)
            if cs.fit.residual:
                r.fail(f"fit residual {cs.fit.residual}")
        for m, c in cs.coefficients.items():
            if bigger.coefficients.get(m) != c:
                r.fail(f"m={m}: coefficient {c} changes to {bigger.coefficients.get(m)} at a larger cutoff")
        out.append(r)
        echo(f"twist w={w}, cutoff {s.cutoff}")
        echo(cs.table())
        for two_j in range(min(s.cutoff, 4) + 1):
            out.append(_renamed(indexlab.block_checks(model, indexlab.block_dirac(model, two_j)), f"w={w}"))
    return out


def suite_theorem(s: Settings) -> list[CheckResult]:
    phis = s.phi_series()
    return [indexlab.theorem_check(w, phis, cutoff=max(s.cutoff, 4)) for w in s.twists]


def suite_heat(s: Settings) -> list[CheckResult]:
    return [indexlab.heat_suite(w, s.heat_weights, s.t_grid, s.spectral_cutoff, s.tolerance)
            for w in s.heat_twists]


def run_suite(name: str, s: Settings, echo: Callable[[str], None]) -> list[CheckResult]:
    if name == "verify-algebra":
        return suite_algebra(s)
    if name == "verify-weil":
        return suite_weil(s)
    if name == "verify-gauss":
        return suite_gauss(s)
    if name == "verify-duflo":
        return suite_duflo(s)
    if name == "index":
        return suite_index(s, echo)
    if name == "verify-theorem":
        return suite_theorem(s)
    if name == "heat":
        return suite_heat(s)
    raise ValueError(f"unknown suite {name!r}")


def build_report(suite: str, s: Settings, results: dict[str, list[CheckResult]]) -> dict:
    checks = []
    for name, rs in results.items():
        for r in rs:
            entry = r.to_json()
            entry["suite"] = name
            checks.append(entry)
    failed = any(c["status"] == "fail" for c in checks)
    return {
        "schema": SCHEMA,
        "suite": suite,
        "settings": asdict(s),
        "status": "fail" if failed else "pass",
        "checks": checks,
    }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dufloindex", description=__doc__)
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--json", type=Path, help="write the JSON report here")
    p.add_argument("--order", type=int, help="truncation order for characteristic series")
    p.add_argument("--cutoff", type=int, help="Peter-Weyl cutoff (max 2j)")
    p.add_argument("--twist", type=str, help="comma-separated twist weights")
    p.add_argument("--t-grid", type=str, help="comma-separated heat times")
    p.add_argument("--tolerance", type=float, help="relative tolerance of the heat check")
    p.add_argument("--quiet", action="store_true", help="only print failures and the summary")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    s = Settings()
    try:
        if args.config is not None:
            load_config(args.config, s)
        if args.order is not None:
            s.order = args.order
        if args.cutoff is not None:
            s.cutoff = args.cutoff
        if args.twist is not None:
            s.twists = _int_list(args.twist)
            s.heat_twists = list(s.twists)
        if args.t_grid is not None:
            s.t_grid = _float_list(args.t_grid)
        if args.tolerance is not None:
            s.tolerance = args.tolerance
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    if s.cutoff < 0 or s.order < 1 or not s.t_grid or any(t <= 0 for t in s.t_grid):
        parser.error("cutoff must be >= 0, order >= 1 and heat times positive")

    def echo(line: str) -> None:
        print(line)

    names = SUITES if args.suite == "all" else (args.suite,)
    results = {}
    for name in names:
        results[name] = run_suite(name, s, echo)
        for r in results[name]:
            if not args.quiet or r.status == "fail":
                print(f"{r.status.upper():7} {name}: {r.name}")
                for v in r.violations:
                    print(f"        {v}")
    report = build_report(args.suite, s, results)
    n_fail = sum(c["status"] == "fail" for c in report["checks"])
    print(f"{len(report['checks'])} checks, {n_fail} failed")
    if args.json is not None:
        args.json.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return 1 if n_fail else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
