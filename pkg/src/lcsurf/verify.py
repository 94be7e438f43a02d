"""Regression checks against the closed forms of ``paper-example``.

Each ``check_*`` function returns a :class:`CheckResult`; :func:`run_all`
runs the ten of them in order.  The CLI ``verify`` command and the
acceptance tests share this code.
"""

import math
from functools import lru_cache
from typing import Callable, List, NamedTuple

import numpy as np

from .curvature import curvature_bundle, principal_curvatures, weingarten_oracle
from .errors import ComplexPrincipal, GeometryError
from .fixtures import paper_example, synthetic_field, twisted_revolution
from .focal import (focal_coefficients, focal_grid, focal_invariant_oracle, focal_invariants,
                    solve_quadratic)
from .lightlike import (classify_lightlike, curvature_limit_probe, directional_witnesses,
                        trace_lightlike_locus)
from .minkowski import pseudo_inner, wedge
from .surface import default_tol, integrability_residuals, invariants_at, stratify
from . import expr

TWO_PI = 2 * math.pi
SEED = 20240917


class CheckResult(NamedTuple):
    number: int
    title: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number:2d}] {self.title}: {self.detail}"


def _grid(n=64, u=(0.0, TWO_PI), v=(0.0, TWO_PI)):
    return np.meshgrid(np.linspace(*u, n), np.linspace(*v, n), indexing="ij")


def _rng():
    return np.random.default_rng(SEED)


def check_invariants():
    U, V = _grid()
    inv = invariants_at(paper_example(), U, V)
    expected = {
        "a1": -0.5 * (np.sin(U) - np.cos(U)),
        "b1": 0.5 * (np.sin(U) + np.cos(U)),
        "c1": 0 * U,
        "c2": -np.cos(U),
        "e2": 0 * U,
        "f2": 0.5 + 0 * U,
        "g2": -0.5 + 0 * U,
    }
    err = max(np.max(np.abs(getattr(inv, k).value - val)) for k, val in expected.items())
    return CheckResult(1, "basic invariants on the 64x64 grid", err <= 1e-9, f"max error {err:.2e}")


def check_extended_curvatures():
    U, V = _grid()
    inside = (U > math.pi / 2) & (U < 3 * math.pi / 2)
    U, V = U[inside], V[inside]
    b = curvature_bundle(invariants_at(paper_example(), U, V))
    err = max(np.max(np.abs(b.lambda_tilde + np.cos(2 * U))),
              np.max(np.abs(b.K_hat + np.cos(U))),
              np.max(np.abs(b.H_hat + np.sin(U) ** 2 * np.cos(U))))
    return CheckResult(2, "lambda~, K^, H^ closed forms on (pi/2, 3pi/2)", err <= 1e-9,
                       f"max error {err:.2e} over {U.size} points")


def check_mu_roots(n=1000):
    rng = _rng()
    U = rng.uniform(0, TWO_PI, 4 * n)
    V = rng.uniform(0, TWO_PI, 4 * n)
    keep = np.abs(np.cos(U)) > 1e-3  # |K^| = |cos u|
    U, V = U[keep][:n], V[keep][:n]
    inv = invariants_at(paper_example(), U, V)
    A, B, C = (j.value for j in focal_coefficients(inv))
    plus, minus, case = solve_quadratic(A, B, C, default_tol(inv))
    got = np.sort(np.stack([plus, minus]), axis=0)
    want = np.sort(np.stack([-np.ones_like(U), np.cos(2 * U)]), axis=0)
    quadratic = bool(np.all(case == 0))
    err = float(np.max(np.abs(got - want))) if quadratic else math.inf
    return CheckResult(3, "focal roots {-1, cos 2u}", quadratic and err <= 1e-8,
                       f"max error {err:.2e} at {U.size} random points")


def _sheet_names(fg):
    """``(name of the mu = -1 sheet, name of the mu = cos 2u sheet)``."""
    p = fg.mu["plus"]
    return ("plus", "minus") if np.nanmax(np.abs(p + 1)) < 1e-6 else ("minus", "plus")


def check_focal_sheets(oracle_points=40):
    surf = paper_example()
    U, V = _grid()
    fg = focal_grid(surf, U, V)
    one, two = _sheet_names(fg)
    F1, F2 = fg.sheets[one].F, fg.sheets[two].F
    s, c = np.sin(U), np.cos(U)
    err1 = np.max(np.abs(F1 - np.stack([2 * s, 0 * U, 0 * U])))
    err2 = np.max(np.abs(F2 - np.stack([2 * s ** 3, 2 * c ** 3 * np.sin(V), 2 * c ** 3 * np.cos(V)])))
    err_c2 = np.max(np.abs(fg.sheets[two].inv["c2"] + 2 * c ** 3))
    err_s1 = max(np.max(np.abs(fg.sheets[one].inv["a1"] - c)), np.max(np.abs(fg.sheets[one].inv["c2"])))

    rng = _rng()
    worst, used = 0.0, 0
    while used < oracle_points:
        u0, v0 = rng.uniform(0, TWO_PI, 2)
        if abs(math.cos(2 * u0) + 1) < 1e-2:
            continue  # the two sheets meet at u = pi/2, 3pi/2
        for near in (-1.0, math.cos(2 * u0)):
            sheet = focal_invariants(surf, u0, v0, near=near)
            fd = focal_invariant_oracle(surf, u0, v0, near=near)
            worst = max(worst, max(abs(float(sheet.inv[k]) - fd[k]) for k in fd))
        used += 1
    ok = err1 <= 1e-8 and err2 <= 1e-8 and err_c2 <= 1e-8 and worst <= 1e-5 and err_s1 <= 1e-5
    return CheckResult(4, "focal sheets and their invariants", bool(ok),
                       f"sheet maps {err1:.1e}/{err2:.1e}, c2 bar {err_c2:.1e}, "
                       f"sheet-(1) a1 = cos u, c2 = 0 {err_s1:.1e}, FD oracle {worst:.1e}")


LIGHTLIKE_U = tuple(k * math.pi / 4 for k in (1, 3, 5, 7))
SINGULAR_U = (math.pi / 2, 3 * math.pi / 2)


def _row_zeros(f, n=4001):
    """Sign changes of ``f`` along ``v = 0``, refined by bisection."""
    from scipy.optimize import brentq
    us = np.linspace(0.0, TWO_PI, n)
    vals = f(us)
    out = []
    for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        out.append(brentq(lambda x: float(f(np.array([x]))[0]), us[k], us[k + 1], xtol=1e-14))
    return out


@lru_cache(maxsize=1)
def _loci():
    surf = paper_example()
    return [trace_lightlike_locus(surf, (u + 1e-3, 1.0)) for u in LIGHTLIKE_U]


def check_stratification():
    surf = paper_example()
    lam = lambda us: invariants_at(surf, us, 0 * us, order=1).lambda_tilde.value
    c2 = lambda us: invariants_at(surf, us, 0 * us, order=1).c2.value
    zl, zs = _row_zeros(lam), _row_zeros(c2)
    found_l = len(zl) == 4 and max(abs(a - b) for a, b in zip(zl, LIGHTLIKE_U)) <= 1e-6
    found_s = len(zs) == 2 and max(abs(a - b) for a, b in zip(zs, SINGULAR_U)) <= 1e-6
    trace_err = 0.0
    for u_k, locus in zip(LIGHTLIKE_U, _loci()):
        trace_err = max(trace_err, float(np.max(np.abs(locus.points[:, 0] - u_k))))
    tags = [stratify(surf, u, 0.3).tag for u in SINGULAR_U]
    ok = found_l and found_s and trace_err <= 1e-6 and tags == ["singular_S1"] * 2
    return CheckResult(5, "lightlike locus at u = k pi/4 (k odd), S1 at pi/2, 3pi/2", bool(ok),
                       f"traced loci off by {trace_err:.1e}, row zeros {len(zl)} + {len(zs)}, "
                       f"singular tags {tags}")


def check_classification():
    surf = paper_example()
    bad = []
    count = 0
    for locus in _loci():
        for u0, v0 in locus.points:
            kind = classify_lightlike(surf, u0, v0)
            eta = abs(kind.witnesses["eta_lambda"])
            count += 1
            if kind.tag != "cuspidal_edge" or eta <= kind.witnesses["tol_cls"]:
                bad.append((u0, v0, kind.tag))
    p1 = classify_lightlike(surf, 5 * math.pi / 4, 0.0).witnesses["p1"]
    synth = {}
    for name in ("swallowtail", "cuspidal_lips", "cuspidal_beaks"):
        f = synthetic_field(name)
        synth[name] = (classify_lightlike(f).tag, directional_witnesses(f))
    w_sw, w_li, w_be = synth["swallowtail"][1], synth["cuspidal_lips"][1], synth["cuspidal_beaks"][1]
    ok = (not bad and abs(p1 + 0.5) <= 1e-9
          and all(tag == name for name, (tag, _) in synth.items())
          and abs(w_sw["eta_lambda"]) <= 1e-12 and abs(w_sw["eta2_lambda"]) > 1e-6
          and w_li["hessian_det"] > 0
          and w_be["hessian_det"] < 0 and abs(w_be["eta2_lambda"]) > 1e-6)
    return CheckResult(6, "lightlike classification", bool(ok),
                       f"{count} traced points, {len(bad)} not cuspidal_edge, p1(5pi/4) = {p1:.9g}, "
                       f"synthetic {[t for t, _ in synth.values()]}")


def check_integrability(n=1000):
    rng = _rng()
    worst = {}
    for surf in (paper_example(), twisted_revolution()):
        (ua, ub), (va, vb) = surf.domain
        U, V = rng.uniform(ua, ub, n), rng.uniform(va, vb, n)
        worst[surf.name] = float(np.max(np.abs(integrability_residuals(invariants_at(surf, U, V)))))
    ok = all(r <= 1e-9 for r in worst.values())
    return CheckResult(7, "integrability residuals", ok,
                       ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def check_principal(n=1000):
    rng = _rng()
    surf = paper_example()
    worst, real, complex_pairs, tried = 0.0, 0, 0, 0
    while real + complex_pairs < n:
        u0, v0 = rng.uniform(0, TWO_PI, 2)
        tried += 1
        if abs(math.cos(2 * u0)) < 1e-3 or abs(math.cos(u0)) < 1e-3:
            continue  # near lightlike or singular points
        inv = invariants_at(surf, u0, v0)
        oracle = weingarten_oracle(inv)
        try:
            k1, k2 = principal_curvatures(inv)
        except ComplexPrincipal:
            worst = max(worst, 0.0 if isinstance(oracle[0], complex) else math.inf)
            complex_pairs += 1
            continue
        got, want = sorted((k1, k2)), sorted(float(np.real(x)) for x in oracle)
        rel = max(abs(a - b) / max(1.0, abs(b)) for a, b in zip(got, want))
        worst = max(worst, rel)
        real += 1
    at_pi = sorted(principal_curvatures(surf, math.pi, 0.7))
    err_pi = max(abs(at_pi[0] + 1), abs(at_pi[1] - 1))
    ok = worst <= 1e-6 and err_pi <= 1e-9
    return CheckResult(8, "principal curvatures vs Weingarten eigenvalues", ok,
                       f"max relative error {worst:.1e} over {real} real and {complex_pairs} complex "
                       f"pairs; at u = pi {at_pi[0]:.9g}, {at_pi[1]:.9g}")


def check_probe():
    rep = curvature_limit_probe(paper_example(), ("t", "0"), 5 * math.pi / 4)
    v = rep.verdicts
    K_lim, H_lim = v["K_hat"].limit, v["H_hat"].limit
    last = rep.rows[-1]
    ok = (K_lim is not None and abs(K_lim - math.sqrt(2) / 2) <= 1e-6
          and H_lim is not None and abs(H_lim - math.sqrt(2) / 4) <= 1e-6
          and abs(last.K) > 1e6 and abs(last.H) > 1e6
          and v["K"].kind == "diverges" and v["H"].kind == "diverges")
    return CheckResult(9, "curvature probe towards u = 5pi/4", bool(ok),
                       f"K^ -> {K_lim}, H^ -> {H_lim}, last |K| = {abs(last.K):.2e}, "
                       f"|H| = {abs(last.H):.2e}")


def check_properties(n=10_000):
    rng = _rng()
    x, y, z, w = (rng.uniform(-1, 1, (3, n)) for _ in range(4))
    det = np.einsum("ij,ij->j", np.cross(x.T, y.T).T, z)
    triple = np.max(np.abs(pseudo_inner(wedge(x, y), z) - det))
    lagrange = np.max(np.abs(pseudo_inner(wedge(x, y), wedge(z, w))
                             + pseudo_inner(x, z) * pseudo_inner(y, w)
                             - pseudo_inner(x, w) * pseudo_inner(y, z)))
    anti = np.max(np.abs(wedge(x, y) + wedge(y, x)))
    alg = max(triple, lagrange, anti)

    U, V = rng.uniform(0, TWO_PI, 1000), rng.uniform(0, TWO_PI, 1000)
    inv = invariants_at(paper_example(), U, V)
    n_hat = inv.n_hat
    normal = max(np.max(np.abs(inv.lambda_tilde.value + pseudo_inner(n_hat, n_hat))),
                 np.max(np.abs(pseudo_inner(n_hat, inv.X.du().value))),
                 np.max(np.abs(pseudo_inner(n_hat, inv.X.dv().value))))

    node = expr.parse_expr("exp(u/3)*sin(v + u^2) - log(2 + cos(u*v))/(1 + v^2)")
    f = lambda a, b: expr.eval_value(node, a, b)
    h = 1e-3
    # fourth-order central stencils
    d1 = lambda g: (-g(2) + 8 * g(1) - 8 * g(-1) + g(-2)) / (12 * h)
    d2 = lambda g: (-g(2) + 16 * g(1) - 30 * g(0) + 16 * g(-1) - g(-2)) / (12 * h * h)
    jet_err = 0.0
    for u0, v0 in rng.uniform(-1, 1, (20, 2)):
        j = expr.eval_jet(node, u0, v0, order=2)
        fd = {
            (1, 0): d1(lambda k: f(u0 + k * h, v0)),
            (0, 1): d1(lambda k: f(u0, v0 + k * h)),
            (2, 0): d2(lambda k: f(u0 + k * h, v0)),
            (0, 2): d2(lambda k: f(u0, v0 + k * h)),
            (1, 1): d1(lambda k: d1(lambda l: f(u0 + k * h, v0 + l * h))),
        }
        jet_err = max(jet_err, max(abs(float(j.d(*ij)) - val) for ij, val in fd.items()))
    ok = alg <= 1e-12 and normal <= 1e-10 and jet_err <= 1e-6
    return CheckResult(10, "algebra, normal and jet property suites", bool(ok),
                       f"Minkowski identities {alg:.1e}, normal {normal:.1e}, jets vs FD {jet_err:.1e}")


CHECKS: List[Callable[[], CheckResult]] = [
    check_invariants, check_extended_curvatures, check_mu_roots, check_focal_sheets,
    check_stratification, check_classification, check_integrability, check_principal,
    check_probe, check_properties,
]


def run_check(fn):
    """Run one check, turning an unexpected exception into a failure."""
    try:
        return fn()
    except (GeometryError, ArithmeticError, ValueError) as exc:
        number = CHECKS.index(fn) + 1
        return CheckResult(number, fn.__name__, False, f"raised {type(exc).__name__}: {exc}")


def run_all():
    return [run_check(fn) for fn in CHECKS]
