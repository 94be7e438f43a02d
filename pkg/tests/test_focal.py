import math

import numpy as np
import pytest

from lcsurf.errors import BranchUnavailable, DoubleRootNoJet, StencilCrossesBranchCut
from lcsurf.focal import (continue_branches, focal_coefficients, focal_curvatures, focal_grid,
                          focal_invariant_oracle, focal_invariants, focal_point, mu_roots,
                          relation_checks, solve_quadratic)
from lcsurf.minkowski import pseudo_inner, wedge
from lcsurf.surface import InvariantField, invariants_at

C3 = lambda u: math.cos(u) ** 3
S3 = lambda u: math.sin(u) ** 3


@pytest.mark.parametrize("u", [1.7, 2.5, 3.0, 4.2, 0.4, 5.9])
def test_example_roots(surf, u):
    roots = mu_roots(surf, u, 0.8)
    assert roots.case == "quadratic"
    assert sorted(roots.values) == pytest.approx(sorted([-1.0, math.cos(2 * u)]), abs=1e-12)


def test_example_roots_at_special_points(surf):
    assert sorted(mu_roots(surf, 5 * math.pi / 4, 0.0).values) == pytest.approx([-1, 0], abs=1e-12)
    assert sorted(mu_roots(surf, math.pi, 0.0).values) == pytest.approx([-1, 1], abs=1e-12)


def test_root_residual_and_vieta(twisted, rng):
    for u, v in zip(rng.uniform(-3, 3, 100), rng.uniform(0, 6, 100)):
        inv = invariants_at(twisted, u, v)
        roots = mu_roots(inv)
        A, B, C = roots.coefficients
        for r in roots.roots:
            assert abs(A * r.value ** 2 + 2 * B * r.value + C) <= 1e-8 * (1 + abs(A)) * (1 + r.value ** 2)
        if roots.case == "quadratic":
            p, m = roots.values
            assert p * m == pytest.approx(C / A, rel=1e-8, abs=1e-12)
            assert p + m == pytest.approx(-2 * B / A, rel=1e-8, abs=1e-12)


def test_distance_squared_degenerates_at_roots(twisted, rng):
    # Hessian of d2 = <X - nu, X - nu> at nu = X(p) - mu n_hat(p), straight from X
    checked = 0
    for u, v in zip(rng.uniform(-3, 3, 60), rng.uniform(0, 6, 60)):
        inv = invariants_at(twisted, u, v)
        X = inv.X
        n = inv.n_hat
        Xu, Xv = X.du().value, X.dv().value
        Xuu, Xuv, Xvv = X.d(2, 0), X.d(1, 1), X.d(0, 2)
        for r in mu_roots(inv).roots:
            mu = r.value
            huu = pseudo_inner(Xu, Xu) + mu * pseudo_inner(Xuu, n)
            huv = pseudo_inner(Xu, Xv) + mu * pseudo_inner(Xuv, n)
            hvv = pseudo_inner(Xv, Xv) + mu * pseudo_inner(Xvv, n)
            scale = 1 + huu ** 2 + huv ** 2 + hvv ** 2
            assert abs(huv ** 2 - huu * hvv) <= 1e-7 * scale
            checked += 1
    assert checked > 60


def test_solve_quadratic_cases():
    plus, minus, case = solve_quadratic(np.array([1.0, 0.0, 1.0, 0.0]), np.array([0.0, 1.0, 0.0, 0.0]),
                                        np.array([-1.0, 4.0, 1.0, 0.0]), 1e-12)
    assert list(case) == [0, 1, 2, 3]
    # plus is -(B + sqrt(D))/A
    assert plus[0] == pytest.approx(-1) and minus[0] == pytest.approx(1)
    assert minus[1] == pytest.approx(-2) and np.isnan(plus[1])
    assert np.isnan(plus[2:]).all() and np.isnan(minus[2:]).all()


def test_linear_case_label():
    inv = InvariantField.from_expressions(a1="u", b1="1", c2="1", g2="1")
    roots = mu_roots(inv)
    assert roots.case == "linear"
    assert [r.label for r in roots.roots] == ["linear"]
    assert roots.roots[0].value == 0


@pytest.mark.parametrize("u, v", [(0.3, 0.9), (2.0, 4.0), (4.4, 2.2)])
def test_example_sheet_maps(surf, u, v):
    F1 = focal_point(surf, u, v, near=-1.0)
    F2 = focal_point(surf, u, v, near=math.cos(2 * u))
    np.testing.assert_allclose(F1, [2 * math.sin(u), 0, 0], atol=1e-12)
    np.testing.assert_allclose(F2, [2 * S3(u), 2 * C3(u) * math.sin(v), 2 * C3(u) * math.cos(v)], atol=1e-12)


def test_zero_root_gives_base_point(surf):
    u, v = 5 * math.pi / 4, 1.0
    np.testing.assert_allclose(focal_point(surf, u, v, near=0.0), invariants_at(surf, u, v).X.value, atol=1e-14)


def test_branch_selection(surf):
    roots = mu_roots(surf, 2.0, 0.5)
    np.testing.assert_allclose(focal_point(surf, 2.0, 0.5, branch="plus"),
                               focal_point(surf, 2.0, 0.5, near=roots.get("plus").value))
    empty = InvariantField.from_expressions(a1="1", b1="1")
    with pytest.raises(BranchUnavailable):
        focal_point(empty, branch="plus")
    # a single linear root continues the plus sheet when B < 0
    linear = InvariantField.from_expressions(a1="u", b1="1", c2="1", g2="1")
    assert mu_roots(linear).coefficients[1] < 0
    focal_invariants(linear, branch="plus")
    with pytest.raises(BranchUnavailable):
        focal_invariants(linear, branch="minus")


@pytest.mark.parametrize("u", [0.4, math.pi / 3, 2.2, 4.0, 5.5])
def test_example_sheet_one(surf, u):
    sh = focal_invariants(surf, u, 1.2, near=-1.0)
    assert sh.inv["a1"] == pytest.approx(math.cos(u), abs=1e-12)
    assert sh.inv["b1"] == pytest.approx(math.cos(u), abs=1e-12)
    for k in ("a2", "b2", "c2", "c1"):
        assert sh.inv[k] == pytest.approx(0, abs=1e-12)
    assert float(sh.bundle.lambda_tilde) == pytest.approx(-4 * math.cos(u) ** 2, abs=1e-12)


@pytest.mark.parametrize("u", [0.4, math.pi / 3, 2.2, 4.0, 5.5])
def test_example_sheet_two(surf, u):
    s, c = math.sin(u), math.cos(u)
    sh = focal_invariants(surf, u, 1.2, near=math.cos(2 * u))
    assert sh.inv["a1"] == pytest.approx(3 * s * c * (s - c), abs=1e-12)
    assert sh.inv["b1"] == pytest.approx(3 * s * c * (s + c), abs=1e-12)
    assert sh.inv["c2"] == pytest.approx(-2 * c ** 3, abs=1e-12)
    assert sh.inv["a2"] == pytest.approx(0, abs=1e-12)
    assert sh.inv["b2"] == pytest.approx(0, abs=1e-12)


def test_example_sheet_two_at_pi(surf):
    sh = focal_invariants(surf, math.pi, 0.5, near=1.0)
    assert sh.inv["a1"] == pytest.approx(0, abs=1e-12)
    assert sh.inv["b1"] == pytest.approx(0, abs=1e-12)
    assert float(sh.bundle.lambda_tilde) == pytest.approx(0, abs=1e-12)
    assert sh.inv["c2"] == pytest.approx(2, abs=1e-12)


def test_oracle_values_at_third_pi(surf):
    u = math.pi / 3
    o1 = focal_invariant_oracle(surf, u, 0.5, near=-1.0)
    o2 = focal_invariant_oracle(surf, u, 0.5, near=math.cos(2 * u))
    assert o1["a1"] == pytest.approx(0.5, abs=1e-5)
    assert o2["a1"] == pytest.approx(3 * (math.sqrt(3) / 2) * 0.5 * (math.sqrt(3) / 2 - 0.5), abs=1e-5)
    assert o2["a1"] == pytest.approx(0.4755, abs=1e-4)


def test_oracle_grid_agreement(surf):
    us = np.linspace(0.05, 2 * math.pi - 0.05, 20)
    vs = np.linspace(0.0, 2 * math.pi, 20)
    U, V = np.meshgrid(us, vs, indexing="ij")
    fg = focal_grid(surf, U, V)
    worst, skipped = 0.0, 0
    for idx in np.ndindex(U.shape):
        for name in ("plus", "minus"):
            mu = fg.mu[name][idx]
            try:
                ref = focal_invariant_oracle(surf, U[idx], V[idx], near=mu)
            except StencilCrossesBranchCut:
                skipped += 1
                continue
            got = fg.sheets[name].inv
            worst = max(worst, max(abs(got[k][idx] - ref[k]) for k in ref))
    assert worst <= 1e-5
    assert skipped < 40


def test_oracle_twisted(twisted, rng):
    for u, v in zip(rng.uniform(-2.5, 2.5, 15), rng.uniform(0, 6, 15)):
        for r in mu_roots(twisted, u, v).roots:
            try:
                ref = focal_invariant_oracle(twisted, u, v, near=r.value)
            except StencilCrossesBranchCut:
                continue
            got = focal_invariants(twisted, u, v, near=r.value).inv
            for k in ref:
                assert got[k] == pytest.approx(ref[k], abs=1e-5 * (1 + abs(ref[k])))


def test_stencil_rejects_colliding_branches(surf):
    # cos 2u = -1 at u = pi/2: the two sheets touch, and no root exists exactly there
    with pytest.raises(StencilCrossesBranchCut):
        focal_invariant_oracle(surf, math.pi / 2 + 1e-4, 0.3, near=-1.0)
    with pytest.raises(BranchUnavailable):
        focal_invariant_oracle(surf, math.pi / 2, 0.3, near=-1.0)


def test_sheet_lambda_is_minus_normal_norm(twisted, rng):
    for u, v in zip(rng.uniform(-3, 3, 30), rng.uniform(0, 6, 30)):
        for r in mu_roots(twisted, u, v).roots:
            b = focal_curvatures(twisted, u, v, near=r.value)
            assert abs(b.lambda_tilde + pseudo_inner(b.n_hat, b.n_hat)) <= 1e-9 * (1 + abs(b.lambda_tilde))


def test_sheet_is_framed_where_normalised(surf):
    # both sheets have a2 = b2 = 0; F_u ^ F_v must then lie in span{v, w}, i.e. be orthogonal to m
    h = 1e-5
    for u in np.linspace(0.2, 6.0, 12):
        for v in (0.4, 2.9):
            for mu_of in (lambda x: -1.0, lambda x: math.cos(2 * x)):
                sh = focal_invariants(surf, u, v, near=mu_of(u))
                assert abs(sh.inv["a2"]) < 1e-12 and abs(sh.inv["b2"]) < 1e-12
                F = lambda uu, vv: focal_point(surf, uu, vv, near=mu_of(uu))
                Fu = (F(u + h, v) - F(u - h, v)) / (2 * h)
                Fv = (F(u, v + h) - F(u, v - h)) / (2 * h)
                m = invariants_at(surf, u, v).m.value
                assert abs(pseudo_inner(wedge(Fu, Fv), m)) <= 1e-6


def test_double_root_has_no_jet():
    # H^ = 0 at a lightlike point leaves K^ mu^2 = 0
    inv = InvariantField.from_expressions(a1="u", b1="1", c1="1", c2="1", f2="-1")
    roots = mu_roots(inv)
    assert all(r.double_root and r.jet is None for r in roots.roots)
    with pytest.raises(DoubleRootNoJet):
        focal_invariants(inv, near=0.0)


def test_relations_not_applicable_on_example(surf):
    verdicts = {r.name: r for r in relation_checks(surf, 5 * math.pi / 4, 0.4)}
    assert verdicts["iii"].status == "not-applicable"
    assert verdicts["iv"].status == "not-applicable"
    assert verdicts["i"].status == "not-applicable"  # non-degenerate lightlike point
    assert all(r.status != "fails" for r in relation_checks(surf, 2.0, 0.4))


def test_relation_one_on_degenerate_point():
    inv = InvariantField.from_expressions(a1="u^3", b1="1", c1="1", c2="1", f2="1")
    v = {r.name: r for r in relation_checks(inv)}
    assert v["i"].status == "holds"
    assert v["i"].left == pytest.approx(0, abs=1e-14)


def test_relation_two():
    inv = InvariantField.from_expressions(a1="u", b1="1", c2="1", g2="1")
    v = [r for r in relation_checks(inv) if r.name == "ii"]
    assert v and all(r.status == "holds" for r in v)
    # c2 = c2_bar whenever a1 g2 = b1 f2
    assert all(r.left == r.right for r in v)


def test_relation_three_is_not_applicable_at_double_root():
    inv = InvariantField.from_expressions(a1="u", b1="1", c1="1", c2="1", f2="-1")
    v = {r.name: r for r in relation_checks(inv)}
    assert v["iii"].status == "not-applicable"
    assert "double root" in v["iii"].note


def test_relation_four_with_nonzero_sides():
    inv = InvariantField.from_expressions(a1="u + u^2", b1="1 + v", c2="1 + 2*u", f1="1 + u", f2="1 + v")
    v = {r.name: r for r in relation_checks(inv)}
    assert v["iv"].status == "holds"
    assert abs(v["iv"].left) > 1 and abs(v["iv"].right) > 1


def test_focal_grid_continuation(surf):
    U, V = np.meshgrid(np.linspace(0.1, 3.0, 30), np.linspace(0, 6, 5), indexing="ij")
    fg = focal_grid(surf, U, V)
    mus = sorted([fg.mu["plus"], fg.mu["minus"]], key=lambda a: a[0, 0])
    # the branch seeded at (0, 0) keeps following one closed form, through the touch at u = pi/2
    ref = [np.full_like(U, -1.0), np.cos(2 * U)]
    ref.sort(key=lambda a: a[0, 0])
    for got, exp in zip(mus, ref):
        np.testing.assert_allclose(got, exp, atol=1e-10)
    F = fg.sheets["plus"].F
    assert F.shape == (3,) + U.shape


def test_continue_branches_swaps_to_nearest():
    plus = np.array([[1.0, 0.1, -0.9]])
    minus = np.array([[-1.0, -0.1, 0.9]])
    p, m = continue_branches(plus.T, minus.T)
    np.testing.assert_allclose(p.ravel(), [1.0, 0.1, 0.9])
    p, m = continue_branches(np.array([[1.0], [-0.8]]), np.array([[-1.0], [0.8]]))
    np.testing.assert_allclose(p.ravel(), [1.0, 0.8])


def test_coefficients_match_curvature(surf):
    A, B, C = focal_coefficients(invariants_at(surf, 2.0, 0.5))
    assert float(A.value) == pytest.approx(-math.cos(2.0), abs=1e-12)
