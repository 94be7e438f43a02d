
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcsurf import jet as J
from lcsurf.errors import DomainError
from lcsurf.expr import eval_jet, parse_expr
from lcsurf.jet import Jet, slot

small = st.floats(-2, 2, allow_nan=False)


def random_jet(rng, order=3):
    return Jet(rng.normal(size=J.n_slots(order)), order)


def test_slot_layout_is_graded():
    assert [slot(i, j) for i, j in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (0, 3)]] \
        == [0, 1, 2, 3, 4, 5, 6, 9]
    assert J.n_slots(3) == 10 and J.n_slots(4) == 15


def test_bad_slot_count_rejected():
    with pytest.raises(ValueError):
        Jet(np.zeros(7))


def test_sin_example_slots():
    # sin(u) at u = 0: value 0, d/du 1, d2/du2 0, d3/du3 -1, nothing in v
    j = eval_jet(parse_expr("sin(u)"), 0.0, 0.0, order=3)
    assert j.d(0, 0) == 0 and j.d(1, 0) == 1 and j.d(2, 0) == 0 and j.d(3, 0) == -1
    assert j.d(0, 1) == j.d(1, 1) == j.d(0, 3) == 0


def test_mixed_product_partials():
    u = Jet.variable(0.5, "u")
    v = Jet.variable(2.0, "v")
    f = u * u * v
    assert f.d(0, 0) == pytest.approx(0.5)
    assert f.d(1, 0) == pytest.approx(2.0)
    assert f.d(2, 1) == pytest.approx(2.0)
    assert f.d(1, 1) == pytest.approx(1.0)
    assert f.d(3, 0) == 0


def test_ring_laws(rng):
    a, b, c = (random_jet(rng) for _ in range(3))
    np.testing.assert_allclose((a * b).coef, (b * a).coef, atol=1e-14)
    np.testing.assert_allclose(((a * b) * c).coef, (a * (b * c)).coef, atol=1e-12)
    np.testing.assert_allclose((a * (b + c)).coef, (a * b + a * c).coef, atol=1e-12)
    one = Jet.constant(1.0)
    np.testing.assert_allclose((a * one).coef, a.coef)


def test_division_inverts_multiplication(rng):
    a = random_jet(rng)
    b = random_jet(rng)
    b.coef[0] = 1.5
    np.testing.assert_allclose(((a / b) * b).coef, a.coef, atol=1e-12)


def test_truncation_is_a_slice(rng):
    a = random_jet(rng, 4)
    np.testing.assert_array_equal(a.truncate(2).coef, a.coef[:6])


def test_derivative_shift():
    f = eval_jet(parse_expr("u^3*v"), 1.0, 2.0, order=3)
    fu = f.du()
    assert fu.order == 2
    assert fu.d(0, 0) == pytest.approx(6.0)
    assert fu.d(1, 0) == pytest.approx(12.0)
    assert fu.d(0, 1) == pytest.approx(3.0)


@pytest.mark.parametrize("src", [
    "sin(u)*cos(v)", "exp(u*v)", "log(2 + u^2 + v)", "sqrt(3 + u - v)", "tan(u/3)",
    "1/(2 + u*v)", "(u - v)^4",
])
def test_jet_matches_finite_differences(src):
    node = parse_expr(src)
    u0, v0, h = 0.3, -0.4, 1e-5
    f = lambda u, v: eval_jet(node, u, v, order=0).value
    j = eval_jet(node, u0, v0, order=3)
    fd = {
        (1, 0): (f(u0 + h, v0) - f(u0 - h, v0)) / (2 * h),
        (0, 1): (f(u0, v0 + h) - f(u0, v0 - h)) / (2 * h),
        (2, 0): (f(u0 + h, v0) - 2 * f(u0, v0) + f(u0 - h, v0)) / h ** 2,
    }
    H = 1e-3
    fd[(1, 1)] = (f(u0 + H, v0 + H) - f(u0 + H, v0 - H) - f(u0 - H, v0 + H) + f(u0 - H, v0 - H)) / (4 * H * H)
    fd[(3, 0)] = (f(u0 + 2 * H, v0) - 2 * f(u0 + H, v0) + 2 * f(u0 - H, v0) - f(u0 - 2 * H, v0)) / (2 * H ** 3)
    for (i, k), val in fd.items():
        tol = 1e-6 if i + k == 1 else 1e-4
        assert j.d(i, k) == pytest.approx(val, rel=tol, abs=tol)


def test_vectorised_grid():
    U, V = np.meshgrid(np.linspace(0, 1, 4), np.linspace(0, 1, 3), indexing="ij")
    j = eval_jet(parse_expr("u*v"), U, V)
    assert j.shape == (4, 3)
    np.testing.assert_allclose(j.d(1, 0), V)


@pytest.mark.parametrize("src, u0", [("log(u)", 0.0), ("log(u)", -1.0), ("sqrt(u)", -1.0),
                                     ("sqrt(u)", 0.0), ("1/u", 0.0)])
def test_domain_errors(src, u0):
    with pytest.raises(DomainError):
        eval_jet(parse_expr(src), u0, 1.0)


def test_domain_error_names_subexpression():
    with pytest.raises(DomainError) as info:
        eval_jet(parse_expr("u + log(v - 2)"), 0.0, 1.0)
    assert "log" in info.value.node


def test_plain_number_dispatch():
    assert J.sin(0.0) == 0.0
    assert J.value_of(3) == 3
    with pytest.raises(DomainError):
        J.log(-1.0)


@settings(max_examples=100, deadline=None)
@given(small, small)
def test_exp_log_roundtrip(u0, v0):
    j = eval_jet(parse_expr("log(exp(u + v))"), u0, v0)
    np.testing.assert_allclose(j.coef, eval_jet(parse_expr("u + v"), u0, v0).coef, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(small)
def test_pythagorean_identity(u0):
    j = eval_jet(parse_expr("sin(u)^2 + cos(u)^2"), u0, 0.0)
    np.testing.assert_allclose(j.coef, Jet.constant(1.0).coef, atol=1e-12)
