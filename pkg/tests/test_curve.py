import math

import numpy as np
import pytest

from lcsurf.curve import (FramedCurve, adapted_rescale, curve_causal_character, curve_invariants,
                          frame_jets, validate_curve)
from lcsurf.errors import FrameViolation, QuadratureError, ValidationError
from lcsurf.fixtures import exponential_helix_curve
from lcsurf.minkowski import CausalCharacter, pseudo_inner

K = 0.5


@pytest.fixture(scope="module")
def helix():
    return exponential_helix_curve(K)


def test_constant_curve_with_constant_frame():
    c = FramedCurve.from_strings(("1", "2", "3"), ("1", "1", "0"), ("1", "-1", "0"), (0, 1))
    inv = curve_invariants(c, 0.4)
    assert inv == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert curve_causal_character(inv) is CausalCharacter.ZERO
    _, _, _, n = frame_jets(c, 0.4)
    np.testing.assert_allclose(n.value, [0, 0, 1])


def test_helix_first_curvature_is_k(helix):
    for t in (0.0, 0.7, 1.9):
        assert curve_invariants(helix, t).kappa1 == pytest.approx(K, abs=1e-14)
    validate_curve(helix)


def test_velocity_reconstruction(helix):
    # gamma' = alpha lplus + beta lminus when gamma' has no n-component
    t = 1.1
    inv = curve_invariants(helix, t)
    g, lp, lm, n = frame_jets(helix, t)
    np.testing.assert_allclose(g.du().value, inv.alpha * lp.value + inv.beta * lm.value, atol=1e-13)
    assert pseudo_inner(n.value, n.value) == pytest.approx(1.0)


def test_frame_derivative_reconstruction(helix):
    t = 0.4
    inv = curve_invariants(helix, t)
    _, lp, lm, n = frame_jets(helix, t)
    np.testing.assert_allclose(lp.du().value, inv.kappa1 * lp.value + 2 * inv.kappa3 * n.value, atol=1e-13)
    np.testing.assert_allclose(lm.du().value, -inv.kappa1 * lm.value + 2 * inv.kappa2 * n.value, atol=1e-13)
    np.testing.assert_allclose(n.du().value, inv.kappa2 * lp.value + inv.kappa3 * lm.value, atol=1e-13)


@pytest.mark.parametrize("gamma, tag", [
    (("0", "u", "0"), CausalCharacter.SPACELIKE),
    (("u", "0", "0"), CausalCharacter.TIMELIKE),
    (("u", "u", "0"), CausalCharacter.LIGHTLIKE),
])
def test_causal_character(gamma, tag):
    c = FramedCurve.from_strings(gamma, ("1", "1", "0"), ("1", "-1", "0"), (0, 1))
    assert curve_causal_character(curve_invariants(c, 0.5)) is tag


def test_adapted_rescale_closed_form(helix):
    t = np.linspace(0.0, 2.0, 41)
    fr = adapted_rescale(helix, t)
    np.testing.assert_allclose(fr.c, np.exp(K * (t - t[0])), rtol=1e-8)
    assert np.max(np.abs(fr.kappa1_bar)) <= 1e-6
    # the rescaled frame is still a lightcone pair with the same pairing
    lp, lm = fr.lplus.T, fr.lminus.T
    assert np.max(np.abs(pseudo_inner(lp, lp))) < 1e-12
    assert np.max(np.abs(pseudo_inner(lp, lm) + 2)) < 1e-12


def test_rescaled_invariants_transform(helix):
    # with c = exp(K t) the rescaled frame is (1, cos, sin), (1, -cos, -sin)
    bar = FramedCurve.from_strings(("0", "2*sin(u)", "-2*cos(u)"), ("1", "cos(u)", "sin(u)"),
                                   ("1", "-cos(u)", "-sin(u)"), (0, 2))
    for t in (0.3, 1.2):
        c = math.exp(K * t)
        a, b = curve_invariants(helix, t), curve_invariants(bar, t)
        assert b.kappa1 == pytest.approx(0, abs=1e-14)
        assert b.kappa2 == pytest.approx(c * a.kappa2)
        assert b.kappa3 == pytest.approx(a.kappa3 / c)
        assert b.alpha == pytest.approx(c * a.alpha)
        assert b.beta == pytest.approx(a.beta / c)
        np.testing.assert_allclose(frame_jets(bar, t)[3].value, frame_jets(helix, t)[3].value, atol=1e-14)


@pytest.mark.parametrize("grid", [[0.0, 1.0], [0.0, 0.5, 0.4, 1.0], [[0.0, 1.0, 2.0]]])
def test_quadrature_errors(helix, grid):
    with pytest.raises(QuadratureError):
        adapted_rescale(helix, grid)


def test_frame_violation():
    bad = FramedCurve.from_strings(("0", "u", "0"), ("1", "1", "0"), ("1", "1", "0"), (0, 1))
    with pytest.raises(FrameViolation):
        curve_invariants(bad, 0.5)
    with pytest.raises(ValidationError):
        validate_curve(bad)


def test_velocity_off_frame_plane():
    c = FramedCurve.from_strings(("0", "0", "u"), ("1", "1", "0"), ("1", "-1", "0"), (0, 1))
    with pytest.raises(ValidationError) as info:
        validate_curve(c)
    assert not isinstance(info.value, FrameViolation)
