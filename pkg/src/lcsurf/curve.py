"""Lightcone framed curves and their adapted frames.

A curve is given by three vector expressions in the single parameter ``u``:
the curve ``gamma`` and the two lightcone frame fields ``lplus`` and
``lminus`` with ``(lplus, lminus)`` on the pair manifold.
"""

from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from scipy.integrate import cumulative_simpson

from . import expr
from .errors import FrameViolation, QuadratureError, ValidationError
from .jet import Jet
from .minkowski import CausalCharacter, pseudo_inner, wedge

PARAM = "u"

#: Largest pair-manifold residual tolerated before evaluation refuses.
FRAME_TOL = 1e-6


@dataclass(frozen=True)
class FramedCurve:
    gamma: Tuple[expr.Node, expr.Node, expr.Node]
    lplus: Tuple[expr.Node, expr.Node, expr.Node]
    lminus: Tuple[expr.Node, expr.Node, expr.Node]
    domain: Tuple[float, float]
    name: str = "curve"

    @classmethod
    def from_strings(cls, gamma, lplus, lminus, domain, name="curve"):
        parse = lambda comps: tuple(expr.parse_expr(s, variables=(PARAM,)) for s in comps)
        return cls(parse(gamma), parse(lplus), parse(lminus), tuple(map(float, domain)), name)


class CurveInvariants(NamedTuple):
    kappa1: float
    kappa2: float
    kappa3: float
    alpha: float
    beta: float


class AdaptedFrame(NamedTuple):
    t: np.ndarray
    c: np.ndarray
    lplus: np.ndarray  # (n, 3)
    lminus: np.ndarray  # (n, 3)
    kappa1_bar: np.ndarray


def _vector_jet(components, t, order):
    env = {PARAM: Jet.variable(np.asarray(t, dtype=float), "u", order)}
    return Jet.stack([expr.eval_jet(c, None, None, order, variables=env) for c in components])


def frame_jets(curve, t, order=1):
    """Jets of ``gamma``, ``lplus``, ``lminus`` and ``n = -(1/2) lplus ^ lminus`` at ``t``."""
    g = _vector_jet(curve.gamma, t, order)
    lp = _vector_jet(curve.lplus, t, order)
    lm = _vector_jet(curve.lminus, t, order)
    n = wedge(lp, lm) * -0.5
    return g, lp, lm, n


def curve_invariants(curve, t):
    """Frame curvatures and the velocity coefficients at parameter ``t``.

    Returns
    -------
    CurveInvariants
        ``kappa1 = -<lplus', lminus>/2``, ``kappa2 = -<n', lminus>/2``,
        ``kappa3 = -<n', lplus>/2``, ``alpha = -<gamma', lminus>/2`` and
        ``beta = -<gamma', lplus>/2``.
    """
    g, lp, lm, n = frame_jets(curve, t)
    vals = [np.asarray(x.value) for x in (lp, lm)]
    r = max(abs(pseudo_inner(vals[0], vals[0])), abs(pseudo_inner(vals[1], vals[1])),
            abs(pseudo_inner(vals[0], vals[1]) + 2.0))
    if r > FRAME_TOL:
        raise FrameViolation(f"frame leaves the pair manifold at t={t} (residual {r:.3g})",
                             condition="delta4", point=(t,))
    lm0, lp0 = lm.value, lp.value
    d = lambda x: x.du().value
    return CurveInvariants(
        kappa1=float(-0.5 * pseudo_inner(d(lp), lm0)),
        kappa2=float(-0.5 * pseudo_inner(d(n), lm0)),
        kappa3=float(-0.5 * pseudo_inner(d(n), lp0)),
        alpha=float(-0.5 * pseudo_inner(d(g), lm0)),
        beta=float(-0.5 * pseudo_inner(d(g), lp0)),
    )


def validate_curve(curve, samples=9, tol=1e-8):
    """Check the framed-curve conditions at evenly spaced parameters."""
    for t in np.linspace(*curve.domain, samples):
        g, lp, lm, n = frame_jets(curve, t)
        lp0, lm0 = lp.value, lm.value
        res = (pseudo_inner(lp0, lp0), pseudo_inner(lm0, lm0), pseudo_inner(lp0, lm0) + 2.0)
        if max(map(abs, res)) > tol:
            raise FrameViolation(f"frame leaves the pair manifold at t={t:.6g}",
                                 condition="delta4", point=(t,))
        if abs(pseudo_inner(g.du().value, n.value)) > tol:
            raise ValidationError(f"velocity leaves the frame plane at t={t:.6g}",
                                  condition="gamma' in span(l+, l-)", point=(t,))
    return curve


def curve_causal_character(inv, tol=1e-9):
    ab = inv.alpha * inv.beta
    if inv.alpha ** 2 + inv.beta ** 2 <= tol:
        return CausalCharacter.ZERO
    if ab < -tol:
        return CausalCharacter.SPACELIKE
    if ab > tol:
        return CausalCharacter.TIMELIKE
    return CausalCharacter.LIGHTLIKE


def _stencil_derivative(y, t):
    """Fourth-order five-point derivative on a uniform grid (one-sided at the ends)."""
    h = t[1] - t[0]
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 5:
        return np.gradient(y, t, edge_order=2)
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    fwd = np.array([-25, 48, -36, 16, -3]) / (12 * h)
    sec = np.array([-3, -10, 18, -6, 1]) / (12 * h)
    d[0] = fwd @ y[:5]
    d[1] = sec @ y[:5]
    d[-1] = -fwd @ y[::-1][:5]
    d[-2] = -sec @ y[::-1][:5]
    return d


def adapted_rescale(curve, t_grid):
    """Rescale the frame so that its first curvature vanishes.

    Uses ``c(t) = exp(int_{t0}^t kappa1)`` with the integral taken by
    cumulative Simpson quadrature over ``t_grid``; returns the rescaled
    frame ``lplus / c`` and ``c * lminus`` at every grid point together with
    a numerical recomputation of the new first curvature (five-point
    stencil on ``c``).
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or len(t) < 3:
        raise QuadratureError("adapted rescaling needs at least 3 grid points")
    if np.any(np.diff(t) <= 0):
        raise QuadratureError("grid must be strictly increasing")
    inv = [curve_invariants(curve, ti) for ti in t]
    k1 = np.array([x.kappa1 for x in inv])
    c = np.exp(cumulative_simpson(k1, x=t, initial=0.0))

    _, lp, lm, _ = frame_jets(curve, t)
    lp0 = np.moveaxis(lp.value, 0, -1)
    lm0 = np.moveaxis(lm.value, 0, -1)
    lp_dot = np.moveaxis(lp.du().value, 0, -1)
    lp_bar = lp0 / c[:, None]
    lm_bar = lm0 * c[:, None]

    if np.allclose(np.diff(t), t[1] - t[0], rtol=1e-9, atol=0):
        c_dot = _stencil_derivative(c, t)
    else:
        c_dot = np.gradient(c, t, edge_order=2)
    lp_bar_dot = lp_dot / c[:, None] - (c_dot / c ** 2)[:, None] * lp0
    k1_bar = -0.5 * pseudo_inner(lp_bar_dot.T, lm_bar.T)
    return AdaptedFrame(t, c, lp_bar, lm_bar, k1_bar)
