"""Lightlike points: null vectors, classification, locus tracing and limit probes.

At a lightlike point one of ``a1``, ``b1`` vanishes.  The analysis is
written for ``a1 = 0``; when it is ``b1`` that vanishes the invariants are
first re-expressed in the swapped frame ``(w, v, -m)``.
"""

from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from . import expr
from .curvature import curvature_bundle
from .errors import (DegenerateLocusPoint, NotLightlike, PathNotLightlikeAtTarget,
                     SeedNotNearLocus)
from .jet import Jet
from .surface import as_invariants, default_tol, invariants_at, stratify

KINDS = ("cuspidal_edge", "swallowtail", "cuspidal_butterfly", "cuspidal_lips",
         "cuspidal_beaks", "undetermined")


class NullVector(NamedTuple):
    eta_u: float
    eta_v: float
    residual: float


@dataclass
class LightlikeKind:
    tag: str
    degenerate: bool
    witnesses: Dict[str, float] = field(default_factory=dict)
    swapped: bool = False


def _require_lightlike(inv, tol):
    st = stratify(inv, tol=tol)
    if st.tag != "lightlike":
        raise NotLightlike(f"point is {st.tag}, not lightlike (lambda~ = {st.lambda_tilde:.3g})")
    return st


def null_vector(obj, u0=None, v0=None, tol=None):
    """Null direction ``eta = c2 d/du - c1 d/dv`` at a lightlike point.

    ``residual`` is the value of the induced quadratic form on ``eta``,
    which vanishes at a lightlike point.
    """
    inv = as_invariants(obj, u0, v0)
    _require_lightlike(inv, tol)
    a1, b1, c1, c2 = (float(getattr(inv, k).value) for k in ("a1", "b1", "c1", "c2"))
    e1, e2 = c2, -c1
    residual = e1 ** 2 * (c1 ** 2 - 4 * a1 * b1) + e2 ** 2 * c2 ** 2 + 2 * e1 * e2 * c1 * c2
    return NullVector(e1, e2, residual)


def classification_tol(b1, c1, c2):
    """Scale-aware threshold for "non-zero" in the classification criteria."""
    return 1e-7 * (1 + abs(b1)) * (1 + abs(c1) + abs(c2)) ** 3


def _eta(f, c1, c2):
    return c2 * f.du() - c1 * f.dv()


def criterion_polynomials(inv):
    """The first, second and third order criterion expressions in ``a1, c1, c2``.

    Only meaningful in a frame where ``a1`` vanishes at the point.
    """
    a, c1j, c2j = inv.a1, inv.c1, inv.c2
    d = a.d
    c1, c2 = float(c1j.value), float(c2j.value)
    c1u, c1v, c2u, c2v = (float(x) for x in (c1j.d(1, 0), c1j.d(0, 1), c2j.d(1, 0), c2j.d(0, 1)))
    c1uu, c1uv, c1vv = (float(c1j.d(*ij)) for ij in ((2, 0), (1, 1), (0, 2)))
    c2uu, c2uv, c2vv = (float(c2j.d(*ij)) for ij in ((2, 0), (1, 1), (0, 2)))
    a1u, a1v = float(d(1, 0)), float(d(0, 1))
    a1uu, a1uv, a1vv = float(d(2, 0)), float(d(1, 1)), float(d(0, 2))
    a1uuu, a1uuv, a1uvv, a1vvv = (float(d(*ij)) for ij in ((3, 0), (2, 1), (1, 2), (0, 3)))

    p1 = a1v * c1 - a1u * c2
    bu = a1v * c1u - a1uu * c2 - a1u * c2u + a1uv * c1
    bv = a1vv * c1 + a1v * c1v - a1u * c2v - a1uv * c2
    p2 = c2 * bu - c1 * bv
    p3 = ((c2 * c2u - c1 * c2v) * bu
          + (c1 * c1v - c2 * c1u) * bv
          + c2 ** 2 * (2 * a1uv * c1u + a1v * c1uu - a1uuu * c2 - 2 * a1uu * c2u
                       - a1u * c2uu + a1uuv * c1)
          + c1 ** 2 * (a1vvv * c1 + 2 * a1vv * c1v + a1v * c1vv - 2 * a1uv * c2v
                       - a1u * c2vv - a1uvv * c2)
          - 2 * c1 * c2 * (a1uvv * c1 + a1vv * c1u + a1uv * c1v + a1v * c1uv - a1uu * c2v
                           - a1u * c2uv - a1uuv * c2 - a1uv * c2u))
    hess_disc = a1uu * a1vv - a1uv ** 2
    beaks = 2 * a1uv * c1 * c2 - a1uu * c2 ** 2 - a1vv * c1 ** 2
    return {"p1": p1, "p2": p2, "p3": p3, "hessian_a1": hess_disc, "beaks": beaks}


def directional_witnesses(inv):
    """``eta lambda``, ``eta eta lambda``, ``eta eta eta lambda`` and ``det Hess(lambda)``.

    Computed by applying ``eta = c2 d/du - c1 d/dv`` (with variable
    coefficients) to the jet of ``lambda~ = -4 a1 b1``.
    """
    lam = -4.0 * inv.a1 * inv.b1
    c1, c2 = inv.c1, inv.c2
    out = {}
    f = lam
    for k, name in enumerate(("eta_lambda", "eta2_lambda", "eta3_lambda"), start=1):
        if f.order == 0:
            break
        f = _eta(f, c1, c2)
        out[name] = float(f.value)
    if lam.order >= 2:
        out["hessian_det"] = float(lam.d(2, 0) * lam.d(0, 2) - lam.d(1, 1) ** 2)
    return out


def classify_lightlike(obj, u0=None, v0=None, tol=None):
    """Classify a lightlike point by the jet criteria.

    Returns a :class:`LightlikeKind` whose ``witnesses`` hold the criterion
    polynomials (``p1``, ``p2``, ``p3``, ``hessian_a1``, ``beaks``), the
    directional derivatives of ``lambda~`` along ``eta`` and the threshold
    ``tol_cls`` they were compared against.
    """
    inv = as_invariants(obj, u0, v0)
    _require_lightlike(inv, tol)
    swapped = abs(float(inv.a1.value)) > abs(float(inv.b1.value))
    work = inv.swapped() if swapped else inv
    b1, c1, c2 = (float(getattr(work, k).value) for k in ("b1", "c1", "c2"))
    tcls = classification_tol(b1, c1, c2)
    poly = criterion_polynomials(work)
    wit = dict(poly)
    wit.update(directional_witnesses(work))
    wit["tol_cls"] = tcls
    a1 = work.a1
    degenerate = max(abs(float(a1.value)), abs(float(a1.d(1, 0))), abs(float(a1.d(0, 1)))) <= tcls
    nz = lambda x: abs(x) > tcls
    if not degenerate:
        if nz(poly["p1"]):
            tag = "cuspidal_edge"
        elif nz(poly["p2"]):
            tag = "swallowtail"
        elif nz(poly["p3"]):
            tag = "cuspidal_butterfly"
        else:
            tag = "undetermined"
    else:
        h = poly["hessian_a1"]
        if h > tcls:
            tag = "cuspidal_lips"
        elif h < -tcls and nz(poly["beaks"]):
            tag = "cuspidal_beaks"
        else:
            tag = "undetermined"
    return LightlikeKind(tag, degenerate, wit, swapped)


# -- locus tracing ------------------------------------------------------------

class Locus(NamedTuple):
    points: np.ndarray  # (n, 2)
    closed: bool
    stop_reason: str


def _lambda_value(surface, p):
    inv = invariants_at(surface, p[0], p[1], order=1)
    return float(-4.0 * inv.a1.value * inv.b1.value)


def _lambda_and_grad(surface, p):
    inv = invariants_at(surface, p[0], p[1], order=2)
    lam = -4.0 * inv.a1 * inv.b1
    return float(lam.value), np.array([float(lam.d(1, 0)), float(lam.d(0, 1))]), inv


def _correct(surface, p, grad, reach, xtol):
    g = grad / np.linalg.norm(grad)
    f = lambda s: _lambda_value(surface, p + s * g)
    lo, hi = -reach, reach
    flo, fhi = f(lo), f(hi)
    f0 = f(0.0)
    if f0 == 0.0:
        return p
    # prefer the bracket on the side closest to the current point
    if np.sign(f0) != np.sign(fhi) and np.sign(f0) != np.sign(flo):
        lo, hi = (0.0, hi) if abs(fhi) < abs(flo) else (lo, 0.0)
    elif np.sign(f0) != np.sign(fhi):
        lo = 0.0
    elif np.sign(f0) != np.sign(flo):
        hi = 0.0
    else:
        return None
    s = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    return p + s * g


def trace_lightlike_locus(surface, seed, step=0.05, max_steps=200, xtol=1e-13):
    """March along the curve ``lambda~ = 0`` starting near ``seed``.

    Predictor: a step along the tangent ``(-lambda_v, lambda_u)``.
    Corrector: a bracketed root solve for ``lambda~`` along the gradient
    within ``+-step``.  Stops at the domain boundary, after ``max_steps``
    points, or when the trace returns to its start.

    Raises
    ------
    SeedNotNearLocus
        If no zero of ``lambda~`` lies within ``step`` of the seed along the
        gradient direction.
    DegenerateLocusPoint
        If the gradient of ``lambda~`` vanishes on the trace.
    """
    p = np.asarray(seed, dtype=float)
    lam, grad, inv = _lambda_and_grad(surface, p)
    gtol = float(default_tol(inv))
    if np.linalg.norm(grad) <= gtol:
        if abs(lam) > gtol:
            raise SeedNotNearLocus(f"lambda~ = {lam:.3g} is stationary at the seed {tuple(p)}")
        raise DegenerateLocusPoint(f"grad lambda~ vanishes at the seed {tuple(p)}")
    q = _correct(surface, p, grad, step, xtol)
    if q is None:
        raise SeedNotNearLocus(f"no lightlike point within {step} of {tuple(p)} "
                               f"(lambda~ = {lam:.3g})")
    points = [q]
    tangent_prev = None
    (ua, ub), (va, vb) = surface.domain
    inside = lambda x: ua <= x[0] <= ub and va <= x[1] <= vb
    reason = "max_steps"
    closed = False
    while len(points) < max_steps:
        p = points[-1]
        lam, grad, inv = _lambda_and_grad(surface, p)
        gn = np.linalg.norm(grad)
        if gn <= float(default_tol(inv)):
            raise DegenerateLocusPoint(f"grad lambda~ vanishes at {tuple(p)}")
        tangent = np.array([-grad[1], grad[0]]) / gn
        if tangent_prev is not None and tangent @ tangent_prev < 0:
            tangent = -tangent
        pred = p + step * tangent
        if not inside(pred):
            reason = "boundary"
            break
        _, gpred, _ = _lambda_and_grad(surface, pred)
        nxt = _correct(surface, pred, gpred, step, xtol)
        if nxt is None:
            raise DegenerateLocusPoint(f"lost the locus after {tuple(p)}")
        if not inside(nxt):
            reason = "boundary"
            break
        if len(points) > 2 and np.linalg.norm(nxt - points[0]) < step / 2:
            reason, closed = "closed", True
            break
        points.append(nxt)
        tangent_prev = tangent
    return Locus(np.array(points), closed, reason)


# -- limit probes -------------------------------------------------------------

class Verdict(NamedTuple):
    kind: str  # converges-to-0 | converges-to-nonzero | diverges | undetermined
    limit: Optional[float] = None


class ProbeRow(NamedTuple):
    t: float
    lambda_tilde: float
    K_hat: float
    H_hat: float
    K: Optional[float]
    H: Optional[float]


@dataclass
class ProbeReport:
    rows: List[ProbeRow]
    verdicts: Dict[str, Verdict]
    t_target: float


#: Divergence threshold for probe verdicts.
DIVERGENCE = 1e6


def verdict(values, ratio, zero_tol=1e-6, conv_tol=1e-6):
    """Judge the limit of a sequence sampled on a geometric approach.

    ``ratio`` is the geometric ratio of the step sequence; the limit
    estimate removes the leading linear error term.
    """
    vals = np.array([v for v in values if v is not None and np.isfinite(v)], dtype=float)
    if len(vals) < 3:
        return Verdict("undetermined")
    tail = np.abs(vals[-5:])
    if tail[-1] > DIVERGENCE and len(tail) >= 5 and np.all(np.diff(tail) > 0):
        return Verdict("diverges")
    last, prev = vals[-1], vals[-2]
    scale = 1.0 + abs(last)
    if abs(last - prev) <= conv_tol * scale:
        limit = (last - ratio * prev) / (1.0 - ratio)
        if abs(limit) <= zero_tol:
            return Verdict("converges-to-0", 0.0)
        return Verdict("converges-to-nonzero", float(limit))
    return Verdict("undetermined")


def parse_path(u_src, v_src):
    """Parse a path ``(u(t), v(t))``."""
    return (expr.parse_expr(u_src, variables=("t",)), expr.parse_expr(v_src, variables=("t",)))


def _path_point(path, t):
    env = {"t": Jet.constant(float(t), 0)}
    return tuple(float(expr.eval_jet(node, None, None, 0, variables=env).value) for node in path)


def curvature_limit_probe(surface, path, t_target, samples=24, h0=0.1, ratio=0.5, side=-1):
    """Sample curvatures on ``t_k = t_target + side * h0 * ratio**k``.

    Verdicts are reported for ``lambda_tilde``, ``K_hat``, ``H_hat``, ``K``
    and ``H``.  A bounded ``H`` must tend to zero; a bounded ``K`` may tend
    to zero or to a non-zero constant.

    Raises
    ------
    PathNotLightlikeAtTarget
        If the path does not end at a lightlike point.
    """
    if isinstance(path[0], str):
        path = parse_path(*path)
    u_t, v_t = _path_point(path, t_target)
    st = stratify(surface, u_t, v_t)
    if st.tag != "lightlike":
        raise PathNotLightlikeAtTarget(
            f"path ends at ({u_t:.6g}, {v_t:.6g}) which is {st.tag}")
    rows = []
    for k in range(samples):
        t = t_target + side * h0 * ratio ** k
        u0, v0 = _path_point(path, t)
        b = curvature_bundle(surface, u0, v0)
        rows.append(ProbeRow(t, float(b.lambda_tilde), float(b.K_hat), float(b.H_hat), b.K, b.H))
    verdicts = {}
    for name in ProbeRow._fields[1:]:
        verdicts[name] = verdict([getattr(r, name) for r in rows], ratio)
    return ProbeReport(rows, verdicts, t_target)
