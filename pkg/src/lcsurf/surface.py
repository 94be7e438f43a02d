"""Lightcone framed surfaces and their basic invariants.

A surface is a map ``X(u, v)`` together with two lightcone frame fields
``v(u, v)``, ``w(u, v)`` with ``<v, v> = <w, w> = 0`` and ``<v, w> = -2``.
With ``m = -(1/2) v ^ w`` the moving frame ``{v, w, m}`` gives

    X_u = a1 v + b1 w + c1 m        v_u = e1 v + 2 g1 m
    X_v = a2 v + b2 w + c2 m        w_u = -e1 w + 2 f1 m
                                    m_u = f1 v + g1 w

and likewise for ``v``-derivatives with ``e2, f2, g2``.  Throughout the
package the frame is normalised so that ``a2 = b2 = 0``; this is checked
when a surface is built.
"""

from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import expr
from ._tol import base_tol
from .errors import DomainError, ValidationError
from .jet import Jet
from .minkowski import pseudo_inner, wedge

#: Jet order used for surface expressions.  ``a1`` loses one order to the
#: ``u``-derivative in ``X_u`` and must still carry third derivatives.
SURFACE_ORDER = 4

SCALARS = ("a1", "b1", "c1", "a2", "b2", "c2", "e1", "f1", "g1", "e2", "f2", "g2")

STRATA = ("spacelike", "timelike", "lightlike", "singular_S1", "singular_S2", "degenerate_other")


Domain = Tuple[Tuple[float, float], Tuple[float, float]]


@dataclass(frozen=True)
class SurfaceDef:
    """Parametric surface with its lightcone frame, each component an AST."""

    X: Tuple[expr.Node, expr.Node, expr.Node]
    v: Tuple[expr.Node, expr.Node, expr.Node]
    w: Tuple[expr.Node, expr.Node, expr.Node]
    domain: Domain
    name: str = "surface"

    @classmethod
    def from_strings(cls, X, v, w, domain, name="surface"):
        parse = lambda comps: tuple(expr.parse_expr(s) for s in comps)
        (u0, u1), (v0, v1) = domain
        return cls(parse(X), parse(v), parse(w), ((float(u0), float(u1)), (float(v0), float(v1))), name)

    def sources(self):
        """Component source text keyed ``X.x1`` ... ``w.x3``."""
        out = {}
        for label in ("X", "v", "w"):
            for k, node in enumerate(getattr(self, label), start=1):
                out[f"{label}.x{k}"] = expr.to_source(node)
        return out

    def contains(self, u0, v0):
        (ua, ub), (va, vb) = self.domain
        return ua <= u0 <= ub and va <= v0 <= vb


@dataclass
class InvariantField:
    """The twelve basic invariants as jets, plus the frame they came from.

    Every jet may hold a single base point or a whole grid (the trailing
    shape).  ``X``, ``v``, ``w`` and ``m`` are vector jets with a leading
    component axis; they are ``None`` for synthetic fields assembled
    directly from invariant values.
    """

    a1: Jet
    b1: Jet
    c1: Jet
    a2: Jet
    b2: Jet
    c2: Jet
    e1: Jet
    f1: Jet
    g1: Jet
    e2: Jet
    f2: Jet
    g2: Jet
    X: Optional[Jet] = None
    v: Optional[Jet] = None
    w: Optional[Jet] = None
    m: Optional[Jet] = None
    point: Optional[Tuple] = None
    swapped_frame: bool = False

    @property
    def shape(self):
        return self.a1.shape

    @property
    def has_frame(self):
        return self.v is not None

    @property
    def lambda_tilde(self):
        """Signed area density ``-4 a1 b1`` as a jet."""
        return -4.0 * self.a1 * self.b1

    @property
    def n_hat(self):
        """Unnormalised normal ``X_u ^ m = -a1 v + b1 w`` (values only)."""
        self._need_frame()
        a1, b1 = self.a1.value, self.b1.value
        return -a1 * self.v.value + b1 * self.w.value

    def _need_frame(self):
        if not self.has_frame:
            raise ValueError("this invariant field carries no frame vectors")

    def values(self):
        """Value slots of the twelve invariants keyed by name."""
        return {name: getattr(self, name).value for name in SCALARS}

    def at(self, index):
        """Restrict a grid field to a single index (or sub-grid)."""
        if not isinstance(index, tuple):
            index = (index,)
        kw = {name: getattr(self, name)[index] for name in SCALARS}
        for name in ("X", "v", "w", "m"):
            jet = getattr(self, name)
            kw[name] = None if jet is None else jet[(slice(None),) + index]
        point = None
        if self.point is not None:
            point = tuple(np.asarray(p)[index] for p in self.point)
        return InvariantField(**kw, point=point, swapped_frame=self.swapped_frame)

    def swapped(self):
        """The same surface seen through the frame ``(w, v, -m)``.

        Exchanges the roles of ``a1`` and ``b1``; used to analyse lightlike
        points where ``b1`` rather than ``a1`` vanishes.
        """
        kw = dict(
            a1=self.b1, b1=self.a1, c1=-self.c1,
            a2=self.b2, b2=self.a2, c2=-self.c2,
            e1=-self.e1, f1=-self.g1, g1=-self.f1,
            e2=-self.e2, f2=-self.g2, g2=-self.f2,
            X=self.X, v=self.w, w=self.v, m=None if self.m is None else -self.m,
        )
        return InvariantField(**kw, point=self.point, swapped_frame=not self.swapped_frame)

    def replace(self, **changes):
        return replace(self, **changes)

    @classmethod
    def from_expressions(cls, u0=0.0, v0=0.0, order=3, **exprs):
        """Synthetic field from expression strings (or numbers) for each invariant.

        Missing invariants are zero.  Useful for exercising criteria on hand
        built jets without constructing a surface.
        """
        unknown = set(exprs) - set(SCALARS)
        if unknown:
            raise ValueError(f"unknown invariants: {sorted(unknown)}")
        kw = {}
        for name in SCALARS:
            src = exprs.get(name, 0.0)
            if isinstance(src, Jet):
                kw[name] = src
            else:
                kw[name] = expr.eval_jet(expr.parse_expr(str(src)), u0, v0, order)
        return cls(**kw, point=(u0, v0))


class PointStratum(NamedTuple):
    tag: str
    lambda_tilde: float


# -- evaluation ---------------------------------------------------------------

def frame_jets(surface, u0, v0, order=SURFACE_ORDER):
    """Vector jets of ``X``, ``v`` and ``w`` at ``(u0, v0)`` (scalars or arrays)."""
    out = []
    for comps in (surface.X, surface.v, surface.w):
        out.append(Jet.stack([expr.eval_jet(c, u0, v0, order) for c in comps]))
    return tuple(out)


def _from_frame(X, v, w, point):
    m = wedge(v, w) * -0.5
    Xu, Xv = X.du(), X.dv()
    vu, vv, wu, wv = v.du(), v.dv(), w.du(), w.dv()
    kw = dict(
        a1=-0.5 * pseudo_inner(Xu, w), b1=-0.5 * pseudo_inner(Xu, v), c1=pseudo_inner(Xu, m),
        a2=-0.5 * pseudo_inner(Xv, w), b2=-0.5 * pseudo_inner(Xv, v), c2=pseudo_inner(Xv, m),
        e1=0.5 * pseudo_inner(v, wu), f1=0.5 * pseudo_inner(wu, m), g1=0.5 * pseudo_inner(vu, m),
        e2=0.5 * pseudo_inner(v, wv), f2=0.5 * pseudo_inner(wv, m), g2=0.5 * pseudo_inner(vv, m),
    )
    return InvariantField(**kw, X=X, v=v, w=w, m=m, point=point)


def invariants_at(surface, u0, v0, order=SURFACE_ORDER):
    """Basic invariants of ``surface`` at ``(u0, v0)``.

    ``u0``/``v0`` may be arrays; the returned field is then batched over
    their broadcast shape.  Derivatives come from jet arithmetic only.

    Raises
    ------
    DomainError
        If any component cannot be evaluated at (one of) the point(s).
    """
    X, v, w = frame_jets(surface, u0, v0, order)
    return _from_frame(X, v, w, (u0, v0))


def invariant_grid(surface, U, V, order=SURFACE_ORDER):
    """Batched :func:`invariants_at` that tolerates failing points.

    Returns
    -------
    field : InvariantField
        Batched over ``U.shape``; failed points hold NaN.
    failed : dict
        Maps grid index tuples to the :class:`DomainError` raised there.
    """
    U, V = np.broadcast_arrays(np.asarray(U, dtype=float), np.asarray(V, dtype=float))
    try:
        with np.errstate(all="ignore"):
            X, v, w = frame_jets(surface, U, V, order)
        return _from_frame(X, v, w, (U, V)), {}
    except DomainError:
        pass
    # fall back to point-by-point evaluation and patch the failures with NaN
    failed = {}
    safe_U, safe_V = U.copy(), V.copy()
    for idx in np.ndindex(U.shape):
        try:
            frame_jets(surface, U[idx], V[idx], order)
        except DomainError as exc:
            failed[idx] = exc
    ok = [idx for idx in np.ndindex(U.shape) if idx not in failed]
    if not ok:
        return None, failed
    for idx in failed:
        safe_U[idx], safe_V[idx] = U[ok[0]], V[ok[0]]
    X, v, w = frame_jets(surface, safe_U, safe_V, order)
    for jet in (X, v, w):
        for idx in failed:
            jet.coef[(slice(None), slice(None)) + idx] = np.nan
    return _from_frame(X, v, w, (U, V)), failed


def as_invariants(obj, u0=None, v0=None):
    """Accept either a ready :class:`InvariantField` or a surface plus point."""
    if isinstance(obj, InvariantField):
        return obj
    if u0 is None or v0 is None:
        raise TypeError("a surface needs a point (u0, v0)")
    return invariants_at(obj, u0, v0)


# -- validation ---------------------------------------------------------------

def validate_surface(surface, probes=5, tol=1e-8):
    """Check the frame conditions on a ``probes x probes`` grid.

    Raises
    ------
    ValidationError
        Naming the violated condition and the first offending point.
    """
    (ua, ub), (va, vb) = surface.domain
    if not all(np.isfinite([ua, ub, va, vb])) or not (ua < ub and va < vb):
        raise ValidationError(f"invalid domain {surface.domain}", condition="domain")
    us = np.linspace(ua, ub, probes)
    vs = np.linspace(va, vb, probes)
    for u0 in us:
        for v0 in vs:
            try:
                inv = invariants_at(surface, u0, v0, order=2)
            except DomainError as exc:
                raise ValidationError(f"cannot evaluate the surface at ({u0:.6g}, {v0:.6g}): {exc}",
                                      condition="evaluation", point=(u0, v0)) from exc
            v, w = inv.v.value, inv.w.value
            checks = [
                ("<v,v> = 0", pseudo_inner(v, v)),
                ("<w,w> = 0", pseudo_inner(w, w)),
                ("<v,w> = -2", pseudo_inner(v, w) + 2.0),
            ]
            scale = 1.0 + abs(inv.a1.value) + abs(inv.b1.value) + abs(inv.c2.value)
            for label, r in checks:
                if abs(r) > tol:
                    raise ValidationError(
                        f"frame condition {label} fails at ({u0:.6g}, {v0:.6g}): residual {r:.3g}",
                        condition=label, point=(u0, v0))
            for label in ("a2", "b2"):
                r = getattr(inv, label).value
                if abs(r) > tol * scale:
                    raise ValidationError(
                        f"normalisation {label} = 0 fails at ({u0:.6g}, {v0:.6g}): {label} = {r:.6g}",
                        condition=f"{label} = 0", point=(u0, v0))
    return surface


def build_surface(X, v, w, domain, name="surface", probes=5):
    """Parse the nine component expressions and validate the result."""
    return validate_surface(SurfaceDef.from_strings(X, v, w, domain, name), probes)


# -- per-point quantities -----------------------------------------------------

def default_tol(inv):
    a1, b1, c2 = (np.abs(getattr(inv, k).value) for k in ("a1", "b1", "c2"))
    return base_tol() * (1.0 + a1 + b1 + c2)


def integrability_residuals(obj, u0=None, v0=None):
    """The six compatibility residuals of the basic invariants.

    Zero (up to rounding) for a genuine framed surface.
    """
    inv = as_invariants(obj, u0, v0)
    a1, b1, c1, c2 = inv.a1, inv.b1, inv.c1, inv.c2
    e1, f1, g1, e2, f2, g2 = inv.e1, inv.f1, inv.g1, inv.e2, inv.f2, inv.g2
    val = lambda j: j.value
    d_u = lambda j: j.du().value
    d_v = lambda j: j.dv().value
    return np.array([
        d_v(a1) - (-val(a1) * val(e2) + val(c2) * val(f1) - val(c1) * val(f2)),
        d_v(b1) - (val(b1) * val(e2) + val(c2) * val(g1) - val(c1) * val(g2)),
        (d_v(c1) - d_u(c2)) + 2 * (val(a1) * val(g2) + val(b1) * val(f2)),
        (d_v(e1) - d_u(e2)) - 2 * (val(f1) * val(g2) - val(f2) * val(g1)),
        (d_v(f1) - d_u(f2)) - (val(e1) * val(f2) - val(e2) * val(f1)),
        (d_v(g1) - d_u(g2)) - (val(e2) * val(g1) - val(e1) * val(g2)),
    ])


def stratum_tags(obj, tol=None, u0=None, v0=None):
    """Vectorised stratum tags; returns ``(tags, lambda_tilde)`` arrays."""
    inv = as_invariants(obj, u0, v0)
    a1, b1, c2 = inv.a1.value, inv.b1.value, inv.c2.value
    lam = -4.0 * a1 * b1
    if tol is None:
        tol = default_tol(inv)
    ab = a1 ** 2 + b1 ** 2
    small_ab = ab <= tol
    small_c2 = np.abs(c2) <= tol
    tags = np.select(
        [small_ab & small_c2, small_ab, small_c2, lam > tol, lam < -tol],
        ["degenerate_other", "singular_S2", "singular_S1", "spacelike", "timelike"],
        default="lightlike",
    )
    return tags, lam


def stratify(obj, u0=None, v0=None, tol=None):
    """Causal type or singular stratum of a single point.

    The lightlike test treats both ``a1 = 0`` and ``b1 = 0`` alike since it
    only looks at ``lambda_tilde = -4 a1 b1``.
    """
    tags, lam = stratum_tags(obj, tol, u0, v0)
    return PointStratum(str(tags), float(lam))


def frame_identity_residuals(obj, u0=None, v0=None):
    """Max-norm residuals of ``v^m + v``, ``w^m - w``, ``<m,m> - 1`` and ``<n,n> + lambda``.

    ``n`` here is ``X_u ^ m`` computed from the stored vectors, so a
    corrupted ``m`` shows up in every residual.
    """
    inv = as_invariants(obj, u0, v0)
    inv._need_frame()
    v, w, m = inv.v.value, inv.w.value, inv.m.value
    Xu = inv.X.du().value
    n = wedge(Xu, m)
    lam = -4.0 * inv.a1.value * inv.b1.value
    return np.array([
        np.max(np.abs(wedge(v, m) + v), axis=0),
        np.max(np.abs(wedge(w, m) - w), axis=0),
        np.abs(pseudo_inner(m, m) - 1.0),
        np.abs(pseudo_inner(n, n) + lam),
    ])


def normal_decomposition_residual(obj, u0=None, v0=None):
    """Max-norm of ``X_u ^ X_v - (-B v + C w)`` with ``B = a1 c2``, ``C = b1 c2``."""
    inv = as_invariants(obj, u0, v0)
    inv._need_frame()
    Xu, Xv = inv.X.du().value, inv.X.dv().value
    B = inv.a1.value * inv.c2.value
    C = inv.b1.value * inv.c2.value
    return np.max(np.abs(wedge(Xu, Xv) - (-B * inv.v.value + C * inv.w.value)), axis=0)
