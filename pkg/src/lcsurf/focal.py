"""Focal surfaces: degenerate critical points of the distance-squared family.

The offset ``mu`` along ``n_hat`` for which ``d^2(p) = <X - nu, X - nu>`` has
a degenerate critical point solves

    A mu^2 + 2 B mu + C = 0,   A = L^N^ - c2 M^^2,  B = H^ (unsigned),  C = c2 lambda~

and each root gives a sheet ``F = X - mu n_hat``.  The sheet shares the
frame ``{v, w, m}`` of ``X``; its invariants follow from differentiating
``F`` and involve the first (and, for curvatures, second) derivatives of
``mu``, obtained here by Newton iteration in jet arithmetic.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np

from ._tol import base_tol
from .curvature import CurvatureBundle, bundle_from_invariants, curvature_bundle, hat_jets
from .errors import (BranchUnavailable, DomainError, DoubleRootNoJet,
                     StencilCrossesBranchCut)
from .jet import Jet
from .lightlike import classify_lightlike
from .minkowski import pseudo_inner
from .surface import as_invariants, default_tol, invariants_at, stratify

BRANCHES = ("plus", "minus")

#: Root separation below which two sheets are considered to touch.
BRANCH_CUT = 1e-6

_EPS = np.finfo(float).eps


class MuRoot(NamedTuple):
    """One root of the focal quadratic.

    ``label`` is ``plus``/``minus`` for a genuine quadratic and ``linear``
    when the leading coefficient vanishes; ``sheet`` is always ``plus`` or
    ``minus`` and names the quadratic branch the root continues.
    """

    value: float
    label: str
    sheet: str
    jet: Optional[Jet]
    double_root: bool


@dataclass
class MuRoots:
    roots: List[MuRoot]
    case: str  # quadratic | linear | complex | empty
    degenerate: bool
    coefficients: tuple  # (A, B, C) values

    def get(self, branch):
        for r in self.roots:
            if r.sheet == branch:
                return r
        return None

    @property
    def values(self):
        return [r.value for r in self.roots]


def focal_coefficients(inv):
    """Jets of ``(A, B, C)``; ``A`` and ``B`` are one order below ``inv``."""
    hj = hat_jets(inv.a1, inv.b1, inv.c1, inv.c2, inv.e1, inv.f1, inv.g1, inv.f2, inv.g2)
    return hj.K_raw, hj.H_raw, inv.c2 * hj.lambda_tilde


def solve_quadratic(A, B, C, tol):
    """Real roots of ``A x^2 + 2 B x + C`` labelled by branch (vectorised).

    Returns ``(plus, minus, case)`` arrays; missing roots are NaN.  ``case``
    is 0 (quadratic), 1 (linear), 2 (complex) or 3 (empty).
    """
    A, B, C = (np.asarray(x, dtype=float) for x in (A, B, C))
    A, B, C = np.broadcast_arrays(A, B, C)
    plus = np.full(A.shape, np.nan)
    minus = np.full(A.shape, np.nan)
    case = np.full(A.shape, 3)
    tol = np.broadcast_to(tol, A.shape)

    quad = np.abs(A) > tol
    D = B * B - A * C
    # rounding noise in D is relative to the terms that formed it
    slack = 64 * _EPS * (B * B + np.abs(A * C))
    D = np.where(np.abs(D) <= slack, 0.0, D)
    real = quad & (D >= 0)
    case[quad & (D < 0)] = 2
    root = np.sqrt(np.where(real, D, 0.0))
    sgn = np.where(B >= 0, 1.0, -1.0)
    q = -(B + sgn * root)
    with np.errstate(divide="ignore", invalid="ignore"):
        big = q / A
        small = np.where(q != 0, C / q, 0.0)
    # q/A is the root with sign choice +sqrt when B >= 0, -sqrt otherwise
    plus = np.where(real, np.where(B >= 0, big, small), plus)
    minus = np.where(real, np.where(B >= 0, small, big), minus)
    case[real] = 0

    lin = ~quad & (np.abs(B) > tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        lroot = -C / (2.0 * B)
    # as A -> 0 the finite root is the minus branch when B > 0
    plus = np.where(lin & (B < 0), lroot, plus)
    minus = np.where(lin & (B > 0), lroot, minus)
    case[lin] = 1
    return plus, minus, case


def mu_jet(A, B, C, mu0, order=2):
    """Jet of the root of ``A mu^2 + 2 B mu + C`` through ``mu0``.

    Newton iteration on jets; each step doubles the number of correct
    derivative orders.
    """
    order = min(order, A.order, B.order, C.order)
    A, B, C = A.truncate(order), B.truncate(order), C.truncate(order)
    mu = Jet.constant(np.asarray(mu0, dtype=float), order)
    for _ in range(order + 2):
        Q = A * mu * mu + 2.0 * B * mu + C
        dQ = 2.0 * A * mu + 2.0 * B
        mu = mu - Q / dQ
    return mu


def _double_root(A, B, mu, tol):
    return np.abs(2.0 * A * mu + 2.0 * B) <= tol


def mu_roots(obj, u0=None, v0=None, tol=None, jet_order=2):
    """Roots of the focal quadratic at a point, with jets where available.

    A double root has no well-defined jet; it is returned with
    ``jet=None`` and ``double_root=True``.  Callers that need derivatives
    raise :class:`DoubleRootNoJet` in that case.
    """
    inv = as_invariants(obj, u0, v0)
    if tol is None:
        tol = float(default_tol(inv))
    Aj, Bj, Cj = focal_coefficients(inv)
    A, B, C = float(Aj.value), float(Bj.value), float(Cj.value)
    plus, minus, case = solve_quadratic(A, B, C, tol)
    case = int(case)
    roots = []
    for sheet, val in (("plus", float(plus)), ("minus", float(minus))):
        if np.isnan(val):
            continue
        label = sheet if case == 0 else "linear"
        double = bool(_double_root(A, B, val, tol))
        jet = None
        if not double and jet_order > 0:
            try:
                jet = mu_jet(Aj, Bj, Cj, val, jet_order)
            except DomainError:
                double = True
        roots.append(MuRoot(val, label, sheet, jet, double))
    name = ("quadratic", "linear", "complex", "empty")[case]
    return MuRoots(roots, name, case == 3, (A, B, C))


def _pick(roots, branch, near):
    if near is not None:
        if not roots.roots:
            raise BranchUnavailable("no focal root at this point")
        return min(roots.roots, key=lambda r: abs(r.value - near))
    r = roots.get(branch)
    if r is None:
        raise BranchUnavailable(f"branch {branch!r} does not exist here ({roots.case} case)")
    return r


def focal_point(obj, u0=None, v0=None, branch="plus", near=None):
    """``F = X - mu n_hat`` for the chosen root.

    ``branch`` picks the pointwise ``plus``/``minus`` root; alternatively
    ``near`` selects the root closest to a reference value.
    """
    inv = as_invariants(obj, u0, v0)
    r = _pick(mu_roots(inv, jet_order=0), branch, near)
    return inv.X.value - r.value * inv.n_hat


@dataclass
class FocalSheet:
    branch: str
    mu: Any
    F: Any
    inv: Dict[str, Any]
    bundle: CurvatureBundle
    jets: Dict[str, Jet] = field(default_factory=dict, repr=False)
    residual: Optional[float] = None


def barred_jets(inv, mu):
    """Invariants of ``F = X - mu n_hat`` as jets (``mu`` a jet)."""
    a1, b1, c1, c2 = inv.a1, inv.b1, inv.c1, inv.c2
    e1, f1, g1, e2, f2, g2 = inv.e1, inv.f1, inv.g1, inv.e2, inv.f2, inv.g2
    mu_u, mu_v = mu.du(), mu.dv()
    return {
        "a1": a1 * (1.0 + mu * e1 + mu_u) + mu * a1.du(),
        "b1": b1 * (1.0 + mu * e1 - mu_u) - mu * b1.du(),
        "c1": c1 + 2.0 * mu * (a1 * g1 - b1 * f1),
        "a2": a1 * (mu * e2 + mu_v) + mu * a1.dv(),
        "b2": -b1 * (-mu * e2 + mu_v) - mu * b1.dv(),
        "c2": c2 + 2.0 * mu * (a1 * g2 - b1 * f2),
    }


def sheet_from_mu(inv, mu, branch="plus", tol=None):
    """Assemble a :class:`FocalSheet` from a ``mu`` jet (works batched)."""
    bj = barred_jets(inv, mu)
    vals = {k: j.value for k, j in bj.items()}
    frame = (inv.v.value, inv.w.value) if inv.has_frame else (None, None)
    if tol is None:
        tol = base_tol() * (1.0 + np.abs(vals["a1"]) + np.abs(vals["b1"]) + np.abs(vals["c2"]))
    bundle = None
    if bj["a1"].order >= 1:
        bundle = bundle_from_invariants(bj["a1"], bj["b1"], bj["c1"], bj["c2"],
                                        inv.e1, inv.f1, inv.g1, inv.f2, inv.g2, *frame, tol=tol)
    F = None
    if inv.has_frame:
        F = inv.X.value - mu.value * inv.n_hat
    return FocalSheet(branch, mu.value, F, vals, bundle, bj)


def focal_invariants(obj, u0=None, v0=None, branch="plus", near=None):
    """Invariants and curvatures of a focal sheet at a point.

    Raises
    ------
    BranchUnavailable
        If the requested root does not exist.
    DoubleRootNoJet
        At a double root, where the derivatives of ``mu`` are undefined.
    """
    inv = as_invariants(obj, u0, v0)
    r = _pick(mu_roots(inv), branch, near)
    if r.jet is None:
        raise DoubleRootNoJet(f"mu = {r.value:.6g} is a double root; its derivatives are undefined")
    sheet = sheet_from_mu(inv, r.jet, r.sheet)
    return sheet


def focal_curvatures(obj, u0=None, v0=None, branch="plus", near=None):
    """Curvature bundle of the focal sheet (barred quantities)."""
    return focal_invariants(obj, u0, v0, branch, near).bundle


# -- finite-difference oracle -------------------------------------------------

def focal_invariant_oracle(surface, u0, v0, branch="plus", near=None, h=1e-5):
    """Barred invariants by decomposing finite-difference derivatives of ``F``.

    ``F`` is evaluated at the centre and the four axis neighbours; at each
    neighbour the root closest to the centre's ``mu`` is used.  Returns the
    six values keyed ``a1`` ... ``c2``.

    Raises
    ------
    StencilCrossesBranchCut
        If the two roots come within the stencil's resolution of each other.
    """
    # centre and its four axis neighbours in one batched evaluation
    us = np.array([u0, u0 + h, u0 - h, u0, u0])
    vs = np.array([v0, v0, v0, v0 + h, v0 - h])
    batch = invariants_at(surface, us, vs, order=2)
    centre = batch.at(0)
    roots = mu_roots(centre, jet_order=0)
    r = _pick(roots, branch, near)
    mu0 = r.value

    def F_at(k):
        inv = batch.at(k)
        rr = mu_roots(inv, jet_order=0)
        vals = rr.values
        if not vals:
            raise StencilCrossesBranchCut(f"no focal root at ({us[k]:.6g}, {vs[k]:.6g})")
        if len(vals) == 2 and abs(vals[0] - vals[1]) < max(BRANCH_CUT, 1e3 * h):
            raise StencilCrossesBranchCut(f"focal roots collide near ({us[k]:.6g}, {vs[k]:.6g})")
        mu = min(vals, key=lambda x: abs(x - mu0))
        return inv.X.value - mu * inv.n_hat

    if len(roots.values) == 2 and abs(roots.values[0] - roots.values[1]) < max(BRANCH_CUT, 1e3 * h):
        raise StencilCrossesBranchCut(f"focal roots collide at ({u0:.6g}, {v0:.6g})")
    Fu = (F_at(1) - F_at(2)) / (2 * h)
    Fv = (F_at(3) - F_at(4)) / (2 * h)
    v, w, m = centre.v.value, centre.w.value, centre.m.value
    return {
        "a1": -0.5 * pseudo_inner(Fu, w), "b1": -0.5 * pseudo_inner(Fu, v), "c1": pseudo_inner(Fu, m),
        "a2": -0.5 * pseudo_inner(Fv, w), "b2": -0.5 * pseudo_inner(Fv, v), "c2": pseudo_inner(Fv, m),
    }


# -- branch continuation over a grid -----------------------------------------

@dataclass
class FocalGrid:
    """Continued focal roots on a parameter grid.

    ``mu[branch]`` holds the continued root values (NaN where the branch is
    missing); ``branch_cut`` marks points where the sheets touch.
    """

    mu: Dict[str, np.ndarray]
    branch_cut: np.ndarray
    case: np.ndarray
    sheets: Dict[str, FocalSheet]
    double_root: Dict[str, np.ndarray]


def continue_branches(plus, minus):
    """Relabel pointwise roots so each sheet varies continuously.

    The labels at grid index ``(0, 0)`` are kept.  The sweep runs down the
    first column (varying the first index), then along each row, matching
    roots to the nearest previous values.  The last valid values are carried
    across points where roots are missing.
    """
    plus = np.asarray(plus, dtype=float)
    minus = np.asarray(minus, dtype=float)
    nu, nv = plus.shape
    out_p = np.full_like(plus, np.nan)
    out_m = np.full_like(minus, np.nan)

    def assign(idx, ref):
        p, m = plus[idx], minus[idx]
        rp, rm = ref
        if np.isnan(rp) and np.isnan(rm):
            out_p[idx], out_m[idx] = p, m
        elif not np.isnan(p) and not np.isnan(m):
            keep = _dist(p, rp) + _dist(m, rm)
            swap = _dist(m, rp) + _dist(p, rm)
            out_p[idx], out_m[idx] = (m, p) if swap < keep else (p, m)
        else:
            x = p if not np.isnan(p) else m
            if np.isnan(x):
                pass
            elif _dist(x, rp) <= _dist(x, rm):
                out_p[idx] = x
            else:
                out_m[idx] = x
        return (out_p[idx] if not np.isnan(out_p[idx]) else rp,
                out_m[idx] if not np.isnan(out_m[idx]) else rm)

    ref = (np.nan, np.nan)
    column_refs = []
    for i in range(nu):
        ref = assign((i, 0), ref)
        column_refs.append(ref)
    for i in range(nu):
        ref = column_refs[i]
        for j in range(1, nv):
            ref = assign((i, j), ref)
    return out_p, out_m


def _unit(jet):
    """Coefficients of the constant jet 1, shaped like ``jet``."""
    out = np.zeros_like(jet.coef)
    out[0] = 1.0
    return out


def _dist(a, b):
    return np.inf if np.isnan(b) else abs(a - b)


def focal_grid(surface, U, V, inv=None, jet_order=2):
    """Both focal sheets over a grid, with branch continuation.

    ``inv`` may be a pre-computed batched invariant field for ``U``, ``V``.
    """
    if inv is None:
        inv = invariants_at(surface, U, V)
    tol = default_tol(inv)
    Aj, Bj, Cj = focal_coefficients(inv)
    A, B, C = Aj.value, Bj.value, Cj.value
    with np.errstate(invalid="ignore"):
        plus, minus, case = solve_quadratic(A, B, C, tol)
    mp, mm = continue_branches(plus, minus)
    with np.errstate(invalid="ignore"):
        cut = np.abs(mp - mm) < BRANCH_CUT
    sheets, doubles = {}, {}
    for name, mu0 in (("plus", mp), ("minus", mm)):
        with np.errstate(invalid="ignore"):
            double = _double_root(A, B, mu0, tol)
        doubles[name] = double | np.isnan(mu0)
        # keep the Newton step away from undefined points; they are masked later
        # (placeholder quadratic mu^2 - 1 with simple root 1)
        safe = np.where(doubles[name], 1.0, mu0)
        A_s = Jet(np.where(doubles[name], _unit(Aj), Aj.coef), Aj.order)
        B_s = Jet(np.where(doubles[name], 0.0, Bj.coef), Bj.order)
        C_s = Jet(np.where(doubles[name], -_unit(Cj), Cj.coef), Cj.order)
        with np.errstate(all="ignore"):
            mu = mu_jet(A_s, B_s, C_s, safe, jet_order)
            mu.coef[:, doubles[name]] = np.nan
            mu.coef[0] = mu0
            sheets[name] = sheet_from_mu(inv, mu, name)
    return FocalGrid({"plus": mp, "minus": mm}, cut, case, sheets, doubles)


# -- relationship checks ------------------------------------------------------

class RelationVerdict(NamedTuple):
    name: str
    status: str  # holds | fails | not-applicable
    left: Any = None
    right: Any = None
    note: str = ""


def relation_checks(obj, u0=None, v0=None, tol=None):
    """Check the relations between strata of ``X`` and of its focal sheets.

    (i) at a degenerate lightlike point the ``mu = 0`` sheet has ``a1 = 0``;
    (ii) where ``a1 g2 = b1 f2``: ``c2 = 0`` iff the sheet's ``c2`` is 0;
    (iii) at a lightlike point with ``H^ = 0`` on the ``mu = 0`` sheet:
    sheet ``H^ = 0`` iff ``(mu_u - 1) mu_u a1_u = 0``;
    (iv) likewise with ``K^ = 0``: sheet ``K^ = 0`` iff
    ``(1 - mu_u) mu_u a1_u f2 = 0``.

    Lightlike points where ``b1`` vanishes are analysed in the swapped
    frame.
    """
    inv = as_invariants(obj, u0, v0)
    if tol is None:
        tol = float(default_tol(inv))
    st = stratify(inv, tol=tol)
    lightlike = st.tag == "lightlike"
    work = inv
    if lightlike and abs(float(inv.a1.value)) > abs(float(inv.b1.value)):
        work = inv.swapped()
    roots = mu_roots(work, tol=tol)
    zero = [r for r in roots.roots if abs(r.value) <= tol]
    out = []
    zero_is = lambda x: bool(abs(x) <= tol)

    # (i)
    if not lightlike:
        out.append(RelationVerdict("i", "not-applicable", note="point is not lightlike"))
    else:
        kind = classify_lightlike(inv, tol=tol)
        if not kind.degenerate:
            out.append(RelationVerdict("i", "not-applicable", note="lightlike point is non-degenerate"))
        elif not zero:
            out.append(RelationVerdict("i", "fails", note="no mu = 0 root at a degenerate lightlike point"))
        else:
            r = zero[0]
            mu_u = float(r.jet.du().value) if r.jet is not None else 0.0
            a1 = float(work.a1.value)
            a1_bar = a1 * (1 + r.value * float(work.e1.value) + mu_u) + r.value * float(work.a1.d(1, 0))
            status = "holds" if zero_is(a1_bar) else "fails"
            out.append(RelationVerdict("i", status, a1_bar, 0.0))

    # (ii)
    k = float((work.a1 * work.g2 - work.b1 * work.f2).value)
    if not zero_is(k):
        out.append(RelationVerdict("ii", "not-applicable", note="a1 g2 != b1 f2"))
    elif not roots.roots:
        out.append(RelationVerdict("ii", "not-applicable", note="no focal root"))
    else:
        c2 = float(work.c2.value)
        for r in roots.roots:
            c2_bar = c2 + 2 * r.value * k
            status = "holds" if zero_is(c2) == zero_is(c2_bar) else "fails"
            out.append(RelationVerdict("ii", status, c2, c2_bar, note=f"sheet {r.sheet}"))

    # (iii) and (iv)
    b = curvature_bundle(work, tol=tol)
    for name, quantity, field_name in (("iii", b.H_hat, "H_hat"), ("iv", b.K_hat, "K_hat")):
        if not lightlike:
            out.append(RelationVerdict(name, "not-applicable", note="point is not lightlike"))
            continue
        if not zero_is(quantity):
            out.append(RelationVerdict(name, "not-applicable", note=f"{field_name} != 0"))
            continue
        if not zero:
            out.append(RelationVerdict(name, "not-applicable", note="no mu = 0 root"))
            continue
        r = zero[0]
        if r.jet is None:
            out.append(RelationVerdict(name, "not-applicable", note="mu = 0 is a double root"))
            continue
        sheet = sheet_from_mu(work, r.jet, r.sheet, tol=tol)
        mu_u = float(r.jet.du().value)
        a1u = float(work.a1.d(1, 0))
        if name == "iii":
            left = float(sheet.bundle.H_hat)
            right = (mu_u - 1) * mu_u * a1u
        else:
            left = float(sheet.bundle.K_hat)
            right = (1 - mu_u) * mu_u * a1u * float(work.f2.value)
        status = "holds" if zero_is(left) == zero_is(right) else "fails"
        out.append(RelationVerdict(name, status, left, right))
    return out
