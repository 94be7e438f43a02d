"""Fundamental quantities, extended curvatures and principal curvatures.

The "hatted" quantities are rescalings by powers of the signed area density
``lambda~ = -4 a1 b1`` that stay finite where the induced metric degenerates:

    E~ = c1^2 - 4 a1 b1,  F~ = c1,  G~ = 1
    L^ = 2 a1 (b1_u - b1 e1 + c1 g1) - 2 b1 (a1_u + a1 e1 + c1 f1)
    M^ = 2 (a1 g1 - b1 f1),  N^ = 2 (a1 g2 - b1 f2)
    K^ = s (L^ N^ - c2 M^^2),  2 H^ = s (c2 L^ G~ - 2 c2 M^ F~ + N^ E~)

with ``s = sgn(c2)``.  Away from lightlike points the ordinary curvatures
are ``K = K^ / |lambda~|^2`` and ``H = H^ / |lambda~|^(3/2)``.

The principal-curvature and focal quadratics are written here in terms of
the unsigned products ``L^ N^ - c2 M^^2`` and ``(c2 L^ - ...)/2``.  For
``c2 > 0`` these agree with ``K^`` and ``H^``; for ``c2 < 0`` the unsigned
form is the one that keeps the roots real and continuous.
"""

from dataclasses import dataclass
from typing import Any, NamedTuple, Optional

import numpy as np

from .errors import ComplexPrincipal, DegeneratePrincipal, LightlikePoint, SingularPoint
from ._tol import base_tol
from .jet import value_of
from .minkowski import pseudo_inner, wedge
from .surface import as_invariants, default_tol


class HatJets(NamedTuple):
    """Jets of the hatted quantities; ``K_raw``/``H_raw`` are sign-free."""

    lambda_tilde: Any
    E_t: Any
    F_t: Any
    L_hat: Any
    M_hat: Any
    N_hat: Any
    K_raw: Any
    H_raw: Any


def hat_jets(a1, b1, c1, c2, e1, f1, g1, f2, g2):
    """Hatted quantities from invariant jets.

    ``L^`` consumes ``a1_u`` and ``b1_u``, so everything downstream of it is
    one jet order lower than the inputs.
    """
    lam = -4.0 * a1 * b1
    E = c1 * c1 + lam
    L = 2.0 * a1 * (b1.du() - b1 * e1 + c1 * g1) - 2.0 * b1 * (a1.du() + a1 * e1 + c1 * f1)
    M = 2.0 * (a1 * g1 - b1 * f1)
    N = 2.0 * (a1 * g2 - b1 * f2)
    K_raw = L * N - c2 * M * M
    H_raw = 0.5 * (c2 * L - 2.0 * c2 * M * c1 + N * E)
    return HatJets(lam, E, c1, L, M, N, K_raw, H_raw)


def c2_sign(c2):
    """``+1`` for ``c2 >= 0``, ``-1`` otherwise."""
    return np.where(np.asarray(c2) < 0, -1.0, 1.0)


@dataclass
class CurvatureBundle:
    """Curvature data at a point (or, batched, on a grid).

    ``K`` and ``H`` are ``None`` at a single point where ``|lambda~| <= tol``.
    On a grid they are arrays with NaN at such points.
    """

    E_t: Any
    F_t: Any
    G_t: Any
    n_hat: Any
    L_hat: Any
    M_hat: Any
    N_hat: Any
    lambda_tilde: Any
    K_hat: Any
    H_hat: Any
    K: Optional[Any]
    H: Optional[Any]
    sign: Any
    K_hat_raw: Any
    H_hat_raw: Any
    c1: Any
    c2: Any


def bundle_from_invariants(a1, b1, c1, c2, e1, f1, g1, f2, g2, v=None, w=None, tol=None):
    """Assemble a :class:`CurvatureBundle` from invariant jets.

    ``v`` and ``w`` are frame vector values used only for ``n_hat``.
    """
    hj = hat_jets(a1, b1, c1, c2, e1, f1, g1, f2, g2)
    vals = {k: np.asarray(value_of(x), dtype=float) for k, x in hj._asdict().items()}
    c1v = np.asarray(value_of(c1), dtype=float)
    c2v = np.asarray(value_of(c2), dtype=float)
    a1v, b1v = value_of(a1), value_of(b1)
    if tol is None:
        tol = base_tol() * (1.0 + np.abs(a1v) + np.abs(b1v) + np.abs(c2v))
    # c2 within tolerance of zero counts as non-negative, so rounding noise
    # on a singular sheet cannot flip the sign of K^ and H^
    sign = c2_sign(np.where(np.abs(c2v) <= tol, 0.0, c2v))
    lam = vals["lambda_tilde"]
    K_hat = sign * vals["K_raw"]
    H_hat = sign * vals["H_raw"]
    defined = np.abs(lam) > tol
    with np.errstate(divide="ignore", invalid="ignore"):
        K = np.where(defined, K_hat / np.abs(lam) ** 2, np.nan)
        H = np.where(defined, H_hat / np.abs(lam) ** 1.5, np.nan)
    if np.ndim(lam) == 0:
        K = float(K) if defined else None
        H = float(H) if defined else None
        sign = float(sign)
    n_hat = None
    if v is not None and w is not None:
        n_hat = -a1v * np.asarray(v) + b1v * np.asarray(w)
    return CurvatureBundle(
        E_t=vals["E_t"], F_t=c1v, G_t=np.ones_like(c1v), n_hat=n_hat,
        L_hat=vals["L_hat"], M_hat=vals["M_hat"], N_hat=vals["N_hat"],
        lambda_tilde=lam, K_hat=K_hat, H_hat=H_hat, K=K, H=H, sign=sign,
        K_hat_raw=vals["K_raw"], H_hat_raw=vals["H_raw"], c1=c1v, c2=c2v,
    )


def curvature_bundle(obj, u0=None, v0=None, tol=None):
    """Extended curvatures of a surface at a point (or over a batched field)."""
    inv = as_invariants(obj, u0, v0)
    if tol is None:
        tol = default_tol(inv)
    frame = (inv.v.value, inv.w.value) if inv.has_frame else (None, None)
    return bundle_from_invariants(inv.a1, inv.b1, inv.c1, inv.c2, inv.e1, inv.f1, inv.g1,
                                  inv.f2, inv.g2, *frame, tol=tol)


# -- principal curvatures -----------------------------------------------------

class PrincipalData(NamedTuple):
    kappa_hat_1: float
    kappa_hat_2: float
    V_hat_1: np.ndarray
    V_hat_2: np.ndarray
    branch: str


def principal(obj, u0=None, v0=None, tol=None):
    """Rescaled principal curvatures ``kappa^ = lambda~ |lambda~|^(1/2) kappa``.

    At regular points these are the roots of
    ``c2 k^2 - 2 H k + lambda~ K = 0`` (sign-free ``K``, ``H``).  Where
    ``c2`` vanishes the single limiting value ``K^/(2 H^)`` fills both slots.

    Raises
    ------
    LightlikePoint
        If ``|lambda~| <= tol``.
    DegeneratePrincipal
        At a singular point with ``H^ = 0``.
    ComplexPrincipal
        If the principal curvatures are not real.
    """
    inv = as_invariants(obj, u0, v0)
    if tol is None:
        tol = float(default_tol(inv))
    b = curvature_bundle(inv, tol=tol)
    lam, c2, c1 = float(b.lambda_tilde), float(b.c2), float(b.c1)
    if abs(lam) <= tol:
        raise LightlikePoint(f"lambda~ = {lam:.3g} is within tolerance of zero")
    K, H = float(b.K_hat_raw), float(b.H_hat_raw)
    if abs(c2) <= tol:
        if abs(H) <= tol:
            raise DegeneratePrincipal("principal curvature is 0/0 at this singular point")
        kappas = (K / (2.0 * H),) * 2
        branch = "singular_limit"
    else:
        disc = H * H - c2 * lam * K
        # a repeated root only up to rounding in the two products
        if abs(disc) <= 64 * np.finfo(float).eps * (H * H + abs(c2 * lam * K)):
            disc = 0.0
        if disc < 0:
            raise ComplexPrincipal(f"principal curvatures are complex (discriminant {disc:.3g})")
        root = np.sqrt(disc)
        kappas = ((H + root) / c2, (H - root) / c2)
        branch = "regular"
    M, N = float(b.M_hat), float(b.N_hat)
    vecs = [np.array([lam * N - c2 * k, -lam * M + k * c1]) for k in kappas]
    return PrincipalData(kappas[0], kappas[1], vecs[0], vecs[1], branch)


def principal_grid(bundle, tol):
    """Batched :func:`principal` values; NaN wherever the scalar version raises."""
    lam, c2 = np.asarray(bundle.lambda_tilde), np.asarray(bundle.c2)
    K, H = np.asarray(bundle.K_hat_raw), np.asarray(bundle.H_hat_raw)
    tol = np.broadcast_to(tol, lam.shape)
    with np.errstate(all="ignore"):
        disc = H * H - c2 * lam * K
        disc = np.where(np.abs(disc) <= 64 * np.finfo(float).eps * (H * H + np.abs(c2 * lam * K)),
                        0.0, disc)
        root = np.sqrt(np.where(disc < 0, np.nan, disc))
        k1 = (H + root) / c2
        k2 = (H - root) / c2
        limit = np.where(np.abs(H) > tol, K / (2.0 * H), np.nan)
    singular = np.abs(c2) <= tol
    k1 = np.where(singular, limit, k1)
    k2 = np.where(singular, limit, k2)
    bad = np.abs(lam) <= tol
    return np.where(bad, np.nan, k1), np.where(bad, np.nan, k2)


def principal_curvatures(obj, u0=None, v0=None, tol=None):
    """Ordinary principal curvatures ``kappa^ / (lambda~ |lambda~|^(1/2))``."""
    inv = as_invariants(obj, u0, v0)
    p = principal(inv, tol=tol)
    lam = float(-4.0 * inv.a1.value * inv.b1.value)
    scale = lam * np.sqrt(abs(lam))
    return p.kappa_hat_1 / scale, p.kappa_hat_2 / scale


def fundamental_forms(obj, u0=None, v0=None):
    """Plain first and second fundamental quantities straight from ``X``.

    The unit normal is ``sgn(c2) X_u ^ X_v / |X_u ^ X_v|``, which agrees with
    the normalised ``n_hat``.  Returns ``(E, F, G, L, M, N)``.
    """
    inv = as_invariants(obj, u0, v0)
    inv._need_frame()
    X = inv.X
    Xu, Xv = X.du().value, X.dv().value
    Xuu, Xuv, Xvv = X.d(2, 0), X.d(1, 1), X.d(0, 2)
    m = inv.m.value
    c2 = pseudo_inner(Xv, m)
    cross = wedge(Xu, Xv)
    nn = pseudo_inner(cross, cross)
    if np.any(np.abs(nn) <= 1e-300):
        raise SingularPoint("X_u ^ X_v vanishes")
    normal = c2_sign(c2) * cross / np.sqrt(np.abs(nn))
    return (pseudo_inner(Xu, Xu), pseudo_inner(Xu, Xv), pseudo_inner(Xv, Xv),
            pseudo_inner(Xuu, normal), pseudo_inner(Xuv, normal), pseudo_inner(Xvv, normal))


def weingarten_oracle(obj, u0=None, v0=None, tol=None):
    """Eigenvalues of ``II I^-1`` assembled from the plain fundamental forms.

    Independent of the invariant machinery: only ``X`` and ``m`` enter.
    Returned as a sorted pair; complex if the map has no real eigenvalues.
    """
    inv = as_invariants(obj, u0, v0)
    if tol is None:
        tol = float(default_tol(inv))
    lam = float(-4.0 * inv.a1.value * inv.b1.value)
    if abs(lam) <= tol:
        raise LightlikePoint(f"lambda~ = {lam:.3g} is within tolerance of zero")
    if abs(float(inv.c2.value)) <= tol:
        raise SingularPoint("c2 vanishes")
    E, F, G, L, M, N = (float(x) for x in fundamental_forms(inv))
    W = np.array([[L, M], [M, N]]) @ np.linalg.inv(np.array([[E, F], [F, G]]))
    tr, det = np.trace(W), np.linalg.det(W)
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        # larger-magnitude root first, the other from Vieta to avoid cancellation
        big = 0.5 * (tr + np.copysign(np.sqrt(disc), tr))
        roots = (big, det / big) if big != 0 else (0.0, 0.0)
        return tuple(sorted(float(x) for x in roots))
    r = np.sqrt(complex(-disc))
    return ((tr - r) / 2, (tr + r) / 2)
