"""Vector algebra of Lorentz-Minkowski 3-space.

Vectors are anything indexable along a leading axis of length 3: plain
numpy arrays of shape ``(3, ...)`` or vector-valued :class:`~lcsurf.jet.Jet`
objects.  The signature is ``(-, +, +)``.
"""

from enum import Enum
from typing import NamedTuple

import numpy as np

from .jet import Jet

#: Relative zero tolerance used when none is given.
DEFAULT_TOL = 1e-9


class CausalCharacter(str, Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    ZERO = "zero"

    def __str__(self):
        return self.value


class Delta4Pair(NamedTuple):
    """A pair of lightcone vectors with ``<v, w> = -2``."""

    v: np.ndarray
    w: np.ndarray


def mvec(x1, x2, x3):
    """Build a 3-vector from components."""
    if any(isinstance(c, Jet) for c in (x1, x2, x3)):
        return Jet.stack([x1, x2, x3])
    return np.array([x1, x2, x3], dtype=float)


def _stack(parts):
    if any(isinstance(p, Jet) for p in parts):
        return Jet.stack(parts)
    return np.stack(np.broadcast_arrays(*parts))


def pseudo_inner(x, y):
    """Pseudo inner product ``-x1 y1 + x2 y2 + x3 y3``."""
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def pseudo_norm(x):
    return np.sqrt(np.abs(pseudo_inner(x, x)))


def wedge(x, y):
    """Lorentzian cross product.

    Expands the formal determinant with first row ``(-e1, e2, e3)``, so that
    ``<z, x ^ y> = det(z, x, y)`` for every ``z``.
    """
    return _stack([
        -(x[1] * y[2] - x[2] * y[1]),
        x[2] * y[0] - x[0] * y[2],
        x[0] * y[1] - x[1] * y[0],
    ])


def default_tol(x):
    """Zero tolerance scaled to the size of ``x``."""
    scale = np.max(np.abs(np.asarray(x, dtype=float)))
    return DEFAULT_TOL * max(1.0, scale ** 2)


def causal_character(x, tol=None):
    """Classify a single vector as spacelike, timelike, lightlike or zero."""
    x = np.asarray(x, dtype=float)
    if tol is None:
        tol = default_tol(x)
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    if np.max(np.abs(x)) <= tol:
        return CausalCharacter.ZERO
    q = pseudo_inner(x, x)
    if q > tol:
        return CausalCharacter.SPACELIKE
    if q < -tol:
        return CausalCharacter.TIMELIKE
    return CausalCharacter.LIGHTLIKE


def delta4_residuals(pair):
    """Return ``(<v,v>, <w,w>, <v,w> + 2)``; all zero exactly on the pair manifold."""
    v, w = pair
    return pseudo_inner(v, v), pseudo_inner(w, w), pseudo_inner(v, w) + 2.0


def in_lightcone(x, tol=None):
    return causal_character(x, tol) is CausalCharacter.LIGHTLIKE


def in_hyperbolic_plane(x, tol=DEFAULT_TOL):
    """Membership of the unit hyperbolic plane ``<x,x> = -1``."""
    return abs(pseudo_inner(x, x) + 1.0) <= tol


def in_de_sitter(x, tol=DEFAULT_TOL):
    """Membership of de Sitter space ``<x,x> = 1``."""
    return abs(pseudo_inner(x, x) - 1.0) <= tol
