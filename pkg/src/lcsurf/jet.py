"""Bivariate truncated Taylor jets.

A :class:`Jet` carries a scalar function of ``(u, v)`` together with all of
its partial derivatives up to a fixed total order.  Slots hold the *raw*
partial derivatives ``d^(i+j) f / du^i dv^j`` (no factorial scaling), so
formulas written against a jet read exactly like their ∂-notation.

Slot layout is graded by total degree and independent of the order::

    (0,0) | (1,0) (0,1) | (2,0) (1,1) (0,2) | (3,0) (2,1) (1,2) (0,3) | ...

which makes truncation a slice.  The coefficient array has shape
``(n_slots, *shape)`` so a single jet can hold a vector (shape ``(3,)``) or a
whole grid of base points (shape ``(nu, nv)``) and all arithmetic is
vectorised over the trailing axes.
"""

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError

#: Default truncation order.
ORDER = 3

#: Values closer to zero than this are rejected as divisors.
TINY = 1e-300


def n_slots(order):
    return (order + 1) * (order + 2) // 2


def slot(i, j):
    n = i + j
    return n * (n + 1) // 2 + j


@lru_cache(maxsize=None)
def multi_indices(order):
    """List of ``(i, j)`` pairs in slot order."""
    return tuple((n - j, j) for n in range(order + 1) for j in range(n + 1))


@lru_cache(maxsize=None)
def _product_table(order):
    # Leibniz rule on raw partials:
    #   d^(i,j)(fg) = sum C(i,k) C(j,l) f_(k,l) g_(i-k,j-l)
    idx = multi_indices(order)
    left, right, weights, targets = [], [], [], []
    for p, (i1, j1) in enumerate(idx):
        for q, (i2, j2) in enumerate(idx):
            if i1 + j1 + i2 + j2 <= order:
                left.append(p)
                right.append(q)
                targets.append(slot(i1 + i2, j1 + j2))
                weights.append(math.comb(i1 + i2, i1) * math.comb(j1 + j2, j1))
    scatter = np.zeros((n_slots(order), len(left)))
    scatter[targets, np.arange(len(left))] = weights
    return np.array(left), np.array(right), scatter


@lru_cache(maxsize=None)
def _shift_table(order, axis):
    # slots of d/du (or d/dv) of an order-`order` jet, as an order-1 lower jet
    di, dj = (1, 0) if axis == "u" else (0, 1)
    return np.array([slot(i + di, j + dj) for i, j in multi_indices(order - 1)])


class Jet:
    """Order-``order`` jet of a scalar field in ``(u, v)``."""

    __slots__ = ("coef", "order")
    __array_priority__ = 1000

    def __init__(self, coef, order=None):
        coef = np.asarray(coef, dtype=float)
        if order is None:
            order = {n_slots(k): k for k in range(16)}.get(coef.shape[0])
            if order is None:
                raise ValueError(f"{coef.shape[0]} slots is not a valid jet size")
        elif coef.shape[0] != n_slots(order):
            raise ValueError(f"order {order} needs {n_slots(order)} slots, got {coef.shape[0]}")
        self.coef = coef
        self.order = order

    # -- construction --------------------------------------------------------

    @classmethod
    def constant(cls, value, order=ORDER):
        value = np.asarray(value, dtype=float)
        coef = np.zeros((n_slots(order),) + value.shape)
        coef[0] = value
        return cls(coef, order)

    @classmethod
    def variable(cls, value, axis, order=ORDER):
        """The coordinate function ``u`` (or ``v``) based at ``value``."""
        jet = cls.constant(value, order)
        if order >= 1:
            jet.coef[slot(1, 0) if axis == "u" else slot(0, 1)] = 1.0
        return jet

    @classmethod
    def from_partials(cls, partials, order=ORDER, shape=()):
        """Build a jet from a mapping ``{(i, j): value}``; missing slots are 0."""
        coef = np.zeros((n_slots(order),) + tuple(shape))
        for (i, j), val in partials.items():
            if i + j <= order:
                coef[slot(i, j)] = val
        return cls(coef, order)

    @staticmethod
    def stack(items, order=None):
        """Stack jets (or plain numbers) along a new leading component axis."""
        jets = [x for x in items if isinstance(x, Jet)]
        if order is None:
            order = min(j.order for j in jets)
        parts = [as_jet(x, order) for x in items]
        shape = np.broadcast_shapes(*(p.coef.shape[1:] for p in parts))
        coef = np.stack([np.broadcast_to(p.coef, (p.coef.shape[0],) + shape) for p in parts], axis=1)
        return Jet(coef, order)

    # -- access --------------------------------------------------------------

    @property
    def shape(self):
        return self.coef.shape[1:]

    @property
    def value(self):
        return self.coef[0]

    def d(self, i=0, j=0):
        """Raw partial derivative ``d^(i+j) f / du^i dv^j`` at the base point."""
        if i + j > self.order:
            raise ValueError(f"derivative ({i},{j}) exceeds jet order {self.order}")
        return self.coef[slot(i, j)]

    def partials(self):
        return {ij: self.coef[k] for k, ij in enumerate(multi_indices(self.order))}

    def __getitem__(self, index):
        if not isinstance(index, tuple):
            index = (index,)
        return Jet(self.coef[(slice(None),) + index], self.order)

    def __len__(self):
        return self.shape[0]

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.coef[: n_slots(order)], order)

    def du(self):
        """Jet of ``df/du``; one order lower."""
        return self._shift("u")

    def dv(self):
        return self._shift("v")

    def diff(self, axis):
        return self._shift(axis)

    def _shift(self, axis):
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        return Jet(self.coef[_shift_table(self.order, axis)], self.order - 1)

    def __repr__(self):
        return f"Jet(order={self.order}, shape={self.shape}, value={self.value!r})"

    # -- arithmetic ----------------------------------------------------------

    def _pair(self, other):
        # two coefficient arrays that broadcast against each other; numpy
        # aligns trailing axes but the slot axis has to stay in front
        if not isinstance(other, Jet):
            other = Jet.constant(other, self.order)
        order = min(self.order, other.order)
        a, b = self.coef[: n_slots(order)], other.coef[: n_slots(order)]
        nd = max(a.ndim, b.ndim)
        a = a.reshape(a.shape[:1] + (1,) * (nd - a.ndim) + a.shape[1:])
        b = b.reshape(b.shape[:1] + (1,) * (nd - b.ndim) + b.shape[1:])
        return a, b, order

    def __add__(self, other):
        a, b, order = self._pair(other)
        return Jet(a + b, order)

    __radd__ = __add__

    def __sub__(self, other):
        a, b, order = self._pair(other)
        return Jet(a - b, order)

    def __rsub__(self, other):
        a, b, order = self._pair(other)
        return Jet(b - a, order)

    def __neg__(self):
        return Jet(-self.coef, self.order)

    def __pos__(self):
        return self

    def __mul__(self, other):
        a, b, order = self._pair(other)
        if not isinstance(other, Jet):
            return Jet(a * b[:1], order)
        if order == 0:
            return Jet(a * b, 0)
        left, right, scatter = _product_table(order)
        prod = a[left] * b[right]
        return Jet(np.tensordot(scatter, prod, axes=1), order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        other = np.asarray(other, dtype=float)
        if np.any(np.abs(other) < TINY):
            raise DomainError("division by zero")
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, (float, np.floating)) and float(n).is_integer():
            n = int(n)
        if not isinstance(n, (int, np.integer)):
            raise TypeError("jets support integer powers only")
        n = int(n)
        if n < 0:
            return (self ** (-n)).reciprocal()
        result = Jet.constant(np.ones(self.shape), self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- composition with univariate functions ------------------------------

    def compose(self, derivatives):
        """Return ``f(self)`` given ``[f(x0), f'(x0), ..., f^(order)(x0)]``."""
        out = np.zeros_like(self.coef)
        out[0] = derivatives[0]
        if self.order == 0:
            return Jet(out, 0)
        h = Jet(self.coef.copy(), self.order)
        h.coef[0] = 0.0
        power = h
        for k in range(1, self.order + 1):
            out = out + (derivatives[k] / math.factorial(k)) * power.coef
            if k < self.order:
                power = power * h
        return Jet(out, self.order)

    def reciprocal(self):
        x = self.value
        if np.any(np.abs(x) < TINY):
            raise DomainError("division by zero")
        derivs = [(-1) ** k * math.factorial(k) / x ** (k + 1) for k in range(self.order + 1)]
        return self.compose(derivs)

    def sin(self):
        s, c = np.sin(self.value), np.cos(self.value)
        cycle = (s, c, -s, -c)
        return self.compose([cycle[k % 4] for k in range(self.order + 1)])

    def cos(self):
        s, c = np.sin(self.value), np.cos(self.value)
        cycle = (c, -s, -c, s)
        return self.compose([cycle[k % 4] for k in range(self.order + 1)])

    def tan(self):
        return self.sin() / self.cos()

    def exp(self):
        e = np.exp(self.value)
        return self.compose([e] * (self.order + 1))

    def log(self):
        x = self.value
        if np.any(x <= 0):
            raise DomainError("log of a non-positive value")
        derivs = [np.log(x)] + [(-1) ** (k - 1) * math.factorial(k - 1) / x ** k
                                for k in range(1, self.order + 1)]
        return self.compose(derivs)

    def sqrt(self):
        x = self.value
        if np.any(x < 0) or (self.order > 0 and np.any(x == 0)):
            raise DomainError("sqrt outside its domain")
        derivs = []
        coeff = 1.0
        for k in range(self.order + 1):
            derivs.append(coeff * x ** (0.5 - k))
            coeff *= 0.5 - k
        return self.compose(derivs)


def as_jet(x, order=ORDER):
    if isinstance(x, Jet):
        return x.truncate(order) if x.order > order else x
    return Jet.constant(x, order)


def _dispatch(name, fallback):
    def func(x):
        if isinstance(x, Jet):
            return getattr(x, name)()
        return fallback(x)

    func.__name__ = name
    func.__doc__ = f"{name} of a jet or a plain number/array."
    return func


def _checked_log(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("log of a non-positive value")
    return np.log(x)


def _checked_sqrt(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("sqrt outside its domain")
    return np.sqrt(x)


sin = _dispatch("sin", np.sin)
cos = _dispatch("cos", np.cos)
tan = _dispatch("tan", np.tan)
exp = _dispatch("exp", np.exp)
log = _dispatch("log", _checked_log)
sqrt = _dispatch("sqrt", _checked_sqrt)


def value_of(x):
    """Value slot of a jet, or the argument itself."""
    return x.value if isinstance(x, Jet) else x
