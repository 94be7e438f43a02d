"""Built-in surfaces, curves and synthetic invariant fields.

``paper-example`` is the sphere-like mixed type surface

    X = (sin u, cos u sin v, cos u cos v),  v = (1, sin v, cos v),  w = (1, -sin v, -cos v)

on ``[0, 2 pi]^2``.  Its invariants are known in closed form, which makes it
the main regression target.  ``twisted-revolution`` is a second genuine
framed surface with non-trivial ``c1`` and ``e1``.
"""

import math

from .curve import FramedCurve
from .surface import InvariantField, SurfaceDef

TWO_PI = 2 * math.pi

PAPER_EXAMPLE = {
    "X": ("sin(u)", "cos(u)*sin(v)", "cos(u)*cos(v)"),
    "v": ("1", "sin(v)", "cos(v)"),
    "w": ("1", "-sin(v)", "-cos(v)"),
    "domain": ((0.0, TWO_PI), (0.0, TWO_PI)),
}

# a circle of radius 2 + sin u swept along the first axis with a twist,
# framed by boosted lightlike vectors through the radial direction
TWISTED_REVOLUTION = {
    "X": ("u/2", "(2 + sin(u))*sin(v + u/2)", "(2 + sin(u))*cos(v + u/2)"),
    "v": ("exp(u/3)", "exp(u/3)*sin(v + u/2)", "exp(u/3)*cos(v + u/2)"),
    "w": ("exp(-u/3)", "-exp(-u/3)*sin(v + u/2)", "-exp(-u/3)*cos(v + u/2)"),
    "domain": ((-3.0, 3.0), (0.0, TWO_PI)),
}

BUILTINS = {
    "paper-example": PAPER_EXAMPLE,
    "twisted-revolution": TWISTED_REVOLUTION,
}


def builtin(name):
    """The built-in surface called ``name``."""
    try:
        spec = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown built-in surface {name!r}; choose from {sorted(BUILTINS)}") from None
    return SurfaceDef.from_strings(spec["X"], spec["v"], spec["w"], spec["domain"], name)


def paper_example():
    return builtin("paper-example")


def twisted_revolution():
    return builtin("twisted-revolution")


def swapped_paper_example():
    """``paper-example`` with ``u`` and ``v`` exchanged; violates ``a2 = b2 = 0``."""
    swap = lambda s: s.replace("u", "#").replace("v", "u").replace("#", "v")
    spec = PAPER_EXAMPLE
    return SurfaceDef.from_strings(
        tuple(map(swap, spec["X"])), tuple(map(swap, spec["v"])), tuple(map(swap, spec["w"])),
        spec["domain"], "paper-example-swapped")


#: Invariant fields at the origin exercising each lightlike classification.
SYNTHETIC = {
    "cuspidal_edge": {"a1": "u", "b1": "1", "c2": "1"},
    "swallowtail": {"a1": "v + u^2", "b1": "1", "c2": "1"},
    "cuspidal_butterfly": {"a1": "v + u^3", "b1": "1", "c2": "1"},
    "cuspidal_lips": {"a1": "u^2 + v^2", "b1": "1", "c2": "1"},
    "cuspidal_beaks": {"a1": "u^2 - v^2", "b1": "1", "c2": "1"},
    "undetermined": {"a1": "u^2", "b1": "1", "c2": "1"},
}


def synthetic_field(kind, order=3):
    return InvariantField.from_expressions(0.0, 0.0, order, **SYNTHETIC[kind])


def exponential_helix_curve(k=0.5):
    """Framed curve with constant first frame curvature ``k``."""
    return FramedCurve.from_strings(
        gamma=("0", "2*sin(u)", "-2*cos(u)"),
        lplus=(f"exp({k}*u)", f"exp({k}*u)*cos(u)", f"exp({k}*u)*sin(u)"),
        lminus=(f"exp(-{k}*u)", f"-exp(-{k}*u)*cos(u)", f"-exp(-{k}*u)*sin(u)"),
        domain=(0.0, 2.0),
        name="exponential-helix",
    )
