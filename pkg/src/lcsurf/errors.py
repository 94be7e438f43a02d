"""Exception hierarchy shared by every module of the package."""


class LcsurfError(Exception):
    """Base class for all errors raised by lcsurf."""


class ExpressionError(LcsurfError):
    pass


class ParseError(ExpressionError):
    """Malformed expression text.

    Attributes
    ----------
    offset : int
        Byte offset (UTF-8) of the offending token in the source.
    expected : frozenset of str
        Token kinds that would have been accepted at ``offset``.
    """

    def __init__(self, message, offset=0, expected=()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifier(ParseError):
    def __init__(self, name, offset, allowed=()):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset, allowed)


class DomainError(LcsurfError, ArithmeticError):
    """A function was evaluated outside its domain (log, sqrt, division).

    ``node`` is the source text of the failing sub-expression when the error
    was raised during expression evaluation, otherwise ``None``.
    """

    def __init__(self, message, node=None):
        self.node = node
        if node is not None:
            message = f"{message} in `{node}`"
        super().__init__(message)


class ValidationError(LcsurfError):
    """A surface or curve definition violates a frame condition."""

    def __init__(self, message, condition=None, point=None):
        self.condition = condition
        self.point = point
        super().__init__(message)


class FrameViolation(ValidationError):
    pass


class QuadratureError(LcsurfError):
    pass


class ConfigError(LcsurfError):
    """Bad run configuration; carries the offending key and line if known."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        prefix = []
        if line is not None:
            prefix.append(f"line {line}")
        if key is not None:
            prefix.append(f"key {key!r}")
        if prefix:
            message = f"{', '.join(prefix)}: {message}"
        super().__init__(message)


class GeometryError(LcsurfError):
    """A pointwise quantity is undefined at the requested point."""


class LightlikePoint(GeometryError):
    pass


class SingularPoint(GeometryError):
    pass


class NotLightlike(GeometryError):
    pass


class DegeneratePrincipal(GeometryError):
    pass


class ComplexPrincipal(GeometryError):
    """The Weingarten map has a complex-conjugate pair of eigenvalues."""


class SeedNotNearLocus(GeometryError):
    pass


class DegenerateLocusPoint(GeometryError):
    pass


class PathNotLightlikeAtTarget(GeometryError):
    pass


class BranchUnavailable(GeometryError):
    pass


class DoubleRootNoJet(GeometryError):
    pass


class StencilCrossesBranchCut(GeometryError):
    pass


class MeshEmpty(LcsurfError):
    pass
