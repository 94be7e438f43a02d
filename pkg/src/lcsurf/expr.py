"""Arithmetic expressions in ``u`` and ``v``: parser, printer and jet evaluator.

Grammar (whitespace between tokens is ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"

``^`` is right-associative and its exponent must fold to an integer
constant, e.g. ``u^2``, ``u^-1``, ``u^(2*2)``.  Unary minus binds tighter
than ``*`` and looser than ``^`` (``-u^2`` is ``-(u^2)``).
"""

import math
import re
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from . import jet as J
from .errors import DomainError, ParseError, UnknownIdentifier

FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")
VARIABLES = ("u", "v")
CONSTANTS = ("pi",)


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Pi:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Pi, Neg, BinOp, Pow, Call]


# -- tokenizer ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


class _Tok:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind, self.text, self.offset = kind, text, offset


def _tokenize(source):
    tokens = []
    pos = 0
    byte = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", byte,
                             {"number", "identifier", "operator"})
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            tokens.append(_Tok(kind, text, byte))
        byte += len(text.encode("utf-8"))
        pos = m.end()
    tokens.append(_Tok("end", "", byte))
    return tokens


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, source, variables):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.variables = tuple(variables)

    @property
    def tok(self):
        return self.tokens[self.pos]

    def advance(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def expect(self, text):
        if self.tok.text != text or self.tok.kind != "op":
            raise ParseError(f"expected {text!r}", self.tok.offset, {repr(text)})
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.offset,
                             {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            caret = self.advance()
            exponent = self.unary()
            value = _fold_constant(exponent)
            if value is None or not float(value).is_integer():
                raise ParseError("exponent must be an integer constant", caret.offset + 1,
                                 {"integer constant"})
            return Pow(base, int(value))
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text in self.variables:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Pi()
            allowed = set(self.variables) | set(CONSTANTS) | set(FUNCTIONS)
            raise UnknownIdentifier(tok.text, tok.offset, allowed)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError("unexpected " + (repr(tok.text) if tok.text else "end of input"),
                         tok.offset, {"number", "identifier", "'('", "'-'"})


def _fold_constant(node):
    """Evaluate a variable-free subtree, or return ``None``."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Pi):
        return math.pi
    if isinstance(node, Neg):
        x = _fold_constant(node.operand)
        return None if x is None else -x
    if isinstance(node, BinOp):
        a, b = _fold_constant(node.left), _fold_constant(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b if b != 0 else None
    if isinstance(node, Pow):
        x = _fold_constant(node.base)
        if x is None or (x == 0 and node.exponent < 0):
            return None
        return x ** node.exponent
    return None


def parse_expr(source, variables=VARIABLES):
    """Parse ``source`` into an immutable AST.

    Parameters
    ----------
    source : str
        Expression text.
    variables : tuple of str, optional
        Names accepted as free variables.  Defaults to ``("u", "v")``.

    Raises
    ------
    ParseError
        On malformed input; carries the byte offset and expected tokens.
    UnknownIdentifier
        For a name that is neither a variable, ``pi`` nor a known function.
    """
    if not isinstance(source, str) or not source.strip():
        raise ParseError("empty expression", 0, {"number", "identifier", "'('", "'-'"})
    return _Parser(source, variables).parse()


# -- printer ------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_source(node):
    """Render an AST as text that parses back to an identical AST."""
    text, _ = _render(node)
    return text


def _render(node):
    # returns (text, precedence); atoms 5, pow 4, unary 3, */ 2, +- 1
    if isinstance(node, Num):
        if node.value < 0 or not math.isfinite(node.value):
            raise ValueError(f"literal {node.value!r} has no source form")
        return repr(node.value), 5
    if isinstance(node, Var):
        return node.name, 5
    if isinstance(node, Pi):
        return "pi", 5
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})", 5
    if isinstance(node, Pow):
        base, prec = _render(node.base)
        if prec < 5:
            base = f"({base})"
        exp = str(node.exponent) if node.exponent >= 0 else f"(-{-node.exponent})"
        return f"{base}^{exp}", 4
    if isinstance(node, Neg):
        inner, prec = _render(node.operand)
        if prec < 3:
            inner = f"({inner})"
        return f"-{inner}", 3
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        left, lp = _render(node.left)
        right, rp = _render(node.right)
        if lp < p:
            left = f"({left})"
        # left-associative: an equal-precedence right operand needs parens
        if rp <= p:
            right = f"({right})"
        return f"{left} {node.op} {right}", p
    raise TypeError(f"not an expression node: {node!r}")


# -- evaluation ---------------------------------------------------------------

_JET_FUNCS = {name: getattr(J, name) for name in FUNCTIONS}


def eval_jet(node, u0, v0, order=J.ORDER, variables=None):
    """Evaluate ``node`` as a jet of the given order at ``(u0, v0)``.

    ``u0`` and ``v0`` may be arrays, in which case the jet holds one
    expansion per base point.  ``variables`` maps variable names to jets and
    overrides the default ``u``/``v`` coordinate jets.

    Raises
    ------
    DomainError
        When ``log``, ``sqrt`` or a division is evaluated outside its domain;
        the error names the offending sub-expression.
    """
    if variables is None:
        shape = np.broadcast_shapes(np.shape(u0), np.shape(v0))
        variables = {
            "u": J.Jet.variable(np.broadcast_to(np.asarray(u0, float), shape), "u", order),
            "v": J.Jet.variable(np.broadcast_to(np.asarray(v0, float), shape), "v", order),
        }
    return _eval(node, variables, order)


def _eval(node, env, order):
    if isinstance(node, Num):
        return J.Jet.constant(np.zeros(_shape(env)) + node.value, order)
    if isinstance(node, Pi):
        return J.Jet.constant(np.zeros(_shape(env)) + math.pi, order)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, env, order)
    if isinstance(node, BinOp):
        a = _eval(node.left, env, order)
        b = _eval(node.right, env, order)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        try:
            return a / b
        except DomainError:
            raise DomainError("division by zero", to_source(node)) from None
    if isinstance(node, Pow):
        base = _eval(node.base, env, order)
        try:
            return base ** node.exponent
        except DomainError:
            raise DomainError("negative power of zero", to_source(node)) from None
    if isinstance(node, Call):
        arg = _eval(node.arg, env, order)
        try:
            return _JET_FUNCS[node.func](arg)
        except DomainError as exc:
            raise DomainError(str(exc), to_source(node)) from None
    raise TypeError(f"not an expression node: {node!r}")


def _shape(env):
    for value in env.values():
        return value.shape
    return ()


def eval_value(node, u0, v0):
    """Plain value of ``node`` at ``(u0, v0)``."""
    return eval_jet(node, u0, v0, order=0).value


def free_variables(node):
    """Set of variable names used by ``node``."""
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, (Num, Pi)):
        return set()
    if isinstance(node, (Neg,)):
        return free_variables(node.operand)
    if isinstance(node, Pow):
        return free_variables(node.base)
    if isinstance(node, Call):
        return free_variables(node.arg)
    return free_variables(node.left) | free_variables(node.right)


ExprTriple = Tuple[Node, Node, Node]
