"""Expression language for command-line inputs.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?          # right associative, binds tighter than unary minus
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

so ``-2^2 = -4`` and ``2^-1 = 0.5``.  Offsets in diagnostics are byte
offsets into the UTF-8 encoding of the source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .errors import ExprSyntaxError, PreconditionViolated, UnknownIdentifier
from .lattice import Lattice
from .numeric import DEFAULT_PREC, BigComplex, context, elementary, pi_times_2i, to_mpc

CONSTANTS = frozenset({"pi", "i", "e", "two_pi_i"})
LATTICE_CONSTANTS = frozenset({"omega1", "omega2", "eta1", "eta2", "g2", "g3"})
ELEMENTARY = frozenset({"exp", "log", "sqrt"})
WEIERSTRASS = frozenset({"wp", "wpprime", "zeta", "sigma"})
FUNCTIONS = ELEMENTARY | WEIERSTRASS

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


# ------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Number:
    text: str
    offset: int


@dataclass(frozen=True)
class Name:
    name: str
    offset: int


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    offset: int


Node = Union[Number, Name, Unary, Binary, Call]


@dataclass(frozen=True)
class Expression:
    source: str
    root: Node

    def names(self) -> set[str]:
        out: set[str] = set()
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, Name):
                out.add(node.name)
            elif isinstance(node, Unary):
                stack.append(node.operand)
            elif isinstance(node, Binary):
                stack += [node.left, node.right]
            elif isinstance(node, Call):
                stack.append(node.arg)
        return out

    def needs_lattice(self) -> bool:
        return bool(self.names() & LATTICE_CONSTANTS) or _has_call(self.root, WEIERSTRASS)


def _has_call(node: Node, funcs) -> bool:
    if isinstance(node, Call):
        return node.func in funcs or _has_call(node.arg, funcs)
    if isinstance(node, Unary):
        return _has_call(node.operand, funcs)
    if isinstance(node, Binary):
        return _has_call(node.left, funcs) or _has_call(node.right, funcs)
    return False


# ---------------------------------------------------------------- parser


class _Tokens:
    def __init__(self, source: str):
        self.source = source
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(source):
            if source[pos:].strip() == "":
                break
            m = _TOKEN.match(source, pos)
            if m is None or m.end() == pos:
                start = pos + len(source[pos:]) - len(source[pos:].lstrip())
                raise ExprSyntaxError(f"unexpected character {source[start]!r}", _byte(source, start))
            kind = m.lastgroup
            self.items.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.items.append(("end", "", len(source)))
        self.i = 0

    def peek(self):
        return self.items[self.i]

    def take(self):
        tok = self.items[self.i]
        self.i += 1
        return tok

    def offset(self, tok) -> int:
        return _byte(self.source, tok[2])


def _byte(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


def parse(source: str, bindings: Optional[Mapping] = None) -> Expression:
    """Parse ``source``; identifiers must be constants, functions or keys of ``bindings``."""
    known = set(bindings or ()) | CONSTANTS | LATTICE_CONSTANTS
    toks = _Tokens(source)
    root = _expr(toks, known)
    tok = toks.peek()
    if tok[0] != "end":
        raise ExprSyntaxError(f"unexpected {tok[1]!r}", toks.offset(tok))
    return Expression(source, root)


def _expr(toks: _Tokens, known) -> Node:
    node = _term(toks, known)
    while toks.peek()[1] in ("+", "-") and toks.peek()[0] == "op":
        op = toks.take()[1]
        node = Binary(op, node, _term(toks, known))
    return node


def _term(toks: _Tokens, known) -> Node:
    node = _unary(toks, known)
    while toks.peek()[1] in ("*", "/") and toks.peek()[0] == "op":
        op = toks.take()[1]
        node = Binary(op, node, _unary(toks, known))
    return node


def _unary(toks: _Tokens, known) -> Node:
    tok = toks.peek()
    if tok[0] == "op" and tok[1] in ("-", "+"):
        toks.take()
        operand = _unary(toks, known)
        return Unary("-", operand) if tok[1] == "-" else operand
    return _power(toks, known)


def _power(toks: _Tokens, known) -> Node:
    base = _atom(toks, known)
    tok = toks.peek()
    if tok[0] == "op" and tok[1] == "^":
        toks.take()
        return Binary("^", base, _unary(toks, known))
    return base


def _atom(toks: _Tokens, known) -> Node:
    tok = toks.take()
    kind, text, _ = tok
    off = toks.offset(tok)
    if kind == "num":
        return Number(text, off)
    if kind == "name":
        if toks.peek()[1] == "(" and toks.peek()[0] == "op":
            if text not in FUNCTIONS:
                raise UnknownIdentifier(text, off)
            toks.take()
            arg = _expr(toks, known)
            close = toks.take()
            if close[1] != ")":
                raise ExprSyntaxError("expected ')'", toks.offset(close))
            return Call(text, arg, off)
        if text not in known:
            raise UnknownIdentifier(text, off)
        return Name(text, off)
    if kind == "op" and text == "(":
        node = _expr(toks, known)
        close = toks.take()
        if close[1] != ")":
            raise ExprSyntaxError("expected ')'", toks.offset(close))
        return node
    if kind == "end":
        raise ExprSyntaxError("unexpected end of input", off)
    raise ExprSyntaxError(f"unexpected {text!r}", off)


# ------------------------------------------------------------- evaluation


@dataclass(frozen=True)
class Scope:
    prec: int = DEFAULT_PREC
    lattice: Optional[Lattice] = None
    bindings: Mapping[str, BigComplex] = field(default_factory=dict)


def evaluate(expr: Expression | str, scope: Scope = Scope()) -> BigComplex:
    """Value of ``expr`` at ``scope.prec`` bits; deterministic for a fixed scope."""
    if isinstance(expr, str):
        expr = parse(expr, scope.bindings)
    return _eval(expr.root, scope)


def _lattice(scope: Scope, what: str) -> Lattice:
    if scope.lattice is None:
        raise PreconditionViolated(f"{what} needs a lattice in scope")
    return scope.lattice


def _eval(node: Node, scope: Scope) -> BigComplex:
    prec = scope.prec
    if isinstance(node, Number):
        return BigComplex(node.text, prec)
    if isinstance(node, Name):
        return _name(node.name, scope)
    if isinstance(node, Unary):
        return -_eval(node.operand, scope)
    if isinstance(node, Binary):
        a = _eval(node.left, scope)
        b = _eval(node.right, scope)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return a / b
        return a ** _int_or_value(b)
    arg = _eval(node.arg, scope)
    if node.func in ELEMENTARY:
        return elementary(arg, node.func)
    from . import weierstrass as W

    L = _lattice(scope, f"{node.func}()")
    fn = {"wp": W.wp, "wpprime": W.wp_prime, "zeta": W.zeta, "sigma": W.sigma}[node.func]
    return fn(arg, L).with_prec(prec)


def _int_or_value(b: BigComplex):
    v = b.value
    if v.imag == 0 and v.real == int(v.real) and abs(v.real) < 2**31:
        return int(v.real)
    return b


def _name(name: str, scope: Scope) -> BigComplex:
    prec = scope.prec
    if name in scope.bindings:
        return scope.bindings[name].with_prec(prec)
    ctx = context(prec)
    if name == "pi":
        return BigComplex._wrap(+ctx.pi, prec)
    if name == "e":
        return BigComplex._wrap(+ctx.e, prec)
    if name == "i":
        return BigComplex(1j, prec)
    if name == "two_pi_i":
        return pi_times_2i(prec)
    L = _lattice(scope, name)
    if name in ("g2", "g3"):
        exact = L.g2_exact if name == "g2" else L.g3_exact
        if exact is not None:
            return BigComplex._wrap(to_mpc(exact, ctx), prec)
    return getattr(L, name).with_prec(prec)
