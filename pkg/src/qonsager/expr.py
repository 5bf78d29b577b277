"""Surface syntax for scalars and noncommutative polynomials.

Grammar (usual precedence, ``^`` binds tightest)::

    sum     := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' ['-'] INT)?
    atom    := INT | 'q' | NAME | '(' sum ')' | '[' sum ',' sum ']' ['_q']

``[x,y]`` is the commutator xy - yx and ``[x,y]_q`` is qxy - q^-1 yx.
Division is only allowed by scalar expressions.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

from .freealg import Alphabet, NcPoly, bracket, q_bracket_op
from .scalar import Q, Scalar, ScalarZeroDivision

__all__ = [
    "ExprError",
    "Num",
    "QVar",
    "Gen",
    "Neg",
    "BinOp",
    "Pow",
    "Bracket",
    "Node",
    "parse_ast",
    "render_ast",
    "evaluate",
    "parse_expr",
    "parse_scalar",
]


class ExprError(ValueError):
    """Syntax or name error, carrying a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class QVar:
    pass


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Bracket:
    left: "Node"
    right: "Node"
    quantum: bool


Node = Union[Num, QVar, Gen, Neg, BinOp, Pow, Bracket]

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),\[\]])"
)


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            line, col = _linecol(src, pos)
            raise ExprError(f"unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


def _linecol(src: str, pos: int) -> Tuple[int, int]:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def error(self, msg: str, pos: Optional[int] = None):
        if pos is None:
            pos = self.peek()[2]
        line, col = _linecol(self.src, pos)
        raise ExprError(msg, line, col)

    def take(self, text: str):
        kind, val, pos = self.peek()
        if val != text or kind not in ("op",):
            self.error(f"expected {text!r}, found {val or 'end of input'!r}")
        self.i += 1

    def parse(self) -> Node:
        node = self.sum()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def sum(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.peek()[1]
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.peek()[1]
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.i += 1
            return Neg(self.unary())
        if kind == "op" and val == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[1] == "^":
            self.i += 1
            sign = 1
            if self.peek()[1] == "-":
                sign = -1
                self.i += 1
            kind, val, _ = self.peek()
            if kind != "int":
                self.error("exponent must be an integer literal")
            self.i += 1
            return Pow(base, sign * int(val))
        return base

    def atom(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "int":
            self.i += 1
            return Num(int(val))
        if kind == "name":
            self.i += 1
            return QVar() if val == "q" else Gen(val)
        if val == "(":
            self.i += 1
            node = self.sum()
            self.take(")")
            return node
        if val == "[":
            self.i += 1
            left = self.sum()
            self.take(",")
            right = self.sum()
            self.take("]")
            quantum = False
            if self.peek()[0] == "name" and self.peek()[1] == "_q":
                self.i += 1
                quantum = True
            return Bracket(left, right, quantum)
        self.error(f"unexpected {val or 'end of input'!r}", pos)


def parse_ast(src: str) -> Node:
    return _Parser(src).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 1
    if isinstance(node, Pow):
        return 4
    return 5


def render_ast(node: Node) -> str:
    """Text form that parses back to the same tree."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, QVar):
        return "q"
    if isinstance(node, Gen):
        return node.name
    if isinstance(node, Neg):
        inner = render_ast(node.arg)
        if _prec(node.arg) <= 2:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(node, Pow):
        base = render_ast(node.base)
        if _prec(node.base) < 5:
            base = f"({base})"
        return f"{base}^{node.exp}"
    if isinstance(node, Bracket):
        suffix = "_q" if node.quantum else ""
        return f"[{render_ast(node.left)}, {render_ast(node.right)}]{suffix}"
    p = _PREC[node.op]
    left = render_ast(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = render_ast(node.right)
    # left-associative: the right operand needs parentheses at equal precedence
    if _prec(node.right) <= p or isinstance(node.right, Neg):
        right = f"({right})"
    sep = f" {node.op} " if p == 1 else node.op
    return f"{left}{sep}{right}"


def _unknown(name: str, alphabet: Alphabet) -> ExprError:
    close = difflib.get_close_matches(name, alphabet.names, n=3)
    hint = f"; did you mean {', '.join(close)}?" if close else f"; known: {', '.join(alphabet.names)}"
    return ExprError(f"unknown generator {name!r}{hint}")


def evaluate(node: Node, alphabet: Alphabet) -> NcPoly:
    if isinstance(node, Num):
        return NcPoly.constant(alphabet, Scalar(node.value))
    if isinstance(node, QVar):
        return NcPoly.constant(alphabet, Q)
    if isinstance(node, Gen):
        if node.name not in alphabet:
            raise _unknown(node.name, alphabet)
        return alphabet.gen(node.name)
    if isinstance(node, Neg):
        return -evaluate(node.arg, alphabet)
    if isinstance(node, Pow):
        base = evaluate(node.base, alphabet)
        if node.exp >= 0:
            return base ** node.exp
        s = _as_constant(base)
        if s is None:
            raise ExprError("negative powers are only defined for scalars")
        if not s:
            raise ExprError("zero raised to a negative power")
        return NcPoly.constant(alphabet, s ** node.exp)
    if isinstance(node, Bracket):
        x = evaluate(node.left, alphabet)
        y = evaluate(node.right, alphabet)
        return q_bracket_op(x, y) if node.quantum else bracket(x, y)
    x = evaluate(node.left, alphabet)
    y = evaluate(node.right, alphabet)
    if node.op == "+":
        return x + y
    if node.op == "-":
        return x - y
    if node.op == "*":
        return x * y
    s = _as_constant(y)
    if s is None:
        raise ExprError("division by a non-scalar expression")
    if not s:
        raise ExprError("division by zero")
    return x.scale(s.inverse())


def _as_constant(p: NcPoly) -> Optional[Scalar]:
    if not p.terms:
        return Scalar(0)
    if set(p.terms) == {()}:
        return p.terms[()]
    return None


def parse_expr(src: str, alphabet: Alphabet) -> NcPoly:
    """Parse ``src`` into an element of the free algebra on ``alphabet``."""
    return evaluate(parse_ast(src), alphabet)


_EMPTY = Alphabet(())


def parse_scalar(src: str) -> Scalar:
    try:
        value = _as_constant(parse_expr(src, _EMPTY))
    except ScalarZeroDivision as exc:
        raise ExprError(str(exc)) from None
    assert value is not None
    return value
