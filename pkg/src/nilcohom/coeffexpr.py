"""Rational expressions in family parameters, parsed by recursive descent.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | NUMBER | 'i' | NAME | 'conj(' NAME ')' | '(' expr ')'

``NAME`` is a parameter symbol (``t`` by default).  Evaluation substitutes
Gaussian-rational values; ``conj(t)`` evaluates to the conjugate of ``t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union

from .exactfield import ONE, ZERO, I, GaussianRational, format_scalar


class ExprSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


class EvaluationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Num:
    value: GaussianRational


@dataclass(frozen=True)
class Sym:
    name: str
    conj: bool = False


@dataclass(frozen=True)
class Neg:
    arg: "CoeffExpr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "CoeffExpr"
    right: "CoeffExpr"


CoeffExpr = Union[Num, Sym, Neg, BinOp]

_TOKEN = re.compile(r"\s*(?:(\d+)|(conj)\s*\(|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(("num", m.group(1), start))
        elif m.group(2):
            toks.append(("conj", "conj(", start))
        elif m.group(3):
            toks.append(("name", m.group(3), start))
        elif m.group(4):
            ch = m.group(4)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*/()":
                raise ExprSyntaxError(f"unexpected character {ch!r}", text, start)
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, params: tuple[str, ...] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.params = params

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def error(self, msg: str):
        raise ExprSyntaxError(msg, self.text, self.peek()[2])

    def expr(self) -> CoeffExpr:
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> CoeffExpr:
        node = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def _name(self, name: str) -> None:
        if self.params is not None and name not in self.params:
            self.error(f"unknown symbol {name!r}")

    def factor(self) -> CoeffExpr:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.factor())
        if kind == "num":
            self.take()
            return Num(GaussianRational(int(val)))
        if kind == "name":
            self.take()
            if val == "i":
                return Num(I)
            self._name(val)
            return Sym(val)
        if kind == "conj":
            self.take()
            kind2, name, _ = self.peek()
            if kind2 != "name" or name == "i":
                self.error("conj() expects a parameter symbol")
            self.take()
            self._name(name)
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return Sym(name, conj=True)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.error("expected ')'")
            self.take()
            return node
        self.error("expected a number, symbol or '('")


def parse_coeff_expr(text: str, params: tuple[str, ...] | None = ("t",)) -> CoeffExpr:
    """Parse ``text``; ``params=None`` accepts any symbol name."""
    p = _Parser(text, params)
    node = p.expr()
    if p.peek()[0] != "end":
        p.error("unexpected trailing input")
    return node


def evaluate(node: CoeffExpr, env: Mapping[str, GaussianRational] | None = None) -> GaussianRational:
    env = env or {}
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Sym):
        if node.name not in env:
            raise EvaluationError(f"no value bound for {node.name!r}")
        v = env[node.name]
        return v.conj() if node.conj else v
    if isinstance(node, Neg):
        return -evaluate(node.arg, env)
    a = evaluate(node.left, env)
    b = evaluate(node.right, env)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b.is_zero():
        raise EvaluationError(f"division by zero evaluating {render(node)!r}")
    return a / b


def symbols(node: CoeffExpr) -> set[str]:
    if isinstance(node, Num):
        return set()
    if isinstance(node, Sym):
        return {node.name}
    if isinstance(node, Neg):
        return symbols(node.arg)
    return symbols(node.left) | symbols(node.right)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def render(node: CoeffExpr) -> str:
    """Print with the minimal parentheses needed for an identical reparse."""
    if isinstance(node, Num):
        s = format_scalar(node.value)
        return s if s.isdigit() or s == "i" else f"({s})"
    if isinstance(node, Sym):
        return f"conj({node.name})" if node.conj else node.name
    if isinstance(node, Neg):
        inner = render(node.arg)
        if isinstance(node.arg, BinOp):
            inner = f"({inner})"
        return "-" + inner
    prec = _PREC[node.op]
    left = render(node.left)
    if isinstance(node.left, BinOp) and _PREC[node.left.op] < prec:
        left = f"({left})"
    right = render(node.right)
    # right operand binds at strictly higher precedence to keep left associativity
    if isinstance(node.right, BinOp) and _PREC[node.right.op] <= prec:
        right = f"({right})"
    if isinstance(node.right, Neg):
        right = f"({right})"
    return f"{left}{node.op}{right}"


def parse_scalar(text: str) -> GaussianRational:
    """Evaluate a parameter-free expression such as ``"1/2-3/4*i"`` or ``"(1+i)/2"``."""
    return evaluate(parse_coeff_expr(text, params=()))


__all__ = [
    "CoeffExpr",
    "EvaluationError",
    "ExprSyntaxError",
    "evaluate",
    "parse_coeff_expr",
    "parse_scalar",
    "render",
    "symbols",
    "ZERO",
    "ONE",
]
