"""Parse, evaluate, format and judge one-unknown arithmetic equations.

Grammar (infix, standard precedence, left-associative):

    equation := ["X" "="] expr
    expr     := term  (("+" | "-") term)*
    term     := factor (("*" | "/") factor)*
    factor   := ("-" | "+") factor | NUMBER | "(" expr ")"

Arithmetic is exact (fractions); the answer tolerance is applied only when
two values are compared.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DivisionByZero, MissingGold, ParseError

DEFAULT_TOL = 1e-4

_EQ_TOKEN_RE = re.compile(r"\s*(\d+\.\d+|\d+|[()+\-*/=]|[Xx])")


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


Node = Num | BinOp


@dataclass(frozen=True)
class EquationAst:
    rhs: Node
    lhs: str = "X"


@dataclass(frozen=True)
class SolverVerdict:
    prediction: EquationAst | None
    valid: bool
    value: Fraction | None
    correct: bool


def _tokenize_equation(text: str) -> list[str]:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _EQ_TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unknown symbol at {pos!r}: {text[pos:pos+10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of equation")
        self.pos += 1
        return tok

    def expr(self) -> Node:
        node = self.term()
        while self.peek() in ("+", "-"):
            op = self.next()
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek() in ("*", "/"):
            op = self.next()
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.next()
        if tok == "+":
            return self.factor()
        if tok == "-":
            inner = self.factor()
            if isinstance(inner, Num):
                return Num(-inner.value)
            return BinOp("-", Num(Fraction(0)), inner)
        if tok == "(":
            node = self.expr()
            if self.next() != ")":
                raise ParseError("unbalanced parentheses")
            return node
        if tok[0].isdigit():
            return Num(Fraction(tok))
        raise ParseError(f"unexpected token {tok!r}")


def parse_equation(text: str) -> EquationAst:
    """Accepts "X = <expr>" or a bare "<expr>" (implicit left-hand side)."""
    if text is None:
        raise ParseError("no equation text")
    tokens = _tokenize_equation(text)
    if not tokens:
        raise ParseError("empty equation text")
    parser = _Parser(tokens)
    if tokens[0] in ("X", "x"):
        parser.next()
        if parser.peek() == "=":
            parser.next()
        else:
            raise ParseError("expected '=' after unknown")
    rhs = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing tokens from {parser.peek()!r}")
    return EquationAst(rhs=rhs)


def evaluate_equation(ast: EquationAst) -> Fraction:
    return _eval(ast.rhs)


def _eval(node: Node) -> Fraction:
    if isinstance(node, Num):
        return node.value
    a = _eval(node.left)
    b = _eval(node.right)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if b == 0:
            raise DivisionByZero("division by zero")
        return a / b
    raise ParseError(f"unknown operator {node.op!r}")


def answers_equivalent(a, b, tol: float = DEFAULT_TOL) -> bool:
    """|a - b| <= tol, computed exactly."""
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return abs(Fraction(a) - Fraction(b)) <= Fraction(tol)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_literal(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    # exact decimal when the denominator is 2^a * 5^b
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:
        scale = max(twos, fives)
        digits = value.numerator * 10 ** scale // value.denominator
        s = f"{abs(digits):0{scale + 1}d}"
        out = f"{s[:-scale]}.{s[-scale:]}"
        return ("-" if value < 0 else "") + out
    return ""  # caller renders as a division


def _fmt(node: Node, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(node, Num):
        lit = _fmt_literal(node.value)
        if lit:
            return lit if node.value >= 0 else f"({lit})" if parent_prec else lit
        # non-decimal rational literal: render as an explicit division
        node = BinOp("/", Num(Fraction(node.value.numerator)),
                     Num(Fraction(node.value.denominator)))
    prec = _PREC[node.op]
    s = f"{_fmt(node.left, prec, False)} {node.op} {_fmt(node.right, prec, True)}"
    if prec < parent_prec or (prec == parent_prec and right_side):
        return f"({s})"
    return s


def format_equation(ast: EquationAst) -> str:
    """Canonical infix text with minimal parentheses; parse(format(t)) == t."""
    return f"X = {_fmt(ast.rhs)}"


def judge(
    prediction_text: str | None,
    gold_equation: str | None = None,
    gold_answer=None,
    tol: float = DEFAULT_TOL,
) -> SolverVerdict:
    """Judge a solver's raw output against the gold label.

    Total over prediction text: malformed or zero-dividing predictions yield
    an invalid (and hence incorrect) verdict instead of raising.
    """
    if gold_equation is None and gold_answer is None:
        raise MissingGold("need a gold equation or a gold answer")
    if gold_answer is not None:
        gold_value = Fraction(gold_answer)
    else:
        gold_value = evaluate_equation(parse_equation(gold_equation))
    try:
        ast = parse_equation(prediction_text)
        value = evaluate_equation(ast)
    except (ParseError, DivisionByZero):
        return SolverVerdict(prediction=None, valid=False, value=None, correct=False)
    return SolverVerdict(
        prediction=ast,
        valid=True,
        value=value,
        correct=answers_equivalent(value, gold_value, tol),
    )
