"""Lexer and recursive-descent parser for the identity language.

Grammar::

    identity := expr "==" expr "for" IDENT ("," IDENT)*
                ["indet" IDENT ("," IDENT)*] ["where" cond ("," cond)*]
    cond     := expr ("<" | "<=" | "==" | ">=" | ">") expr
    expr     := term (("+" | "-") term)*
    term     := unary ("*" unary)*
    unary    := ["-"] factor
    factor   := atom ["^" atom]
    atom     := UINT | IDENT | "(" expr ")" | "C(" expr "," expr ")"
              | "fib(" expr ")" | "sum(" IDENT "=" expr ".." expr "," expr ")"

``-1^k`` therefore means ``-(1^k)``; write ``(-1)^k`` for a sign.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

from .nodes import (
    RELOPS,
    Add,
    Binom,
    Condition,
    Expr,
    Fib,
    IdentityAst,
    IntLit,
    Mul,
    Neg,
    Pow,
    Sub,
    Sum,
    Var,
    children,
)

KEYWORDS = {"for", "indet", "where"}
FUNCTIONS = {"C", "fib", "sum"}


class ParseError(ValueError):
    """Lexical, syntax or binding error, located by line and column (1-based)."""

    def __init__(self, message: str, source: str, offset: int, expected=()):
        self.message = message
        self.offset = offset
        self.line = source.count("\n", 0, offset) + 1
        self.column = offset - (source.rfind("\n", 0, offset) + 1) + 1
        self.expected = tuple(sorted(set(expected)))
        text = f"{self.line}:{self.column}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class UnboundVariableError(ParseError):
    pass


class NegativePowerWarning(UserWarning):
    """``-x^e`` parses as ``-(x^e)``, which is rarely what a sign factor wants."""


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", a punctuation string, or "end"
    text: str
    start: int
    end: int


_LEX = re.compile(
    r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<punct>==|<=|>=|\.\.|[<>=+\-*^(),])"
)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _LEX.match(source, pos)
        if not m:
            raise ParseError(f"unexpected character {source[pos]!r}", source, pos)
        kind = m.lastgroup
        if kind == "punct":
            tokens.append(Token(m.group(), m.group(), m.start(), m.end()))
        elif kind in ("int", "ident"):
            tokens.append(Token(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    tokens.append(Token("end", "", len(source), len(source)))
    return tokens


def _describe(tok: Token) -> str:
    if tok.kind == "end":
        return "end of input"
    return repr(tok.text)


_ATOM_START = ("integer", "identifier", "'('", "'C('", "'fib('", "'sum('")


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, kind: str) -> bool:
        return self.tok.kind == kind

    def error(self, message: str, expected=()) -> ParseError:
        return ParseError(message, self.source, self.tok.start, expected)

    def take(self, kind: str, expected=None) -> Token:
        tok = self.tok
        if tok.kind != kind:
            want = expected or ([repr(kind)] if kind not in ("int", "ident") else
                                ["integer" if kind == "int" else "identifier"])
            raise self.error(f"unexpected {_describe(tok)}", want)
        self.i += 1
        return tok

    def name(self, what="identifier") -> Token:
        tok = self.take("ident", [what])
        if tok.text in KEYWORDS or tok.text in FUNCTIONS:
            raise ParseError(f"{tok.text!r} is reserved", self.source, tok.start, [what])
        return tok

    # -- expressions -----------------------------------------------------------

    def expr(self) -> Expr:
        start = self.tok.start
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind).kind
            right = self.term()
            span = (start, self.tokens[self.i - 1].end)
            left = Add(left, right, span) if op == "+" else Sub(left, right, span)
        return left

    def term(self) -> Expr:
        start = self.tok.start
        left = self.unary()
        while self.at("*"):
            self.take("*")
            right = self.unary()
            left = Mul(left, right, (start, self.tokens[self.i - 1].end))
        return left

    def unary(self) -> Expr:
        if self.at("-"):
            start = self.take("-").start
            operand = self.factor()
            if isinstance(operand, Pow) and isinstance(operand.base, IntLit):
                warnings.warn(
                    f"'-{self.source[operand.span[0]:operand.span[1]]}' at offset {start} "
                    "negates the power; write '(-x)^e' for a signed base",
                    NegativePowerWarning,
                    stacklevel=4,
                )
            return Neg(operand, (start, self.tokens[self.i - 1].end))
        return self.factor()

    def factor(self) -> Expr:
        start = self.tok.start
        base = self.atom()
        if self.at("^"):
            self.take("^")
            exponent = self.atom()
            return Pow(base, exponent, (start, self.tokens[self.i - 1].end))
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return IntLit(int(tok.text), (tok.start, tok.end))
        if tok.kind == "(":
            self.take("(")
            inner = self.expr()
            self.take(")", ["')'"] + self._continuations())
            return inner
        if tok.kind == "ident":
            nxt = self.tokens[self.i + 1]
            if tok.text in FUNCTIONS:
                if nxt.kind != "(":
                    raise ParseError(f"{tok.text!r} must be followed by '('", self.source,
                                     nxt.start, ["'('"])
                return self.call()
            if tok.text in KEYWORDS:
                raise self.error(f"unexpected keyword {tok.text!r}", _ATOM_START)
            self.i += 1
            return Var(tok.text, (tok.start, tok.end))
        raise self.error(f"unexpected {_describe(tok)}", _ATOM_START)

    def _continuations(self):
        return ["'+'", "'-'", "'*'", "'^'"]

    def call(self) -> Expr:
        head = self.take("ident")
        self.take("(")
        if head.text == "C":
            top = self.expr()
            self.take(",", ["','"] + self._continuations())
            bottom = self.expr()
            end = self.take(")", ["')'"] + self._continuations())
            return Binom(top, bottom, (head.start, end.end))
        if head.text == "fib":
            index = self.expr()
            end = self.take(")", ["')'"] + self._continuations())
            return Fib(index, (head.start, end.end))
        var = self.name("summation variable")
        self.take("=", ["'='"])
        lo = self.expr()
        self.take("..", ["'..'"] + self._continuations())
        hi = self.expr()
        self.take(",", ["','"] + self._continuations())
        body = self.expr()
        end = self.take(")", ["')'"] + self._continuations())
        return Sum(var.text, lo, hi, body, (head.start, end.end))

    def condition(self) -> Condition:
        start = self.tok.start
        left = self.expr()
        if self.tok.kind not in RELOPS:
            raise self.error(f"unexpected {_describe(self.tok)}",
                             [repr(op) for op in RELOPS] + self._continuations())
        op = self.take(self.tok.kind).kind
        right = self.expr()
        return Condition(left, op, right, (start, self.tokens[self.i - 1].end))

    def names(self, what: str) -> list[Token]:
        out = [self.name(what)]
        while self.at(","):
            self.take(",")
            out.append(self.name(what))
        return out

    # -- identity ----------------------------------------------------------------

    def identity(self) -> IdentityAst:
        lhs = self.expr()
        self.take("==", ["'=='"] + self._continuations())
        rhs = self.expr()
        if not (self.at("ident") and self.tok.text == "for"):
            raise self.error(f"unexpected {_describe(self.tok)}",
                             ["'for'"] + self._continuations())
        self.i += 1
        params = self.names("parameter name")
        indets: list[Token] = []
        constraints: list[Condition] = []
        if self.at("ident") and self.tok.text == "indet":
            self.i += 1
            indets = self.names("indeterminate name")
        if self.at("ident") and self.tok.text == "where":
            self.i += 1
            constraints.append(self.condition())
            while self.at(","):
                self.take(",")
                constraints.append(self.condition())
        if not self.at("end"):
            expected = ["end of input", "','"]
            if not constraints:
                expected += ["'where'"] if indets else ["'indet'", "'where'"]
            raise self.error(f"unexpected {_describe(self.tok)}", expected)
        ast = IdentityAst(
            lhs,
            rhs,
            tuple(t.text for t in params),
            tuple(constraints),
            tuple(t.text for t in indets),
            source=self.source,
        )
        _check_bindings(ast, self.source, params, indets)
        return ast


def _check_bindings(ast: IdentityAst, source: str, params, indets) -> None:
    seen: dict[str, Token] = {}
    for tok in list(params) + list(indets):
        if tok.text in seen:
            raise ParseError(f"{tok.text!r} declared twice", source, tok.start)
        seen[tok.text] = tok
    declared = set(seen)
    for side in (ast.lhs, ast.rhs):
        _check_expr(side, declared, frozenset(), source)
    for cond in ast.constraints:
        for side in (cond.left, cond.right):
            _check_expr(side, set(ast.params), frozenset(), source, in_constraint=True)


def _check_expr(e: Expr, declared: set, bound: frozenset, source: str,
                in_constraint: bool = False) -> None:
    if isinstance(e, Var):
        if e.name not in declared and e.name not in bound:
            where = "constraints may only use parameters" if in_constraint else \
                "not a parameter, indeterminate or summation variable"
            raise UnboundVariableError(f"unbound variable {e.name!r}: {where}", source,
                                       e.span[0] if e.span else 0)
        return
    if isinstance(e, Sum):
        if e.var in declared or e.var in bound:
            raise ParseError(f"summation variable {e.var!r} shadows an outer name", source,
                             e.span[0] if e.span else 0)
        _check_expr(e.lo, declared, bound, source, in_constraint)
        _check_expr(e.hi, declared, bound, source, in_constraint)
        _check_expr(e.body, declared, bound | {e.var}, source, in_constraint)
        return
    for c in children(e):
        _check_expr(c, declared, bound, source, in_constraint)


def parse_identity(text: str) -> IdentityAst:
    return _Parser(text).identity()


def parse_expr(text: str) -> Expr:
    """Parse a bare expression (no ``==``/``for`` header)."""
    p = _Parser(text)
    e = p.expr()
    if not p.at("end"):
        raise p.error(f"unexpected {_describe(p.tok)}", ["end of input"] + p._continuations())
    return e


def parse_identity_file(text: str) -> list[IdentityAst]:
    """One identity per non-blank line; ``#`` starts a comment."""
    out = []
    line_start = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0].rstrip("\r\n")
        if body.strip():
            try:
                out.append(parse_identity(body))
            except ParseError as exc:
                raise type(exc)(exc.message, text, line_start + exc.offset,
                                exc.expected) from None
        line_start += len(line)
    return out
