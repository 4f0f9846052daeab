"""AST for the identity language.

Spans are ``(start, end)`` character offsets into the source; they do not take
part in equality, so a reformatted and reparsed tree compares equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

Span = Optional[Tuple[int, int]]


@dataclass(frozen=True)
class IntLit:
    value: int
    span: Span = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("integer literals are unsigned; wrap in Neg for negatives")


@dataclass(frozen=True)
class Var:
    name: str
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Binom:
    top: "Expr"
    bottom: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Fib:
    index: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Sum:
    var: str
    lo: "Expr"
    hi: "Expr"
    body: "Expr"
    span: Span = field(default=None, compare=False, repr=False)


Expr = Union[IntLit, Var, Neg, Add, Sub, Mul, Pow, Binom, Fib, Sum]

RELOPS = ("<", "<=", "==", ">=", ">")


@dataclass(frozen=True)
class Condition:
    left: Expr
    op: str
    right: Expr
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class IdentityAst:
    lhs: Expr
    rhs: Expr
    params: Tuple[str, ...]
    constraints: Tuple[Condition, ...] = ()
    indeterminates: Tuple[str, ...] = ()
    source: Optional[str] = field(default=None, compare=False, repr=False)


def children(e: Expr) -> tuple:
    if isinstance(e, (IntLit, Var)):
        return ()
    if isinstance(e, Neg):
        return (e.operand,)
    if isinstance(e, (Add, Sub, Mul)):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base, e.exponent)
    if isinstance(e, Binom):
        return (e.top, e.bottom)
    if isinstance(e, Fib):
        return (e.index,)
    if isinstance(e, Sum):
        return (e.lo, e.hi, e.body)
    raise TypeError(f"not an expression node: {e!r}")


def free_vars(e: Expr, bound: frozenset = frozenset()) -> set[str]:
    if isinstance(e, Var):
        return set() if e.name in bound else {e.name}
    if isinstance(e, Sum):
        out = free_vars(e.lo, bound) | free_vars(e.hi, bound)
        return out | free_vars(e.body, bound | {e.var})
    out: set[str] = set()
    for c in children(e):
        out |= free_vars(c, bound)
    return out
