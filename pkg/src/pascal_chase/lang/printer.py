"""Canonical text for identity ASTs.

Formatting is structural: no simplification, and parentheses are inserted
only where the grammar needs them to rebuild the same tree.
"""

from __future__ import annotations

from .nodes import (
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
)

# grammar levels: expr < term < unary < factor < atom
_EXPR, _TERM, _UNARY, _FACTOR, _ATOM = range(5)


def _level(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _EXPR
    if isinstance(e, Mul):
        return _TERM
    if isinstance(e, Neg):
        return _UNARY
    if isinstance(e, Pow):
        return _FACTOR
    return _ATOM


def _at(e: Expr, level: int) -> str:
    text = format_expr(e)
    return f"({text})" if _level(e) < level else text


def format_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + _at(e.operand, _FACTOR)
    if isinstance(e, Add):
        return f"{_at(e.left, _EXPR)} + {_at(e.right, _TERM)}"
    if isinstance(e, Sub):
        return f"{_at(e.left, _EXPR)} - {_at(e.right, _TERM)}"
    if isinstance(e, Mul):
        return f"{_at(e.left, _TERM)}*{_at(e.right, _UNARY)}"
    if isinstance(e, Pow):
        return f"{_at(e.base, _ATOM)}^{_at(e.exponent, _ATOM)}"
    if isinstance(e, Binom):
        return f"C({format_expr(e.top)}, {format_expr(e.bottom)})"
    if isinstance(e, Fib):
        return f"fib({format_expr(e.index)})"
    if isinstance(e, Sum):
        return (f"sum({e.var}={format_expr(e.lo)}..{format_expr(e.hi)}, "
                f"{format_expr(e.body)})")
    raise TypeError(f"not an expression node: {e!r}")


def format_condition(c: Condition) -> str:
    return f"{format_expr(c.left)} {c.op} {format_expr(c.right)}"


def format_identity(ast: IdentityAst) -> str:
    text = f"{format_expr(ast.lhs)} == {format_expr(ast.rhs)} for {', '.join(ast.params)}"
    if ast.indeterminates:
        text += f" indet {', '.join(ast.indeterminates)}"
    if ast.constraints:
        text += " where " + ", ".join(format_condition(c) for c in ast.constraints)
    return text
