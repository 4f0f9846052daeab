"""Exact instance evaluation of identity expressions.

Expressions are compiled to nested closures once and then evaluated per
binding; arithmetic stays on plain Python integers until an indeterminate
appears, at which point values become :class:`~pascal_chase.exact.Weight`.
"""

from __future__ import annotations

import enum
import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from ..exact import Weight
from ..triangle import FIB_CONVENTIONS, binom
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
from .printer import format_expr


class EvalError(ValueError):
    pass


_RELOPS = {
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}


def _as_int(value, what: str, e: Expr) -> int:
    if isinstance(value, Weight):
        if not value.is_constant():
            raise EvalError(f"{what} {format_expr(e)!r} is symbolic ({value})")
        value = value.constant()
    if isinstance(value, int):
        return value
    if value.denominator == 1:
        return value.numerator
    raise EvalError(f"{what} {format_expr(e)!r} is not an integer ({value})")


def compile_expr(e: Expr, indeterminates: Iterable[str] = (),
                 fib: Callable[[int], int] | str = "signed") -> Callable[[dict], object]:
    """Compile ``e`` to a function of an environment ``{name: int}``."""
    indets = {name: Weight.var(name) for name in indeterminates}
    fib_fn = FIB_CONVENTIONS[fib] if isinstance(fib, str) else fib

    def build(e: Expr):
        if isinstance(e, IntLit):
            v = e.value
            return lambda env: v
        if isinstance(e, Var):
            name = e.name
            if name in indets:
                w = indets[name]
                return lambda env: w

            def var(env):
                try:
                    return env[name]
                except KeyError:
                    raise EvalError(f"unbound variable {name!r}") from None
            return var
        if isinstance(e, Neg):
            f = build(e.operand)
            return lambda env: -f(env)
        if isinstance(e, Add):
            f, g = build(e.left), build(e.right)
            return lambda env: f(env) + g(env)
        if isinstance(e, Sub):
            f, g = build(e.left), build(e.right)
            return lambda env: f(env) - g(env)
        if isinstance(e, Mul):
            f, g = build(e.left), build(e.right)
            return lambda env: f(env) * g(env)
        if isinstance(e, Pow):
            f, g = build(e.base), build(e.exponent)
            exp_node = e.exponent

            def power(env):
                k = _as_int(g(env), "exponent", exp_node)
                if k < 0:
                    raise EvalError(f"negative exponent {format_expr(exp_node)!r} = {k}")
                return f(env) ** k
            return power
        if isinstance(e, Binom):
            f, g = build(e.top), build(e.bottom)
            top, bottom = e.top, e.bottom

            def choose(env):
                n = _as_int(f(env), "binomial top", top)
                if n < 0:
                    raise EvalError(f"binomial with negative top {format_expr(top)!r} = {n}")
                return binom(n, _as_int(g(env), "binomial bottom", bottom))
            return choose
        if isinstance(e, Fib):
            f = build(e.index)
            index = e.index
            return lambda env: fib_fn(_as_int(f(env), "Fibonacci index", index))
        if isinstance(e, Sum):
            lo_f, hi_f, body_f = build(e.lo), build(e.hi), build(e.body)
            var_name, lo_node, hi_node = e.var, e.lo, e.hi

            def summation(env):
                lo = _as_int(lo_f(env), "sum bound", lo_node)
                hi = _as_int(hi_f(env), "sum bound", hi_node)
                total = 0
                saved = env.get(var_name, _MISSING)
                try:
                    for k in range(lo, hi + 1):
                        env[var_name] = k
                        total = total + body_f(env)
                finally:
                    if saved is _MISSING:
                        env.pop(var_name, None)
                    else:
                        env[var_name] = saved
                return total
            return summation
        raise TypeError(f"not an expression node: {e!r}")

    return build(e)


_MISSING = object()


def eval_expr(e: Expr, bindings: Mapping[str, int], indeterminates: Iterable[str] = (),
              fib: Callable[[int], int] | str = "signed") -> Weight:
    """Evaluate ``e`` exactly; indeterminates become degree-1 monomials."""
    env = _check_bindings(bindings)
    return Weight.coerce(compile_expr(e, indeterminates, fib)(env))


def _check_bindings(bindings: Mapping[str, int]) -> dict:
    env = {}
    for name, value in bindings.items():
        if isinstance(value, bool) or not isinstance(value, int):
            raise EvalError(f"parameter {name!r} must be an integer, got {value!r}")
        env[name] = value
    return env


class Verdict(str, enum.Enum):
    PASSED = "passed"
    FAILED = "failed"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class InstanceResult:
    verdict: Verdict
    lhs: Weight | None = None
    rhs: Weight | None = None


class CompiledIdentity:
    """An identity ready for repeated instance checks."""

    def __init__(self, ast: IdentityAst, fib: Callable[[int], int] | str = "signed"):
        self.ast = ast
        self.lhs = compile_expr(ast.lhs, ast.indeterminates, fib)
        self.rhs = compile_expr(ast.rhs, ast.indeterminates, fib)
        self.constraints = [
            (compile_expr(c.left, (), fib), _RELOPS[c.op], compile_expr(c.right, (), fib), c)
            for c in ast.constraints
        ]

    def satisfies(self, env: dict) -> bool:
        for left, op, right, cond in self.constraints:
            a = _as_int(left(env), "constraint side", cond.left)
            b = _as_int(right(env), "constraint side", cond.right)
            if not op(a, b):
                return False
        return True

    def run(self, bindings: Mapping[str, int]) -> InstanceResult:
        env = _check_bindings(bindings)
        missing = [p for p in self.ast.params if p not in env]
        if missing:
            raise EvalError(f"missing binding for {', '.join(missing)}")
        if not self.satisfies(env):
            return InstanceResult(Verdict.SKIPPED)
        lhs = Weight.coerce(self.lhs(env))
        rhs = Weight.coerce(self.rhs(env))
        return InstanceResult(Verdict.PASSED if lhs == rhs else Verdict.FAILED, lhs, rhs)


def check_instance(ast: IdentityAst, bindings: Mapping[str, int],
                   fib: Callable[[int], int] | str = "signed") -> Verdict:
    """PASSED/FAILED by exact comparison; SKIPPED when a constraint is violated."""
    return CompiledIdentity(ast, fib).run(bindings).verdict


def violated_constraints(ast: IdentityAst, bindings: Mapping[str, int]) -> list[Condition]:
    """The constraints of ``ast`` violated by ``bindings`` (empty if all hold)."""
    env = _check_bindings(bindings)
    failed = []
    for cond in ast.constraints:
        a = _as_int(compile_expr(cond.left)(env), "constraint side", cond.left)
        b = _as_int(compile_expr(cond.right)(env), "constraint side", cond.right)
        if not _RELOPS[cond.op](a, b):
            failed.append(cond)
    return failed
