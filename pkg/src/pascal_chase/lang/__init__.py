"""The identity language: ``lhs == rhs for params [indet ...] [where ...]``."""

from .evaluate import (
    CompiledIdentity,
    EvalError,
    InstanceResult,
    Verdict,
    check_instance,
    compile_expr,
    violated_constraints,
    eval_expr,
)
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
    free_vars,
)
from .parser import (
    NegativePowerWarning,
    ParseError,
    UnboundVariableError,
    parse_expr,
    parse_identity,
    parse_identity_file,
    tokenize,
)
from .printer import format_condition, format_expr, format_identity

__all__ = [
    "Add", "Binom", "CompiledIdentity", "Condition", "EvalError", "Expr", "Fib",
    "IdentityAst", "InstanceResult", "IntLit", "Mul", "Neg", "NegativePowerWarning",
    "ParseError", "Pow", "Sub", "Sum", "UnboundVariableError", "Var", "Verdict",
    "check_instance", "compile_expr", "violated_constraints", "eval_expr", "format_condition",
    "format_expr", "format_identity", "free_vars", "parse_expr", "parse_identity",
    "parse_identity_file", "tokenize",
]
