import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pascal_chase.lang import (
    Binom,
    CompiledIdentity,
    EvalError,
    IntLit,
    Neg,
    NegativePowerWarning,
    ParseError,
    Pow,
    Sum,
    UnboundVariableError,
    Var,
    Verdict,
    check_instance,
    eval_expr,
    format_expr,
    format_identity,
    parse_expr,
    parse_identity,
    parse_identity_file,
    violated_constraints,
)
from pascal_chase.scripts import CATALOG_TEXT, builtin_identity


def test_row_sum_shape():
    ast = parse_identity("sum(k=0..n, C(n,k)) == 2^n for n")
    assert ast.params == ("n",)
    assert ast.lhs == Sum("k", IntLit(0), Var("n"), Binom(Var("n"), Var("k")))
    assert ast.rhs == Pow(IntLit(2), Var("n"))


def test_constraint_parsed():
    ast = parse_identity("sum(k=m..n, C(k,m)) == C(n+1,m+1) for n, m where m <= n")
    assert ast.params == ("n", "m")
    (cond,) = ast.constraints
    assert (cond.left, cond.op, cond.right) == (Var("m"), "<=", Var("n"))


def test_signed_power_precedence():
    assert parse_expr("(-1)^k") == Pow(Neg(IntLit(1)), Var("k"))
    with pytest.warns(NegativePowerWarning):
        e = parse_expr("-1^k")
    assert e == Neg(Pow(IntLit(1), Var("k")))


def test_no_warning_for_signed_base():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse_expr("(-1)^k*C(n,k)")


def test_format_has_no_rewriting():
    assert format_expr(parse_expr("0 - x")) == "0 - x"
    assert format_expr(parse_expr("a-(b-c)")) == "a - (b - c)"
    assert format_expr(parse_expr("(a*b)^2")) == "(a*b)^2"
    assert format_expr(parse_expr("-(x^2)")) == "-x^2"


@pytest.mark.parametrize("tid", sorted(CATALOG_TEXT))
def test_catalog_round_trip(tid):
    ast = builtin_identity(tid)
    assert parse_identity(format_identity(ast)) == ast


def test_round_trip_upside_down_cv():
    text = "sum(k=m..n-l, C(k,m)*C(n-k,l)) == C(n+1,l+m+1) for n, m, l where l+m <= n"
    ast = parse_identity(text)
    assert format_identity(ast) == \
        "sum(k=m..n - l, C(k, m)*C(n - k, l)) == C(n + 1, l + m + 1) for n, m, l where l + m <= n"
    assert parse_identity(format_identity(ast)) == ast


# -- errors --------------------------------------------------------------------


def test_syntax_error_location_and_expected():
    with pytest.raises(ParseError) as err:
        parse_identity("sum(k=0..n, C(n,k) == 2^n for n")
    assert (err.value.line, err.value.column) == (1, 20)
    assert "')'" in err.value.expected


def test_unexpected_character():
    with pytest.raises(ParseError) as err:
        parse_identity("n ! 2 == 1 for n")
    assert err.value.column == 3


def test_unbound_variable():
    with pytest.raises(UnboundVariableError, match="'m'"):
        parse_identity("C(n,m) == 1 for n")


def test_constraint_must_use_params():
    with pytest.raises(UnboundVariableError):
        parse_identity("sum(k=0..n, k) == n for n where k < n")


def test_sum_var_may_not_shadow():
    with pytest.raises(ParseError, match="shadows"):
        parse_identity("sum(n=0..n, 1) == n+1 for n")


def test_duplicate_param():
    with pytest.raises(ParseError, match="twice"):
        parse_identity("n == n for n, n")


def test_reserved_words():
    with pytest.raises(ParseError):
        parse_identity("fib == 1 for fib")


def test_identity_file_positions():
    text = "# comment line\nsum(k=0..n, C(n,k)) == 2^n for n\n\nC(n,k == 1 for n, k\n"
    with pytest.raises(ParseError) as err:
        parse_identity_file(text)
    assert err.value.line == 4


def test_identity_file():
    text = "n == n for n  # trivial\n\n2*n == n+n for n\n"
    assert [a.params for a in parse_identity_file(text)] == [("n",), ("n",)]


# -- evaluation ------------------------------------------------------------------


def _lhs(tid, **bindings):
    ast = builtin_identity(tid)
    return eval_expr(ast.lhs, bindings, ast.indeterminates)


def test_row_sum_value():
    assert _lhs("row_sum", n=6) == 64


def test_boscarol_value():
    ast = builtin_identity("boscarol")
    first, second = ast.lhs.left, ast.lhs.right
    assert eval_expr(first, {"m": 3, "n": 7}) == 16 + 32 + 40 + 40 + 35
    assert eval_expr(second, {"m": 3, "n": 7}) == 8 + 20 + 30 + 35
    assert _lhs("boscarol", m=3, n=7) == 256


def test_binomial_theorem_symbolic(a, b):
    assert _lhs("binomial_theorem", n=2) == a ** 2 + 2 * a * b + b ** 2


def test_empty_sum_is_zero():
    assert eval_expr(parse_expr("sum(k=3..2, k)"), {}) == 0


def test_evaluation_errors():
    with pytest.raises(EvalError, match="unbound"):
        eval_expr(parse_expr("x + 1"), {})
    with pytest.raises(EvalError, match="negative exponent"):
        eval_expr(parse_expr("2^(n-3)"), {"n": 1})
    with pytest.raises(EvalError, match="symbolic"):
        eval_expr(parse_expr("sum(k=0..a, k)"), {}, ["a"])
    with pytest.raises(EvalError):
        eval_expr(parse_expr("C(n-2, 0)"), {"n": 1})


def test_sum_variable_restored():
    # an inner use of the same name after the sum must see the outer binding
    e = parse_expr("sum(k=0..2, k) + k")
    assert eval_expr(e, {"k": 10}) == 13


def test_check_instance_verdicts():
    assert check_instance(builtin_identity("hor"), {"n": 4}) is Verdict.PASSED
    assert check_instance(builtin_identity("lagrange_as_printed"), {"n": 2}) is Verdict.FAILED
    assert check_instance(builtin_identity("fib_row"), {"n": 5}) is Verdict.PASSED
    assert check_instance(builtin_identity("alt_binom"), {"n": 3, "m": 3}) is Verdict.SKIPPED


def test_check_instance_needs_all_params():
    with pytest.raises(EvalError, match="missing"):
        check_instance(builtin_identity("hockey_stick"), {"n": 3})


def test_compiled_identity_reports_sides():
    res = CompiledIdentity(builtin_identity("lagrange_as_printed")).run({"n": 2})
    assert (res.lhs, res.rhs) == (5, 6)


def test_violated_constraints():
    ast = builtin_identity("chu_vandermonde")
    assert violated_constraints(ast, {"l": 1, "m": 2, "n": 3}) == []
    (bad,) = violated_constraints(ast, {"l": 3, "m": 2, "n": 3})
    assert format_expr(bad.right) == "m"


def test_fib_convention_switch():
    e = parse_expr("fib(0 - 4)")
    assert eval_expr(e, {}) == -3
    assert eval_expr(e, {}, fib="zero") == 0
    assert eval_expr(e, {}, fib="mirror") == 3


@given(st.integers(-5, 5), st.integers(0, 6), st.integers(1, 6), st.integers(0, 8))
def test_sum_splitting(lo, gap, rest, n):
    mid = lo + gap
    hi = mid + rest
    body = parse_expr("C(n, k + 5)*(k + 7) + k^2")

    def total(a, b):
        return eval_expr(Sum("k", _lit(a), _lit(b), body), {"n": n})

    assert total(lo, mid) + total(mid + 1, hi) == total(lo, hi)


def _lit(v):
    return IntLit(v) if v >= 0 else Neg(IntLit(-v))
