import itertools

import pytest

from pascal_chase.chase import (
    Lift,
    ProofScript,
    SwapSym,
    WeightedConfig,
    apply_steps,
    check_script,
    eval_config,
)
from pascal_chase.harness import SweepSpec
from pascal_chase.lang import eval_expr, format_identity, parse_identity, violated_constraints
from pascal_chase.render import trace
from pascal_chase.scripts import (
    CATALOG,
    ScriptError,
    builtin_identity,
    builtin_ranges,
    catalog_list,
    chase_steps,
    generate_script,
    mirror_transfer,
    reverse_lifts,
)

SCRIPTED = [e.id for e in catalog_list() if e.has_script]


def _tuples(tid, bound):
    """Every valid parameter tuple of ``tid`` with all parameters <= ``bound``."""
    ast = builtin_identity(tid)
    spec = SweepSpec.build(tid, builtin_ranges(tid, bound))
    return [b for b in spec.bindings() if not violated_constraints(ast, b)]


def _rows(labels):
    out = {}
    for (n, k), w in sorted(labels.items()):
        out.setdefault(n, []).append(str(w))
    return out


# -- catalog -----------------------------------------------------------------------------


def test_catalog_order_and_size():
    ids = [e.id for e in catalog_list()]
    assert len(ids) == 22 == len(set(ids))
    assert ids[0] == "row_sum"
    assert ids[-2:] == ["fib_row", "fib_quarterly"]


def test_boscarol_constraint_listed():
    (entry,) = [e for e in catalog_list() if e.id == "boscarol"]
    assert entry.summary()["constraints"] == ["m <= n"]
    assert entry.figure_ref == "Fig. 16"


@pytest.mark.parametrize("tid, text", [
    ("row_sum", "sum(k=0..n, C(n,k)) == 2^n for n"),
    ("lagrange", "sum(k=0..n, C(n,k)^2) == C(2*n,n) for n"),
    ("hor", "sum(k=n..2*n, (-1)^k * C(k,n) * C(n,k-n)) == 1 for n"),
])
def test_builtin_identity(tid, text):
    assert builtin_identity(tid) == parse_identity(text)


def test_builtin_identity_unknown():
    with pytest.raises(ScriptError):
        builtin_identity("fermat")


def test_summaries_carry_identity_text():
    for e in catalog_list():
        s = e.summary()
        assert s["id"] == e.id
        assert parse_identity(s["identity"]) == e.identity
        assert s["script"] == (e.id not in ("fib_row", "fib_quarterly"))


# -- generate_script errors ------------------------------------------------------------------


def test_unknown_id():
    with pytest.raises(ScriptError, match="unknown"):
        generate_script("nope", n=1)


def test_constraint_violation_named():
    with pytest.raises(ScriptError, match="requires m < n"):
        generate_script("alt_binom", n=3, m=3)
    with pytest.raises(ScriptError, match="requires m <= n"):
        generate_script("hockey_stick", n=2, m=5)


def test_bad_parameters():
    with pytest.raises(ScriptError):
        generate_script("row_sum")
    with pytest.raises(ScriptError):
        generate_script("row_sum", n=2, m=1)
    with pytest.raises(ScriptError, match="nonnegative"):
        generate_script("row_sum", n=-1)


@pytest.mark.parametrize("tid, params", [("fib_row", {"n": 1}), ("fib_quarterly", {"n": 1, "m": 2})])
def test_fibonacci_has_no_script(tid, params):
    with pytest.raises(ScriptError, match="no script available"):
        generate_script(tid, params)


# -- worked examples ---------------------------------------------------------------------


def test_row_sum_two():
    s = generate_script("row_sum", n=2)
    assert s.initial == WeightedConfig.from_row(2, [1, 1, 1])
    assert s.expected_final == WeightedConfig({(0, 0): 4})
    stages = list(s.replay())
    assert WeightedConfig.from_row(1, [2, 2]) in stages
    assert check_script(s).value == 4


def test_lagrange_figure_rows():
    s = generate_script("lagrange", n=4)
    rows = _rows(trace(s).labels)
    assert [" ".join(rows[r]) for r in range(8, 3, -1)] == \
        ["1", "1 1", "1 2 1", "1 3 3 1", "1 4 6 4 1"]
    assert set(check_script(s).step_values) == {70}


def test_alt_binom_figure_rows():
    s = generate_script("alt_binom", n=8, m=3)
    rows = _rows(trace(s).labels)
    assert rows[8] == ["1", "-4", "10", "-20", "35", "-56"]
    assert rows[7] == ["1", "-3", "6", "-10", "15", "-21"]
    assert rows[6] == ["1", "-2", "3", "-4", "5", "-6"]
    assert rows[5] == ["1", "-1", "1", "-1", "1", "-1"]
    assert check_script(s).value == 0


def test_boscarol_figure_weights():
    s = generate_script("boscarol", m=3, n=7)
    report = check_script(s)
    assert report.valid and report.value == 256
    assert s.expected_final == WeightedConfig.from_row(7, [2] * 8)
    seen = {}
    for c in s.replay():
        for coord, w in c.items():
            seen.setdefault(coord, set()).add(w)
    assert 16 in seen[(3, 3)] and 16 in seen[(4, 4)]


def test_weighted_row_first_round():
    s = generate_script("weighted_row", n=6)
    first = s.steps[:6]
    assert all(isinstance(st, Lift) and st.n == 6 for st in first)
    after = list(s.replay())[6]
    assert after.row(5) == [1, 3, 5, 7, 9, 11]
    assert any(isinstance(st, SwapSym) for st in s.steps)


def test_hockey_gen_final_stays_in_column():
    for b in _tuples("hockey_gen", 7):
        s = generate_script("hockey_gen", b)
        assert {k for _, k in s.expected_final.coords()} <= {b["m"]}
        assert check_script(s).valid


def test_binomial_theorem_symbolic(a, b):
    report = check_script(generate_script("binomial_theorem", n=3))
    assert report.valid and report.value == (a + b) ** 3


# -- validity across parameters ---------------------------------------------------------------


@pytest.mark.parametrize("tid", SCRIPTED)
def test_scripts_valid_small(tid):
    bound = 4 if tid == "knuth" else 8
    for b in _tuples(tid, bound):
        s = generate_script(tid, b)
        report = check_script(s)
        assert report.valid, (b, report.summary())
        ast = builtin_identity(tid)
        lhs = eval_expr(ast.lhs, b, ast.indeterminates)
        rhs = eval_expr(ast.rhs, b, ast.indeterminates)
        assert eval_config(s.initial) == eval_config(s.expected_final) == lhs == rhs


def test_identity_text_round_trips_in_scripts():
    s = generate_script("upside_down_cv", n=5, m=1, l=2)
    assert parse_identity(format_identity(builtin_identity("upside_down_cv"))) == \
        parse_identity(s.identity_text)


# -- helpers -------------------------------------------------------------------------------


def test_chase_steps_and_reverse():
    start = WeightedConfig({(4, 2): 1})
    target = WeightedConfig.from_row(2, [1, 2, 1])
    steps = chase_steps(start, target)
    assert apply_steps(start, steps) == target
    assert apply_steps(target, reverse_lifts(steps)) == start


def test_mirror_transfer_moves_weight():
    c = WeightedConfig({(4, 1): 3})
    steps = mirror_transfer(dict(c.as_dict()), 4, 1, 3)
    out = apply_steps(c, steps)
    assert out == WeightedConfig({(4, 3): 3})
    script = ProofScript("t", {}, c, tuple(steps), out, "12", "12")
    assert check_script(script).valid


def test_catalog_ranges_cover_params():
    for tid, entry in CATALOG.items():
        names = [r.split("=")[0] for r in entry.sweep_ranges(3)]
        assert sorted(names) == sorted(entry.params)
        assert not any("B" in r for r in entry.sweep_ranges(3))


def test_tuples_helper_honours_constraints():
    tuples = _tuples("upside_down_cv", 3)
    assert all(t["l"] + t["m"] <= t["n"] for t in tuples)
    assert len(tuples) == sum(1 for n, m, l in itertools.product(range(4), repeat=3) if l + m <= n)
