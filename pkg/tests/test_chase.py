from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import configs, steps
from pascal_chase.chase import (
    Drop,
    Lift,
    ProofScript,
    ShiftRight,
    StepError,
    SwapSym,
    WeightedConfig,
    apply_step,
    apply_steps,
    check_script,
    eval_config,
    lift_row,
    lift_row_steps,
)
from pascal_chase.exact import Weight
from pascal_chase.scripts import generate_script


def test_eval_examples():
    assert eval_config(WeightedConfig({(8, 4): 1})) == 70
    assert eval_config(WeightedConfig()) == 0
    assert eval_config(WeightedConfig.from_row(6, [1] * 7)) == 64
    assert eval_config(WeightedConfig.from_row(6, range(7))) == 192


def test_canonical_form_drops_zero_and_phantom():
    c = WeightedConfig({(3, 5): 4, (2, 1): 0, (2, -1): 7, (1, 1): 2})
    assert c.as_dict() == {(1, 1): 2}
    assert WeightedConfig([((2, 1), 1), ((2, 1), -1)]) == WeightedConfig()


def test_lift_split():
    out = apply_step(WeightedConfig({(2, 1): 1}), Lift(2, 1, 1))
    assert out == WeightedConfig({(1, 0): 1, (1, 1): 1})


def test_drop_through_phantom():
    out = apply_step(WeightedConfig({(2, 2): 1}), Drop(2, 2, 1))
    assert out == WeightedConfig({(3, 3): 1})


def test_shift_right():
    out = apply_step(WeightedConfig({(4, 0): 1}), ShiftRight(4, 0, 1))
    assert out.as_dict() == {(5, 1): 1, (4, 1): -1}
    assert eval_config(out) == 1


def test_swaps_on_row_five():
    c = WeightedConfig.from_row(5, [1, 3, 5, 7, 9, 11])
    out = apply_steps(c, [SwapSym(5, 1), SwapSym(5, 2)])
    assert out.row(5) == [1, 9, 7, 5, 3, 11]
    assert eval_config(out) == eval_config(c) == 192


def test_step_errors():
    with pytest.raises(StepError, match="cannot lift above apex"):
        apply_step(WeightedConfig({(0, 0): 1}), Lift(0, 0, 1))
    with pytest.raises(StepError):
        apply_step(WeightedConfig(), SwapSym(3, 4))
    with pytest.raises(ValueError):
        WeightedConfig({(-1, 0): 1})


def test_steps_are_hashable_values():
    assert Lift(3, 1, 2) == Lift(3, 1, Weight.const(2))
    assert len({Lift(3, 1, 2), Lift(3, 1, 2), Drop(3, 1, 2)}) == 2


# -- lift_row --------------------------------------------------------------------------


def test_lift_row_examples():
    assert lift_row(WeightedConfig.from_row(6, range(7)), 6).row(5) == [1, 3, 5, 7, 9, 11]
    assert lift_row(WeightedConfig.from_row(7, [1] * 8), 7).row(6) == [2] * 7
    assert lift_row(WeightedConfig.from_row(5, [1, -1] * 3), 5) == WeightedConfig()


def test_lift_row_rejects_apex():
    with pytest.raises(StepError):
        lift_row(WeightedConfig({(0, 0): 1}), 0)


@given(st.integers(1, 15), st.data())
def test_lift_row_pairwise_sums(n, data):
    ws = data.draw(st.lists(st.integers(-9, 9), min_size=n + 1, max_size=n + 1))
    c = WeightedConfig.from_row(n, ws)
    up = lift_row(c, n)
    assert up.row(n - 1) == [ws[j] + ws[j + 1] for j in range(n)]
    assert up == apply_steps(c, [Lift(n, k, w) for k, w in enumerate(ws) if w])
    assert lift_row_steps(c, n) == [Lift(n, k, w) for k, w in enumerate(ws) if w]


# -- invariants ------------------------------------------------------------------------


@given(configs(), steps())
def test_step_invariance(c, s):
    try:
        out = apply_step(c, s)
    except StepError:
        return
    assert eval_config(out) == eval_config(c)


@given(configs(), st.lists(steps(), max_size=6))
def test_sequences_preserve_value(c, ss):
    ss = [s for s in ss if not (isinstance(s, SwapSym) and not 0 <= s.k <= s.n)]
    assert eval_config(apply_steps(c, ss)) == eval_config(c)


@given(configs(symbolic=False))
def test_swap_is_involution(c):
    for n, k in c.coords():
        assert apply_steps(c, [SwapSym(n, k), SwapSym(n, k)]) == c


@given(configs(max_row=12), st.integers(1, 12), st.data())
def test_lift_then_drops_restores(c, n, data):
    k = data.draw(st.integers(0, n))
    w = Fraction(data.draw(st.integers(1, 5)), 3)
    lifted = apply_step(c, Lift(n, k, w))
    # the two cells above (n, k) are both (n-1, k-1) and (n-1, k); one Drop puts w back
    back = apply_step(lifted, Drop(n - 1, k - 1, w))
    assert back == c
    assert eval_config(lifted) == eval_config(c)


def test_phantom_canonicalization_sound():
    raw = {(3, -1): 5, (3, 4): -2, (3, 1): 1}
    assert eval_config(WeightedConfig(raw)) == 3


def test_symbolic_weights(a, b):
    c = WeightedConfig({(2, 0): a * a, (2, 1): a * b, (2, 2): b * b})
    assert eval_config(lift_row(c, 2)) == eval_config(c) == a ** 2 + 2 * a * b + b ** 2


# -- checker --------------------------------------------------------------------------


def test_row_sum_script_valid():
    report = check_script(generate_script("row_sum", n=3))
    assert report.valid
    assert report.value == 8
    assert set(report.step_values) == {8}
    assert report.summary() == "VALID, value 8"


def test_hockey_stick_script():
    report = check_script(generate_script("hockey_stick", m=2, n=5))
    assert report.valid and report.value == 20
    assert report.final == WeightedConfig({(6, 3): 1})


def _tamper(script, index, w):
    steps = list(script.steps)
    steps[index] = replace(steps[index], w=Weight.const(w))
    return replace(script, steps=tuple(steps))


def test_tampered_weight_invalid():
    script = generate_script("row_sum", n=2)
    assert script.steps[0] == Lift(2, 0, 1)
    report = check_script(_tamper(script, 0, 2))
    assert not report.valid
    assert report.failure.step == 0
    assert report.summary() == \
        "INVALID at step 0: lift(2,0,2) draws more than cell (2,0) holds (expected 1, got 2)"


def test_reordered_steps_invalid():
    script = generate_script("row_sum", n=3)
    report = check_script(replace(script, steps=tuple(reversed(script.steps))))
    assert not report.valid and report.failure.step == 0


def test_wrong_final_configuration():
    script = generate_script("row_sum", n=3)
    report = check_script(replace(script, expected_final=WeightedConfig({(0, 0): 7})))
    assert not report.valid
    assert report.failure.step == len(script.steps)


def test_wrong_identity_side():
    script = generate_script("row_sum", n=3)
    report = check_script(replace(script, rhs_text="2^n + 1"))
    assert not report.valid
    assert "right side" in report.failure.reason


def test_inapplicable_step_reported():
    script = ProofScript("t", {}, WeightedConfig({(0, 0): 1}), (Lift(0, 0, 1),),
                         WeightedConfig(), "1", "1")
    report = check_script(script)
    assert not report.valid and "apex" in report.failure.reason


def test_replay_yields_every_stage():
    script = generate_script("row_sum", n=3)
    stages = list(script.replay())
    assert len(stages) == len(script.steps) + 1
    assert stages[0] == script.initial and stages[-1] == script.expected_final
