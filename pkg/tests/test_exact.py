from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import weights
from pascal_chase.exact import (
    ONE,
    ZERO,
    Weight,
    WeightParseError,
    contains,
    format_weight,
    parse_weight,
    weight_add,
    weight_mul,
    weight_pow,
    weight_sum,
)


def test_rational_addition():
    assert weight_add(Weight.const(Fraction(1, 2)), Weight.const(Fraction(1, 3))) == Fraction(5, 6)


def test_cancellation(a, b):
    assert weight_add(a + b, -b) == a


def test_zero_is_additive_identity(a):
    assert ZERO + a == a
    assert ZERO.is_zero() and not ZERO


def test_square_of_binomial(a, b):
    assert weight_mul(a + b, a + b) == a ** 2 + 2 * a * b + b ** 2


def test_multiplicative_identity_and_signs(a):
    assert weight_mul(a, ONE) == a
    assert weight_mul(Weight.const(-1), Weight.const(-1)) == 1


@pytest.mark.parametrize("base, e, expected", [(2, 5, 32), (-1, 3, -1), (0, 0, 1), (7, 0, 1)])
def test_pow_constants(base, e, expected):
    assert weight_pow(Weight.const(base), e) == expected


def test_pow_zero_exponent_symbolic(a, b):
    assert weight_pow(a + b, 0) == 1


def test_negative_exponent_rejected(a):
    with pytest.raises(ValueError):
        weight_pow(a, -1)


def test_constants_hash_like_numbers():
    assert hash(Weight.const(5)) == hash(5)
    assert hash(Weight.const(Fraction(3, 4))) == hash(Fraction(3, 4))
    assert {Weight.const(5): "x"}[5] == "x"


def test_integral_fractions_normalize():
    w = Weight.const(Fraction(6, 3))
    assert w.constant() == 2 and isinstance(w.constant(), int)


def test_indeterminates_and_degree(a, b):
    w = a ** 2 * b + 3
    assert w.indeterminates() == {"a", "b"}
    assert w.degree() == 3
    assert not w.is_constant()
    with pytest.raises(ValueError):
        w.constant()


def test_weight_sum():
    assert weight_sum([1, Fraction(1, 2), Weight.const(Fraction(1, 2))]) == 2


# -- codec ------------------------------------------------------------------


@pytest.mark.parametrize("w, text", [
    (Weight.const(-35), "-35"),
    (Weight.const(Fraction(3, 4)), "3/4"),
    (ZERO, "0"),
])
def test_format_constants(w, text):
    assert format_weight(w) == text


def test_canonical_term_order(a, b):
    assert format_weight(a ** 2 * b * Fraction(1, 2)) == "1/2*a^2*b"
    assert format_weight((a + b) ** 2) == "a^2+2*a*b+b^2"
    assert format_weight(b - a ** 3 + 1) == "-a^3+b+1"


def test_round_trip_big_integer():
    w = Weight.const(2 ** 200)
    assert parse_weight(format_weight(w)) == w


@pytest.mark.parametrize("text", ["3/4", "-35", "1/2*a^2*b", "a^2+2*a*b+b^2", "-a+b", "x_1^3-2/7"])
def test_parse_then_format_is_stable(text):
    assert format_weight(parse_weight(text)) == text


@pytest.mark.parametrize("text, offset", [
    ("1/0", 2),
    ("a^0", 2),
    ("2*", 2),
    ("1 2", 2),
    ("a+é", 2),
    ("3 % 4", 2),
])
def test_parse_errors_carry_byte_offset(text, offset):
    with pytest.raises(WeightParseError) as err:
        parse_weight(text)
    assert err.value.offset == offset


def test_parse_merges_like_terms():
    assert parse_weight("a+a-2*a") == ZERO


# -- containment ------------------------------------------------------------------


def test_contains(a):
    assert contains(Weight.const(3), Weight.const(2))
    assert not contains(Weight.const(1), Weight.const(2))
    assert not contains(Weight.const(1), Weight.const(-1))
    assert contains(Weight.const(-3), Weight.const(-3))
    assert contains(2 * a + 1, a)
    assert not contains(ZERO, a)
    assert contains(a, ZERO)


# -- laws --------------------------------------------------------------------------


@given(weights(), weights(), weights())
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO


@given(weights())
def test_codec_round_trip(w):
    assert parse_weight(format_weight(w)) == w


@given(weights(), st.integers(0, 4), st.integers(0, 4))
def test_pow_adds_exponents(x, m, n):
    assert weight_pow(x, m + n) == weight_mul(weight_pow(x, m), weight_pow(x, n))
