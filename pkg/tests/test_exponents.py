from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exceptions import CriticalExponent, ExponentOutOfRange, RationalParseError
from exponents import (
    BOUNDED,
    ENERGY_CLASS,
    INF,
    BochnerSpec,
    ExtRational,
    Q,
    embeds,
    format_rational,
    holder_combine,
    morrey_lift,
    parse_rational,
    scaling_level,
    sobolev_lift,
)

positive = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=60)
exponent = st.one_of(st.fractions(min_value=1, max_value=80, max_denominator=40).map(Q), st.just(INF))
specs = st.builds(BochnerSpec, exponent, exponent)


def test_lowest_terms_and_sign():
    x = Q(6, -4)
    assert x.numerator == -3
    assert x.denominator == 2


def test_infinity_order_and_reciprocals():
    assert Q(10 ** 30) < INF
    assert INF.reciprocal() == 0
    assert Q(0).reciprocal() == INF
    assert Q(3, 7).reciprocal() == Q(7, 3)


def test_to_float():
    assert Q(3, 4).to_float() == 0.75
    assert INF.to_float() == float("inf")


def test_infinity_arithmetic():
    assert INF + 5 == INF
    assert 2 * INF == INF
    with pytest.raises(ArithmeticError):
        Q(1) - INF
    with pytest.raises(ArithmeticError):
        INF / INF
    with pytest.raises(ArithmeticError):
        -INF


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        ExtRational(2.5)


@pytest.mark.parametrize("text, expected", [
    ("9/5", Q(9, 5)),
    (" 12 ", Q(12)),
    ("-3/6", Q(-1, 2)),
    ("inf", INF),
    ("Infinity", INF),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["2.5", "1/0", "", "a/b", "3//4"])
def test_parse_rational_rejects(text):
    with pytest.raises(RationalParseError):
        parse_rational(text)


def test_parse_error_is_value_error():
    assert issubclass(RationalParseError, ValueError)


@given(st.fractions(max_denominator=10 ** 6))
def test_format_parse_round_trip(f):
    x = Q(f)
    assert parse_rational(format_rational(x)) == x


def test_format_rational():
    assert format_rational(Q(24, 7)) == "24/7"
    assert format_rational(Q(12)) == "12"
    assert format_rational(INF) == "inf"


def test_ceil_floor():
    assert Q(22, 3).ceil() == 8
    assert Q(22, 3).floor() == 7
    with pytest.raises(ArithmeticError):
        INF.ceil()


@pytest.mark.parametrize("a, b, expected", [
    (BochnerSpec.of(3, 6), BochnerSpec.of(6, 3), BochnerSpec.of(2, 2)),
    (BochnerSpec.of(4, 8), ENERGY_CLASS, BochnerSpec.of(4, Q(8, 5))),
    (BOUNDED, BochnerSpec.of(7, Q(9, 5)), BochnerSpec.of(7, Q(9, 5))),
])
def test_holder_combine(a, b, expected):
    assert holder_combine(a, b) == expected


@given(positive.map(Q))
def test_holder_with_energy_class(alpha):
    beta = alpha + 1
    lam = BochnerSpec(alpha, beta)
    assert holder_combine(lam, ENERGY_CLASS) == BochnerSpec(alpha, 2 * beta / (2 + beta))


@given(specs, specs, specs)
def test_holder_commutative_associative_with_identity(a, b, c):
    assert holder_combine(a, b) == holder_combine(b, a)
    assert holder_combine(holder_combine(a, b), c) == holder_combine(a, holder_combine(b, c))
    assert holder_combine(a, BOUNDED) == a


@given(specs, specs)
def test_scaling_level_is_additive(a, b):
    assert scaling_level(holder_combine(a, b)) == scaling_level(a) + scaling_level(b)


def test_holder_may_leave_admissible_range():
    s = holder_combine(BochnerSpec.of(1, 1), BochnerSpec.of(1, 1))
    assert s == BochnerSpec.of(Q(1, 2), Q(1, 2))
    assert not s.is_admissible()


@pytest.mark.parametrize("q, expected", [
    (Q(9, 5), Q(9, 2)),
    (Q(2), Q(6)),
    (Q(4), INF),
    (Q(1), Q(3, 2)),
])
def test_sobolev_lift(q, expected):
    assert sobolev_lift(q) == expected


def test_sobolev_lift_errors():
    with pytest.raises(CriticalExponent):
        sobolev_lift(3)
    with pytest.raises(ExponentOutOfRange):
        sobolev_lift(Q(1, 2))
    with pytest.raises(ExponentOutOfRange):
        morrey_lift(3)


@given(st.fractions(min_value=1, max_value=Fraction(299, 100), max_denominator=100),
       st.fractions(min_value=Fraction(1, 100), max_value=1, max_denominator=100))
def test_sobolev_lift_increasing(q, step):
    q1, q2 = Q(q), Q(min(q + step, Fraction(299, 100)))
    if q2 > q1:
        assert sobolev_lift(q2) > sobolev_lift(q1)


def test_embeds():
    assert embeds(BochnerSpec.of(3, 2), BochnerSpec.of(2, 2))
    assert not embeds(BochnerSpec.of(2, 2), BochnerSpec.of(3, 2))
    assert embeds(BOUNDED, BochnerSpec.of(17, Q(9, 5)))


@pytest.mark.parametrize("spec, level", [
    (BochnerSpec.of(Q(5, 2), 2), Q(23, 10)),
    (BOUNDED, Q(0)),
    (BochnerSpec.of(Q(8, 3), Q(48, 25)), Q(37, 16)),
])
def test_scaling_level(spec, level):
    assert scaling_level(spec) == level
