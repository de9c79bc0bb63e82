"""Exact values of the form q0 + sum_p q_p log p."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hmpseries import DomainNotClosed, LogLinearValue, factor_positive
from hmpseries.loglinear import _LLAccumulator

rationals = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=40
)
positives = st.fractions(
    min_value=Fraction(1, 40), max_value=Fraction(50), max_denominator=40
)


def test_factor_positive_small():
    assert factor_positive(12) == ((2, 2), (3, 1))
    assert factor_positive(Fraction(9, 10)) == ((2, -1), (3, 2), (5, -1))
    assert factor_positive(1) == ()


def test_factor_positive_rejects_nonpositive():
    with pytest.raises(ValueError):
        factor_positive(0)
    with pytest.raises(ValueError):
        factor_positive(Fraction(-3, 4))


def test_factor_positive_large_composite():
    # Needs more than naive trial division to finish quickly.
    n = 1000003 * 999983
    assert factor_positive(n) == ((999983, 1), (1000003, 1))


def test_log_of_builds_prime_combination():
    v = LogLinearValue.log_of(Fraction(8, 9))
    assert v.rat == 0
    assert v.log_dict() == {2: Fraction(3), 3: Fraction(-2)}
    assert math.isclose(float(v), math.log(8 / 9))


def test_log_of_one_is_zero():
    v = LogLinearValue.log_of(1)
    assert v == LogLinearValue.make(0)
    assert not v


def test_canonical_form_drops_zero_coefficients():
    a = LogLinearValue(Fraction(1), ((3, Fraction(0)), (2, Fraction(1))))
    assert a.logs == ((2, Fraction(1)),)


def test_equality_is_real_number_equality():
    # log 4 = 2 log 2, built two different ways.
    a = LogLinearValue.log_of(4)
    b = LogLinearValue.log_of(2) * 2
    assert a == b
    assert hash(a) == hash(b)


def test_equality_against_plain_rationals():
    assert LogLinearValue.make(Fraction(3, 4)) == Fraction(3, 4)
    assert hash(LogLinearValue.make(Fraction(3, 4))) == hash(Fraction(3, 4))
    assert LogLinearValue.log_of(2) != Fraction(0)
    assert LogLinearValue.make(0) == 0


def test_mixed_arithmetic():
    v = LogLinearValue.log_of(2) * Fraction(-8, 5) + LogLinearValue.log_of(5)
    w = LogLinearValue.log_of(5) - Fraction(8, 5) * LogLinearValue.log_of(2)
    assert v == w
    assert math.isclose(float(v), math.log(5) - 1.6 * math.log(2))


def test_product_of_two_log_values_is_rejected():
    a = LogLinearValue.log_of(2)
    with pytest.raises(DomainNotClosed):
        a * a


def test_scaling_by_rational_and_division():
    v = LogLinearValue.make(Fraction(3, 4))
    assert (v * Fraction(2, 3)).rat == Fraction(1, 2)
    assert (v / 3).rat == Fraction(1, 4)


def test_render_examples():
    assert LogLinearValue.make(Fraction(-4, 3)).render() == "-4/3"
    assert LogLinearValue.log_of(2).render() == "log(2)"
    v = LogLinearValue.log_of(2) * Fraction(-8, 5) + LogLinearValue.log_of(5)
    assert v.render() == "-8/5·log(2) + log(5)"


@given(positives, positives)
def test_log_turns_products_into_sums(p, q):
    assert LogLinearValue.log_of(p * q) == (
        LogLinearValue.log_of(p) + LogLinearValue.log_of(q)
    )


@given(rationals, rationals, positives)
def test_linearity_in_the_rational_part(a, b, p):
    v = LogLinearValue.make(a) + LogLinearValue.log_of(p)
    w = v * b
    assert w.rat == a * b
    assert float(w) == pytest.approx(float(v) * float(b), rel=1e-12, abs=1e-12)


@given(st.lists(positives, min_size=1, max_size=8))
def test_accumulator_matches_naive_sum(ps):
    total = sum(ps)
    probs = [p / total for p in ps]
    acc = _LLAccumulator()
    naive = LogLinearValue.make(0)
    for p in probs:
        acc.add_neg_plogp(p)
        naive = naive + LogLinearValue.log_of(p) * (-p)
    assert acc.value() == naive
