"""Per-site mixed derivatives and their vanishing/padding/blocking rules."""

import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings

from hmpseries import (
    FLOAT64,
    LogLinearValue,
    MultiPoly,
    MultiSiteSpec,
    WeightCapExceeded,
    am_binary,
    high_snr_binary,
    increment_jet,
    multisite_derivative,
    multisite_value,
)

from util import am_specs, high_snr_specs, ll_close

F = Fraction
ZERO = LogLinearValue.make(0)


# ---------------------------------------------------------------------------
# MultiPoly unit behaviour
# ---------------------------------------------------------------------------

def test_multipoly_arithmetic_with_caps():
    caps = (2, 1)
    x = MultiPoly.linear(F(0), 0, F(1), caps)
    y = MultiPoly.linear(F(0), 1, F(1), caps)
    p = (x + y) * (x + y)
    assert p.coefficient((2, 0)) == 1
    assert p.coefficient((1, 1)) == 2
    assert p.coefficient((0, 2)) == 0  # over the per-variable cap, dropped
    cube = p * x
    assert cube.coefficient((3, 0)) == 0  # over the cap on the first variable
    assert cube.coefficient((2, 1)) == 2
    assert (x * y).coefficient((1, 1)) == 1


def test_multipoly_constant_and_zero():
    caps = (1, 1)
    one = MultiPoly.constant(F(1), caps)
    zero = MultiPoly.constant(F(0), caps)
    assert bool(one) and not bool(zero)
    assert (one - one) == zero


# ---------------------------------------------------------------------------
# Mixed derivatives
# ---------------------------------------------------------------------------

def test_weight_and_site_caps():
    spec = am_binary(F(3, 5))
    with pytest.raises(WeightCapExceeded):
        multisite_derivative(MultiSiteSpec(3, (2, 2, 1)), spec)
    with pytest.raises(WeightCapExceeded):
        multisite_derivative(MultiSiteSpec(7, (1, 0, 0, 0, 0, 0, 0)), spec)


def test_zeroth_derivative_is_the_window_increment():
    hs = high_snr_binary(F(1, 5))
    got = multisite_derivative(MultiSiteSpec(3, (0, 0, 0)), hs)
    want = increment_jet(hs, 3, 0).coeffs[0]
    assert got == want


@pytest.mark.parametrize("kvec", [(1, 0, 1, 0), (0, 2, 1, 0), (1, 0, 0, 1)])
def test_interior_zero_blocks_make_derivatives_vanish(kvec):
    # A zero strictly between active sites forces an exact zero.
    mspec = MultiSiteSpec(len(kvec), kvec)
    assert multisite_derivative(mspec, high_snr_binary(F(1, 5))) == ZERO
    assert multisite_derivative(mspec, am_binary(F(3, 5))) == ZERO


def test_leading_zeros_pad_without_changing_the_value():
    for spec in (high_snr_binary(F(1, 5)), am_binary(F(3, 5))):
        base = multisite_derivative(MultiSiteSpec(2, (0, 2)), spec)
        for pad in (1, 2):
            padded = multisite_derivative(
                MultiSiteSpec(2 + pad, (0,) * pad + (0, 2)), spec
            )
            assert padded == base


def test_padding_values_match_expectation():
    assert multisite_derivative(
        MultiSiteSpec(2, (0, 2)), high_snr_binary(F(1, 5))
    ) == LogLinearValue.make(F(-9, 4))
    assert multisite_derivative(
        MultiSiteSpec(2, (0, 2)), am_binary(F(3, 5))
    ) == LogLinearValue.make(F(-324, 625))


@pytest.mark.parametrize("make_spec", [high_snr_binary, am_binary])
def test_composition_sum_recovers_jet_coefficient(make_spec):
    # Sum of F^kvec / prod(k_i!) over weight-k site patterns equals the
    # order-k coefficient of the one-parameter window increment.
    spec = make_spec(F(2, 5))
    n, k = 3, 2
    total = ZERO
    for kvec in product(range(k + 1), repeat=n):
        if sum(kvec) != k:
            continue
        d = multisite_derivative(MultiSiteSpec(n, kvec), spec)
        denom = 1
        for ki in kvec:
            denom *= math.factorial(ki)
        total = total + d * F(1, denom)
    assert total == increment_jet(spec, n, k).coeffs[k]


def test_blocking_reduces_to_the_suffix():
    # With a zero at site j and only zeros before it, the window collapses
    # onto the sites after j.
    params_full = (F(1, 7), F(1, 11), 0, F(1, 5), F(1, 9))
    params_tail = (0, F(1, 5), F(1, 9))
    for spec in (high_snr_binary(F(1, 5)), am_binary(F(3, 5))):
        full = multisite_value(spec, params_full)
        tail = multisite_value(spec, params_tail)
        assert full == tail


def test_blocking_float_backend_agrees():
    spec = high_snr_binary(F(1, 5))
    full = multisite_value(spec, (F(1, 7), F(1, 11), 0, F(1, 5), F(1, 9)), FLOAT64)
    tail = multisite_value(spec, (0, F(1, 5), F(1, 9)), FLOAT64)
    assert tail == pytest.approx(full, rel=1e-10)


@given(high_snr_specs(2))
@settings(max_examples=10, deadline=None)
def test_high_snr_interior_zero_property(spec):
    assert multisite_derivative(MultiSiteSpec(3, (1, 0, 1)), spec) == ZERO


@given(am_specs(2))
@settings(max_examples=10, deadline=None)
def test_am_interior_zero_property(spec):
    assert multisite_derivative(MultiSiteSpec(3, (1, 0, 1)), spec) == ZERO


@given(am_specs(2))
@settings(max_examples=8, deadline=None)
def test_am_float_derivative_tracks_exact(spec):
    mspec = MultiSiteSpec(3, (0, 1, 1))
    exact = multisite_derivative(mspec, spec)
    fast = multisite_derivative(mspec, spec, FLOAT64)
    assert ll_close(exact, fast, rel=1e-10)


def test_multisite_spec_validation():
    with pytest.raises(ValueError):
        MultiSiteSpec(2, (1, 0, 0))
    with pytest.raises(ValueError):
        MultiSiteSpec(2, (1, -1))
    assert MultiSiteSpec(3, (1, 2, 0)).weight == 3
