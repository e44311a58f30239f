from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from strategies import positive_rationals, rationals
from sympack.realnum import HighPrecisionReal, interval_context, iv_rational


def sqrt2(precision):
    return HighPrecisionReal.compute(lambda ctx: ctx.sqrt(ctx.mpf(2)), precision)


def test_sqrt2_enclosure():
    v = sqrt2(50)
    assert v.width <= F(1, 10**50)
    assert v.lower**2 < 2 < v.upper**2
    lo, hi = v.decimal_bounds(30)
    assert lo == "1.414213562373095048801688724209"
    assert hi == "1.414213562373095048801688724210"


def test_pi_against_reference():
    v = HighPrecisionReal.compute(lambda ctx: ctx.pi, 60)
    with mp.workdps(100):
        ref = F(mp.nstr(mp.pi, 90))
    assert v.contains(ref)


@pytest.mark.parametrize("p", [10, 30, 50, 80])
def test_width_meets_precision(p):
    assert sqrt2(p).width <= F(1, 10**p)
    assert sqrt2(p).contains(sqrt2(p + 20).midpoint())


def test_outward_rounding():
    v = HighPrecisionReal(F(1, 3), F(2, 3))
    assert v.decimal_bounds(3) == ("0.333", "0.667")
    w = HighPrecisionReal(F(-2, 3), F(-1, 3))
    assert w.decimal_bounds(3) == ("-0.667", "-0.333")


@given(rationals(-50, 50, 999), st.integers(1, 30))
def test_decimal_bounds_enclose(q, digits):
    v = HighPrecisionReal.from_rational(q)
    lo, hi = v.decimal_bounds(digits)
    assert F(lo) <= q <= F(hi)
    assert F(hi) - F(lo) <= F(2, 10**digits)


@given(positive_rationals(100, 50))
def test_rational_lift_encloses(q):
    ctx = interval_context(40)
    v = HighPrecisionReal.from_interval(ctx.sqrt(iv_rational(ctx, q)), 40)
    assert v.lower**2 <= q <= v.upper**2


def test_comparisons_and_json():
    a = HighPrecisionReal.from_rational(F(1, 2))
    b = sqrt2(50)
    assert a.certainly_lt(b) and b.certainly_gt(1) and a.certainly_le(F(1, 2))
    assert not b.certainly_lt(b)
    assert a.to_json() == {"lower": "0." + "5" + "0" * 49, "upper": "0.5" + "0" * 49, "exact": "1/2"}
    assert str(a) == "1/2"
    assert str(b).startswith("[1.41421356237309504880")


def test_invalid_intervals():
    with pytest.raises(ValueError):
        HighPrecisionReal(F(1), F(0))
    with pytest.raises(ValueError):
        HighPrecisionReal(F(0), F(1), exact=F(2))
    with pytest.raises(ArithmeticError):
        HighPrecisionReal.from_interval(interval_context(5).mpf([0, 1]), 5)
