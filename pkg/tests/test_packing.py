from fractions import Fraction as F

import pytest
from mpmath import mp
from hypothesis import given, strategies as st

from strategies import positive_rationals, unit_interval
from sympack.errors import BeyondDemazureRange, RangeError
from sympack.packing import (
    CP2,
    TRIVIAL_PIECES,
    TWISTED_PIECES,
    Ball,
    Ellipsoid,
    LinearForm,
    PackingResult,
    Polydisc,
    QuadraticSurd,
    SigmaGBundle,
    TrivialBundle,
    Twisted,
    full_packing_ratios,
    jiang_lower_bound,
    packing_number,
    piecewise_forms,
    pk_ball_highdim,
    pk_cp2,
    pk_ellipsoid,
    pk_piecewise_trivial,
    pk_piecewise_twisted,
    pk_polydisc,
    pk_rows_regime,
    pk_sigma_g,
    pk_trivial_infimum,
    pk_twisted_infimum,
    product_surfaces_lower,
    stability_bounds,
    vk_constant,
)

BALL4 = [1, F(1, 2), F(3, 4), 1, F(20, 25), F(24, 25), F(63, 64), F(288, 289), 1]
S2S2 = [F(1, 2), 1, F(2, 3), F(8, 9), F(9, 10), F(48, 49), F(224, 225)]
# what the exceptional classes give for the twisted bundle at a = b = 1
TWISTED_COMPUTED = [F(1, 2), F(9, 16), F(27, 32), F(25, 32), F(9, 10), F(48, 49), F(224, 225)]


@pytest.mark.parametrize("k", range(1, 10))
def test_ball4_values(k):
    assert pk_cp2(1, k).p == BALL4[k - 1]


@pytest.mark.parametrize("k", range(1, 8))
def test_s2s2_values(k):
    assert pk_trivial_infimum(1, 1, k).p == S2S2[k - 1]
    assert pk_piecewise_trivial(1, 1, k).p == S2S2[k - 1]


@pytest.mark.parametrize("k", range(1, 7))
def test_twisted_values_through_six(k):
    assert pk_twisted_infimum(1, 1, k).p == TWISTED_COMPUTED[k - 1]
    assert pk_piecewise_twisted(1, 1, k).p == TWISTED_COMPUTED[k - 1]


def test_twisted_seven_at_unit_square():
    # sharpest class is (4,4;3,3,3,3,3,3,3)-type with capacity (4a+4b)/15
    r = pk_twisted_infimum(1, 1, 7)
    assert r.p == F(224, 225)
    assert r.c_squared == F(64, 225)
    assert pk_piecewise_twisted(1, 1, 7).capacity_form == "(4a+4b)/15"


def test_examples():
    assert pk_trivial_infimum(2, 1, 4).p == 1
    assert pk_piecewise_trivial(3, 1, 6).p == 1
    assert pk_piecewise_trivial(1, 1, 7).c_squared == F(64, 225)
    assert pk_piecewise_twisted(1, 1, 4).p == F(25, 32)
    assert pk_piecewise_twisted(F(5, 2), 1, 5).p == 1
    assert pk_piecewise_twisted(9, 14, 7).p == 1
    assert pk_cp2(3, 5).p == F(4, 5)


def test_piecewise_forms_reported():
    r = pk_piecewise_trivial(1, F(3, 4), 3)
    assert r.capacity_form == "(a+b)/3"
    assert pk_piecewise_trivial(1, F(1, 2), 3).p == F(3, 4)


@pytest.mark.parametrize("table,family", [(TRIVIAL_PIECES, "trivial"), (TWISTED_PIECES, "twisted")])
def test_breakpoint_continuity(table, family):
    for k, (breaks, forms) in table.items():
        for i, r in enumerate(breaks):
            assert forms[i](1, r) == forms[i + 1](1, r), (family, k, r)


def test_alpha_beta_forms():
    # c_6 on the middle range reads (alpha + 3 beta)/6
    form = piecewise_forms("twisted", 6)[1]
    assert form.alpha_beta() == (F(1, 6), F(1, 2))
    assert LinearForm.from_alpha_beta(*form.alpha_beta()) == form


@given(positive_rationals(), positive_rationals())
def test_twisted_parameter_roundtrip(alpha, beta):
    t = Twisted.from_alpha_beta(alpha, beta)
    assert (t.alpha, t.beta) == (alpha, beta)


@given(unit_interval(), positive_rationals(10), st.integers(1, 7))
def test_trivial_engines_agree(r, a, k):
    x, y = pk_trivial_infimum(a, a * r, k), pk_piecewise_trivial(a, a * r, k)
    assert x.p == y.p and x.c_squared == y.c_squared


@given(st.integers(1, 199).map(lambda n: F(n, 100)), positive_rationals(10), st.integers(1, 7))
def test_twisted_engines_agree(r, a, k):
    x, y = pk_twisted_infimum(a, a * r, k), pk_piecewise_twisted(a, a * r, k)
    assert x.p == y.p and x.c_squared == y.c_squared


@given(unit_interval(), positive_rationals(10), st.integers(1, 12))
def test_identity_p_c_volume(r, a, k):
    res = pk_rows_regime(TrivialBundle(a, a * r), k) or (pk_trivial_infimum(a, a * r, k) if k <= 7 else None)
    if res is not None:
        assert res.p == k * res.c_squared / (2 * res.volume)
        assert res.p <= 1


@given(unit_interval(), positive_rationals(10))
def test_p1_identities(r, a):
    assert pk_trivial_infimum(a, a * r, 1).p == r / 2
    assert pk_twisted_infimum(a, a * r, 1).p == r / 2


@given(unit_interval(), positive_rationals(10), st.integers(1, 7))
def test_rows_regime_consistent(r, a, k):
    rows = pk_rows_regime(TrivialBundle(a, a * r), k)
    if rows is not None:
        assert rows.p == pk_trivial_infimum(a, a * r, k).p
    rows = pk_rows_regime(Twisted(a, a * r), k)
    if rows is not None:
        assert rows.p == pk_twisted_infimum(a, a * r, k).p


def test_rows_regime_examples():
    assert pk_rows_regime(TrivialBundle(F(5), F(1)), 9).p == F(9, 10)
    assert pk_rows_regime(Twisted(F(5), F(1)), 9).p == F(9, 10)
    assert pk_rows_regime(TrivialBundle(F(1), F(1)), 3) is None
    # beyond the finite class list only the rows regime answers
    assert pk_trivial_infimum(5, 1, 9).p == F(9, 10)
    with pytest.raises(BeyondDemazureRange):
        pk_trivial_infimum(1, 1, 9)
    with pytest.raises(BeyondDemazureRange):
        pk_piecewise_twisted(1, 1, 8)


def test_full_packing_catalogue():
    trivial = {k: {str(r) for r in full_packing_ratios("trivial", k)} for k in range(1, 8)}
    twisted = {k: {str(r) for r in full_packing_ratios("twisted", k)} for k in range(1, 8)}
    assert trivial == {1: set(), 2: {"1"}, 3: set(), 4: {"1/2"}, 5: set(), 6: {"1/3", "3/4"}, 7: {"7/8"}}
    assert twisted == {1: set(), 2: set(), 3: {"2/3"}, 4: set(), 5: {"2/5"}, 6: {"4/3"},
                       7: {"2/7", "8/7", "14/9"}}


def test_quadratic_surd_arithmetic():
    s = QuadraticSurd.make(F(1), F(1), F(8))  # 1 + 2 sqrt 2
    assert (s.x, s.y, s.s) == (1, 2, 2)
    assert QuadraticSurd.make(F(1), F(1), F(9, 4)) == QuadraticSurd(F(5, 2))
    assert QuadraticSurd(F(3), F(-2), 2).sign() == 1  # 3 > 2 sqrt 2
    assert QuadraticSurd(F(2), F(-2), 2).sign() == -1
    assert QuadraticSurd(F(0), F(1), 2).compare(F(3, 2)) == -1


def test_sigma_g():
    assert pk_sigma_g(1, 1, 1, 2).p == 1
    assert pk_sigma_g(2, 3, 1, 4).p == F(2, 3)
    assert pk_sigma_g(3, 3, 1, 6).p == 1
    assert pk_sigma_g(1, 1, 1, 2, twisted=True).p == 1


@given(st.integers(1, 5), positive_rationals(10), positive_rationals(10))
def test_sigma_g_stability(g, a, b):
    P = stability_bounds(SigmaGBundle(g, a, b)).exact
    assert pk_sigma_g(g, a, b, int(P)).p == 1
    if P > 1:
        assert pk_sigma_g(g, a, b, int(P) - 1).p < 1


def test_stability_examples():
    s = stability_bounds(TrivialBundle(F(1), F(1)))
    assert (s.lower, s.upper, s.exact) == (8, 8, 8)
    s = stability_bounds(Twisted(F(1), F(1)))
    assert (s.lower, s.upper) == (8, 8)
    assert stability_bounds(SigmaGBundle(1, F(3), F(2))).exact == 3
    s = stability_bounds(TrivialBundle(F(8), F(7)))
    assert s.candidates == (7, 8, 9) and s.exact is None
    assert stability_bounds(Twisted(F(7), F(2))).lower == 7
    assert stability_bounds(Twisted(F(1), F(3, 2))).upper == 8 * F(3, 2) / F(1, 4)


def test_ellipsoid():
    assert pk_ellipsoid([1, 2], 2).p == 1
    assert pk_ellipsoid([1, 3], 1).p == F(1, 3)
    assert pk_ellipsoid([1, 2, 4], 2).p == F(1, 4)
    assert pk_ellipsoid([1, 5], 2).p == F(2, 5)
    with pytest.raises(RangeError):
        pk_ellipsoid([1, 2], 3)
    with pytest.raises(RangeError):
        Ellipsoid((F(2), F(1)))


def test_ball_highdim():
    assert pk_ball_highdim(3, 5).p == F(5, 8)
    assert pk_ball_highdim(3, 27).p == 1
    assert pk_ball_highdim(2, 7).p == F(63, 64)
    part = pk_ball_highdim(3, 10)
    assert not part.exact and part.regime == "partial" and part.p == F(10, 27)
    assert pk_ball_highdim(1, 7).p == 1


def test_polydisc():
    assert pk_polydisc([2, 1], 4).p == 1
    assert pk_polydisc([2, 1], 1).p == F(1, 4)
    with pytest.raises(RangeError):
        pk_polydisc([2, 1], 3)


def test_dispatch():
    assert packing_number(CP2(F(1)), 6).p == F(24, 25)
    assert packing_number(TrivialBundle(F(1), F(1)), 4, "piecewise").p == F(8, 9)
    assert packing_number(Ball(3, F(2)), 5).p == F(5, 8)
    assert packing_number(Polydisc((F(1), F(1))), 2).p == 1
    with pytest.raises(ValueError):
        packing_number(TrivialBundle(F(1), F(1)), 4, "guess")


def test_result_invariant_enforced():
    with pytest.raises(ValueError):
        PackingResult(2, F(1, 2), F(1), F(1))
    with pytest.raises(ValueError):
        PackingResult(1, F(2), F(4), F(1))


def test_shape_validation():
    with pytest.raises(RangeError):
        TrivialBundle(F(1), F(2))
    with pytest.raises(RangeError):
        Twisted(F(1, 2), F(1))
    with pytest.raises(TypeError):
        TrivialBundle(1.0, 0.5)


def test_jiang_values():
    assert jiang_lower_bound(1).exact == F(1, 2)
    assert jiang_lower_bound(4).exact == F(1, 8)
    assert jiang_lower_bound(12).exact == F(8, 48)  # sqrt 25 = 5
    v = jiang_lower_bound(8)
    assert v.exact is None and v.width <= F(1, 10**50)
    with mp.workdps(80):
        ref = F(mp.nstr((mp.mpf(9) - mp.sqrt(17)) / 32, 70))
    assert v.contains(ref)
    with pytest.raises(RangeError):
        jiang_lower_bound(F(1, 2))


def test_product_surfaces():
    r = product_surfaces_lower(1, 1, 1, 1, 2)
    assert r.lower.exact == 1 and r.stability_upper == 2
    r = product_surfaces_lower(1, 1, 8, 1, 1)
    assert r.source == "torus" and r.lower.certainly_gt(F(1, 16))
    assert product_surfaces_lower(2, 3, 1, 1, 3).lower.exact == F(2, 3)
    assert product_surfaces_lower(2, 2, 3, 2, 1).stability_upper == 12


def test_vk():
    assert vk_constant(1) == vk_constant(10**6) == 1
