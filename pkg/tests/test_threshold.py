import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofb.extension import B1, B2
from ofb.geometry import ChannelGeometry, DomainError, FlowParams
from ofb.threshold import (
    ThresholdReport,
    certify_uniqueness,
    eps_bracket,
    eps_growth,
    eps_residual,
    growth_diagnostic,
    re_bar,
    sobolev_surrogate,
    umbral_condition,
)


def _re_bar_mp(R, h):
    with mpmath.workdps(50):
        R, h = mpmath.mpf(R), mpmath.mpf(h)
        d = h - 1
        b1 = mpmath.mpf(8) / 35 * (mpmath.mpf(36) / 5 * (2 * h ** 2 + 3 * h + 2) / d ** 2
                                  + mpmath.mpf(6) / 5 * (13 * h + 22) * (3 * h ** 2 - h + 3) / d ** 3
                                  + (19 * h ** 3 + 51 * h ** 2 + 75 * h + 65) / (3 * d ** 3))
        b2 = (4 * R * h
              + 4 * (82563626 + 139273674 * h + 131633079 * h ** 2 + 47395086 * h ** 3) / (75150075 * d)
              + 4 * (6562533 + 20038773 * h + 29176308 * h ** 2 + 22648263 * h ** 3 + 5977793 * h ** 4)
              / (25050025 * d ** 2)
              + 288 * (1561958 + 3280874 * h + 4160951 * h ** 2 + 3491837 * h ** 3 + 1768313 * h ** 4
                       + 336653 * h ** 5) / (425850425 * d ** 3))
        pi = mpmath.pi
        num = pi / 2 * mpmath.sqrt(3 * pi / 2) * mpmath.sqrt(R ** 2 + h ** 2) / (R * h)
        den = 2 * mpmath.sqrt(b1) + mpmath.sqrt(pi / (2 * R * h)) * (3 * pi * b2 / 2 * (R ** 2 + h ** 2)) ** 0.25
        return float(num / den)


@pytest.mark.parametrize("R,h", [(6, 2), (6, 5), (200, 5), (1e6, 3)])
def test_re_bar_against_multiprecision(R, h):
    assert re_bar(ChannelGeometry(R, h)) == pytest.approx(_re_bar_mp(R, h), rel=1e-13)


def test_re_bar_known_values():
    assert re_bar(ChannelGeometry(6, 2)) == pytest.approx(0.0494183, abs=1e-7)
    assert re_bar(ChannelGeometry(6, 5)) == pytest.approx(0.0535489, abs=1e-7)


def test_re_bar_vanishes_as_h_to_one():
    vals = [re_bar(ChannelGeometry(6, 1 + d)) for d in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-6


def test_certify_small_U_and_consistency():
    g = ChannelGeometry(6, 5)
    rep = certify_uniqueness(g, FlowParams(1e-3, 1.0))
    assert rep.unique_certified
    assert rep.re_bar == pytest.approx(re_bar(g), rel=1e-15)
    assert rep.grad_u_bound == pytest.approx(3 * math.sqrt(B1(5)) * 1e-3)
    assert rep.grad_u_bound < 1.5 * rep.flow.eta * rep.S_R_lower
    assert rep.B2 == B2(6, 5)
    assert len(rep.csv_row()) == len(ThresholdReport.CSV_HEADER)


@pytest.mark.parametrize("R,h", [(6, 2), (6, 5), (40, 3), (1e4, 2)])
def test_certified_iff_below_re_bar(R, h):
    g = ChannelGeometry(R, h)
    rb = re_bar(g)
    for f in (0.5, 0.999999, 1.000001, 2.0):
        rep = certify_uniqueness(g, FlowParams(f * rb, 1.0))
        assert rep.unique_certified == (f < 1)
        assert rep.unique_certified == (rep.lhs_umbral < rep.rhs_umbral)


def test_umbral_validation():
    with pytest.raises(DomainError):
        umbral_condition(1, 1, 0.0, 1)


def test_eps_growth_values():
    e = eps_growth(2)
    assert e == pytest.approx(0.4200, abs=5e-4)
    # independent polynomial root finder
    a, b = 4 / (3 * math.pi ** 3), 2 * math.sqrt(2) / 2 ** 0.25
    roots = np.roots([a, 0, 0, b, -1])
    pos = [r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0]
    assert len(pos) == 1 and e == pytest.approx(pos[0], rel=1e-12)
    with pytest.raises(DomainError):
        eps_growth(1.0)


def test_growth_diagnostic():
    rows = growth_diagnostic(2, [1e4, 1e2, 1e3])
    assert [r.R for r in rows] == [1e2, 1e3, 1e4]
    assert all(r.above_eps for r in rows)
    assert rows[0].ratio > rows[1].ratio > rows[2].ratio > 8 ** 0.25
    assert rows[0].l4_ratio > rows[1].l4_ratio > rows[2].l4_ratio
    assert rows[-1].l4_ratio == pytest.approx(8 ** 0.25, abs=0.01)


@settings(max_examples=60, deadline=None)
@given(st.floats(1.0001, 1e4))
def test_eps_residual_and_bound(h):
    e = eps_growth(h)
    assert abs(eps_residual(h, e)) <= 1e-12
    assert e * 2 * math.sqrt(2) / h ** 0.25 <= 1 + 1e-15
    lo, hi = eps_bracket(h)
    assert eps_residual(h, lo) < 0 <= eps_residual(h, hi)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 100), st.floats(0, 100), st.floats(0.01, 10), st.floats(0.01, 1), st.floats(0.01, 10))
def test_smaller_S_never_certifies_more(g, l4, S, shrink, eta):
    # replacing S by a smaller value can only turn True into False
    _, _, ok_small = umbral_condition(g, l4, S * shrink, eta)
    _, _, ok_big = umbral_condition(g, l4, S, eta)
    assert not (ok_small and not ok_big)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.1, 30), st.floats(1.05, 20), st.floats(1.05, 3))
def test_re_bar_positive_and_decreasing_in_R(h, k, m):
    a = re_bar(ChannelGeometry(h * k, h))
    b = re_bar(ChannelGeometry(h * k * m, h))
    assert 0 < b < a


def test_surrogate_is_poincare_arm():
    from ofb.bounds import lower_bound

    g = ChannelGeometry(6, 2)
    assert sobolev_surrogate(g) <= lower_bound(g)
