import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as si

from ofb.geometry import ChannelGeometry
from ofb.quadrature import (
    DEFAULT_RULE,
    IntegrationRegion,
    NonFiniteError,
    QuadratureRule,
    integrate,
    norm_L2_grad,
    norm_Lp,
)


def test_rule_validation():
    for bad in [dict(order=1), dict(panels=0), dict(max_width=0.0), dict(order=2.5)]:
        with pytest.raises(ValueError):
            QuadratureRule(**bad)
    assert QuadratureRule(max_width=None).panel_count(1000) == 1
    assert DEFAULT_RULE.panel_count(1.0) == 4


def test_interval_against_scipy_quad():
    f = lambda x: np.exp(-x * x) * np.cos(3 * x)
    val = integrate(IntegrationRegion.interval(-2, 3), f).value
    ref, _ = si.quad(f, -2, 3, epsabs=1e-14)
    assert val == pytest.approx(ref, abs=1e-13)


def test_pierced_area_and_polynomial():
    reg = IntegrationRegion.pierced(ChannelGeometry(6, 2))
    assert integrate(reg, lambda x, y: np.ones_like(x)).value == pytest.approx(48 - math.pi, rel=1e-14)
    # int x^2 over rectangle minus int over disk (= pi/4)
    val = integrate(reg, lambda x, y: x * x).value
    assert val == pytest.approx(2 * 6 ** 3 / 3 * 4 - math.pi / 4, rel=1e-13)


def test_annulus_and_disk():
    ann = IntegrationRegion.annulus(2.0)
    assert integrate(ann, lambda x, y: 1 / (x * x + y * y)).value == pytest.approx(2 * math.pi * math.log(2), rel=1e-13)
    disk = IntegrationRegion.disk(1.5, center=(3.0, -1.0))
    assert integrate(disk, lambda x, y: np.ones_like(x)).value == pytest.approx(math.pi * 2.25, rel=1e-14)


def test_rectangle_against_dblquad():
    f = lambda x, y: np.sin(x) * np.exp(y) + x * y ** 2
    val = integrate(IntegrationRegion.rectangle(0, 2, -1, 1), f).value
    ref, _ = si.dblquad(lambda y, x: math.sin(x) * math.exp(y) + x * y * y, 0, 2, -1, 1, epsabs=1e-13)
    assert val == pytest.approx(ref, abs=1e-12)


def test_region_additivity():
    # channel rectangle = pierced rectangle + unit disk
    g = ChannelGeometry(5, 3)
    f = lambda x, y: np.exp(-0.1 * (x * x + y * y)) * (1 + x)
    full = integrate(IntegrationRegion.channel(g), f).value
    parts = integrate(IntegrationRegion.pierced(g), f).value + integrate(IntegrationRegion.disk(1.0), f).value
    assert full == pytest.approx(parts, rel=1e-13)


def test_error_estimate_and_nonfinite():
    res = integrate(IntegrationRegion.interval(0, 1), np.sqrt)
    assert res.error < 1e-3 and float(res) == res.value
    with pytest.raises(NonFiniteError):
        integrate(IntegrationRegion.interval(-1, 1), lambda x: 1 / x * np.inf)


def test_norms():
    reg = IntegrationRegion.rectangle(0, 1, 0, 1)
    assert norm_Lp(reg, lambda x, y: np.ones_like(x), 4) == pytest.approx(1.0)
    assert norm_L2_grad(reg, lambda x, y: np.ones_like(x), lambda x, y: 2 * np.ones_like(x)) == pytest.approx(math.sqrt(5))
    with pytest.raises(ValueError):
        norm_Lp(reg, lambda x, y: x, 3)


def test_region_validation():
    with pytest.raises(ValueError):
        IntegrationRegion.interval(1, 1)
    with pytest.raises(ValueError):
        IntegrationRegion.annulus(1.0, 2.0)
    with pytest.raises(ValueError):
        IntegrationRegion("blob", ())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 7), st.integers(0, 7))
def test_monomials_exact_on_rectangle(p, q):
    val = integrate(IntegrationRegion.rectangle(-1, 2, 0, 3), lambda x, y: x ** p * y ** q, estimate_error=False).value
    ref = (2 ** (p + 1) - (-1) ** (p + 1)) / (p + 1) * 3 ** (q + 1) / (q + 1)
    assert val == pytest.approx(ref, rel=1e-13, abs=1e-13)
