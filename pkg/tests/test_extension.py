import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ofb.extension import (
    EXACT_RULE,
    B1,
    B2,
    B2_exact,
    CutoffProfile,
    ExtensionField,
    boundary_flux,
    divergence,
    grad_norm_sq_quadrature,
    l4_fourth_quadrature,
    omega,
    omega_partials,
    phi,
    phi_prime,
    phi_second,
    psi,
    psi_jacobian,
)
from ofb.geometry import ChannelGeometry, DomainError

G = ChannelGeometry(6, 2)


def test_phi_values_and_errors():
    assert phi(0.5, 0.0) == 1.0
    assert phi(0.5, 1.5) == 0.0 and phi(0.5, -1.5) == 0.0
    for t in (1.0, -1.0, 1.5, -1.5):
        assert phi_prime(0.5, t) == 0.0
    for fn in (phi, phi_prime, phi_second):
        with pytest.raises(DomainError):
            fn(0.0, 1.0)


def test_phi_sup_norms():
    t = np.linspace(-2, 2, 400001)
    c = CutoffProfile(0.5)
    assert np.max(np.abs(c.prime(t))) == pytest.approx(c.sup_prime, abs=1e-6)
    assert c.sup_prime == 3.0
    assert np.max(np.abs(c.second(t))) == pytest.approx(c.sup_second, rel=1e-4)


def test_phi_matches_symbolic_cubic():
    t, e = sp.symbols("t e", positive=True)
    cubic = (2 * t ** 3 - 3 * (e + 2) * t ** 2 + 6 * (1 + e) * t + e ** 3 - 3 * e - 2) / e ** 3
    assert sp.simplify(cubic.subs(t, 1) - 1) == 0
    assert sp.simplify(cubic.subs(t, 1 + e)) == 0
    d = sp.diff(cubic, t)
    assert sp.simplify(d.subs(t, 1)) == 0 and sp.simplify(d.subs(t, 1 + e)) == 0
    f = sp.lambdify(t, cubic.subs(e, 0.7))
    ts = np.linspace(1.01, 1.69, 9)
    assert np.allclose(phi(0.7, ts), f(ts), atol=1e-14)


def test_omega_examples():
    assert omega(G, 0.0, 0.0) == 0.0
    assert omega(G, 3.0, 0.0) == 1.0
    ys = np.linspace(-2, 2, 11)
    for x in (-2.0, -1.0, 1.0, 2.0):
        assert np.all(omega_partials(G, np.full_like(ys, x), ys)[1] == 0.0)


def test_psi_examples():
    assert tuple(map(float, psi(G, 1.0, 3.0, 1.0))) == (1.0, 0.0)
    assert tuple(map(float, psi(G, 1.0, 0.5, 0.5))) == (0.0, 0.0)
    th = np.linspace(0, 2 * np.pi, 50)
    p1, p2 = psi(G, 1.0, np.cos(th), np.sin(th))
    assert np.all(p1 == 0) and np.all(p2 == 0)


def test_jacobian_against_finite_differences():
    rng = np.random.default_rng(3)
    x, y = rng.uniform(-1.9, 1.9, 200), rng.uniform(-1.9, 1.9, 200)
    s = 1e-6
    j = psi_jacobian(G, 1.0, x, y)
    fd = [
        (psi(G, 1.0, x + s, y)[0] - psi(G, 1.0, x - s, y)[0]) / (2 * s),
        (psi(G, 1.0, x, y + s)[0] - psi(G, 1.0, x, y - s)[0]) / (2 * s),
        (psi(G, 1.0, x + s, y)[1] - psi(G, 1.0, x - s, y)[1]) / (2 * s),
        (psi(G, 1.0, x, y + s)[1] - psi(G, 1.0, x, y - s)[1]) / (2 * s),
    ]
    for a, b in zip(j, fd):
        assert np.max(np.abs(a - b)) < 1e-6


def test_divergence_zero():
    rng = np.random.default_rng(0)
    x, y = rng.uniform(-6, 6, 1000), rng.uniform(-2, 2, 1000)
    assert np.max(np.abs(divergence(G, 1.0, x, y))) == 0.0


def test_B1_value_and_R_independence():
    assert B1(2) == pytest.approx(8 / 35 * (115.2 + 748.8 + 571 / 3), rel=1e-15)
    assert B1(2) == pytest.approx(240.99, abs=0.01)
    a = grad_norm_sq_quadrature(ChannelGeometry(6, 2)).value
    b = grad_norm_sq_quadrature(ChannelGeometry(20, 2)).value
    assert a == pytest.approx(b, rel=1e-8)
    assert a == pytest.approx(B1(2), rel=1e-12)
    with pytest.raises(DomainError):
        B1(1.0)


@pytest.mark.parametrize("R,h", [(6, 2), (10, 3), (20, 5), (7.5, 1.3)])
def test_B2_exact_equals_quadrature(R, h):
    q = l4_fourth_quadrature(ChannelGeometry(R, h)).value
    assert B2_exact(R, h) == pytest.approx(q, rel=1e-12)


@pytest.mark.parametrize("h", [1.2, 2.0, 3.0, 5.0, 50.0])
def test_reference_B2_is_an_upper_bound(h):
    R = h + 4
    assert B2(R, h) > B2_exact(R, h)
    assert B2(R, h) - 4 * R * h == pytest.approx(B2(R + 7, h) - 4 * (R + 7) * h, rel=1e-12)


def test_B2_remainder_constant_in_R_by_quadrature():
    a = l4_fourth_quadrature(ChannelGeometry(6, 2), rule=EXACT_RULE).value - 48
    b = l4_fourth_quadrature(ChannelGeometry(20, 2), rule=EXACT_RULE).value - 160
    assert a == pytest.approx(b, rel=1e-12)


def test_flux_and_field_object():
    ext = ExtensionField.build(G, 2.0)
    assert abs(boundary_flux(G, 2.0)) <= 1e-10 * 2.0
    assert ext.grad_norm == pytest.approx(2 * math.sqrt(B1(2)))
    grid = ext.sample_grid(13, 5)
    assert grid.shape == (65, 4)
    with pytest.raises(DomainError):
        ExtensionField.build(G, 0.0)


def test_l4_norm_growth():
    g = ChannelGeometry(1e4, 2)
    l4 = l4_fourth_quadrature(g, rule=EXACT_RULE).value ** 0.25
    assert l4 / (8e4) ** 0.25 == pytest.approx(1.0, abs=0.01)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 5), st.floats(-8, 8))
def test_phi_range(eps, t):
    v = float(phi(eps, t))
    assert 0.0 <= v <= 1.0 + 1e-12
    if abs(t) >= 1 + eps:
        assert v == 0.0


@settings(max_examples=50, deadline=None)
@given(st.floats(-6, 6), st.floats(-2, 2), st.floats(0.01, 100))
def test_psi_linear_in_U(x, y, U):
    a = np.array(psi(G, U, x, y), dtype=float)
    b = np.array(psi(G, 2 * U, x, y), dtype=float)
    assert np.allclose(b, 2 * a, rtol=1e-14, atol=0)
    w = float(omega(G, x, y))
    assert 0.0 <= w <= 1.0
