"""Separated-variables upper bound for the Sobolev constant of the strip ``R x (-h, h)``.

The transverse profile is ``W_h(y) = cn(alpha y / h) / mu_h`` (modulus
``1/sqrt(2)``, ``alpha`` the first zero of cn), normalised in ``L^4(-h, h)``.
At the calibration height ``h0`` where ``||W_h'||_{L^2} = 1`` the optimal
longitudinal profile is ``V(x) = sech(x / ||W_h0||_{L^2})``, which solves
``-||W||^2 V'' + V = 2 V^3``. The quotient of ``V W`` at ``h0`` rescales as
``1/h``, giving ``S_inf(h) <= c / h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._roots import BracketError, bisect
from .quadrature import IntegrationRegion, QuadratureRule, integrate
from .specfun import cn_first_zero, jacobi_cn, jacobi_cn_prime

__all__ = [
    "BracketError",
    "StripMinimizerResult",
    "normalization_mu",
    "w_profile",
    "w_profile_prime",
    "w_prime_norm",
    "find_h0",
    "sech_profile",
    "euler_lagrange_residual",
    "separated_quotient",
    "separated_quotient_at",
]

STRIP_RULE = QuadratureRule(order=20, panels=4, max_width=0.5)
TAIL_WIDTHS = 40.0  # truncation of the x-integrals, in units of ||W_h0||_{L^2}


def _int(a, b, f, rule=STRIP_RULE):
    return integrate(IntegrationRegion.interval(a, b, breaks=(0.0,)), f, rule, estimate_error=False).value


def normalization_mu(h: float, rule: QuadratureRule = STRIP_RULE) -> float:
    """``mu_h = (int_{-h}^{h} cn(alpha y / h)^4 dy)^{1/4}``."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    alpha = cn_first_zero()
    return _int(-h, h, lambda y: jacobi_cn(alpha * y / h) ** 4, rule) ** 0.25


def w_profile(h: float, y, mu: float | None = None):
    alpha = cn_first_zero()
    mu = normalization_mu(h) if mu is None else mu
    return jacobi_cn(alpha * np.asarray(y) / h) / mu


def w_profile_prime(h: float, y, mu: float | None = None):
    alpha = cn_first_zero()
    mu = normalization_mu(h) if mu is None else mu
    return (alpha / h) * jacobi_cn_prime(alpha * np.asarray(y) / h) / mu


def w_norms(h: float) -> tuple[float, float, float]:
    """``(||W_h||_{L^2}, ||W_h'||_{L^2}, ||W_h||_{L^4})`` on ``(-h, h)``."""
    mu = normalization_mu(h)
    l2 = math.sqrt(_int(-h, h, lambda y: w_profile(h, y, mu) ** 2))
    d2 = math.sqrt(_int(-h, h, lambda y: w_profile_prime(h, y, mu) ** 2))
    l4 = _int(-h, h, lambda y: w_profile(h, y, mu) ** 4) ** 0.25
    return l2, d2, l4


def w_prime_norm(h: float) -> float:
    return w_norms(h)[1]


def find_h0(bracket=(1.1, 10.0)) -> float:
    """Height at which ``||W_h'||_{L^2(-h, h)} = 1``.

    Raises :class:`BracketError` when ``g(h) = ||W_h'|| - 1`` has no sign
    change on the bracket.
    """
    return _find_h0(tuple(bracket))


@lru_cache(maxsize=8)
def _find_h0(bracket):
    return bisect(lambda h: w_prime_norm(h) - 1.0, bracket[0], bracket[1], xtol=1e-14)


def sech_profile(x, width: float):
    """``V(x) = 1 / cosh(x / width)`` and its first two derivatives."""
    s = np.asarray(x, dtype=float) / width
    sech = 1.0 / np.cosh(s)
    th = np.tanh(s)
    return sech, -sech * th / width, sech * (1.0 - 2.0 * sech ** 2) / width ** 2


def euler_lagrange_residual(x, width: float, multiplier: float = 2.0):
    """Pointwise residual of ``-width^2 V'' + V - multiplier V^3`` for the sech profile."""
    v, _, v2 = sech_profile(x, width)
    return -width ** 2 * v2 + v - multiplier * v ** 3


@dataclass(frozen=True)
class StripMinimizerResult:
    alpha: float
    h0: float
    mu_h0: float
    w_l2: float  # ||W_h0||_{L^2}, also the width of the sech profile
    quotient: float
    c_upper: float
    multiplier: float = 2.0


def _separated_ratio(v, dv, half_x, w, dw, h):
    """Quotient of the product ``V(x) W(y)`` on ``R x (-h, h)`` from 1-D integrals."""
    vx2 = _int(-half_x, half_x, lambda x: dv(x) ** 2)
    v2 = _int(-half_x, half_x, lambda x: v(x) ** 2)
    v4 = _int(-half_x, half_x, lambda x: v(x) ** 4)
    wy2 = _int(-h, h, lambda y: dw(y) ** 2)
    w2 = _int(-h, h, lambda y: w(y) ** 2)
    w4 = _int(-h, h, lambda y: w(y) ** 4)
    return (vx2 * w2 + v2 * wy2) / math.sqrt(v4 * w4)


@lru_cache(maxsize=1)
def separated_quotient() -> StripMinimizerResult:
    h0 = find_h0()
    mu = normalization_mu(h0)
    a = w_norms(h0)[0]
    q = _separated_ratio(
        lambda x: sech_profile(x, a)[0],
        lambda x: sech_profile(x, a)[1],
        TAIL_WIDTHS * a,
        lambda y: w_profile(h0, y, mu),
        lambda y: w_profile_prime(h0, y, mu),
        h0,
    )
    return StripMinimizerResult(alpha=cn_first_zero(), h0=h0, mu_h0=mu, w_l2=a, quotient=q, c_upper=q * h0)


def separated_quotient_at(h: float) -> float:
    """Quotient of ``V_h0(x h0 / h) W_h0(y h0 / h)`` on the strip of half-height ``h``."""
    res = separated_quotient()
    s = res.h0 / h
    a, mu, h0 = res.w_l2, res.mu_h0, res.h0
    return _separated_ratio(
        lambda x: sech_profile(s * x, a)[0],
        lambda x: s * sech_profile(s * x, a)[1],
        TAIL_WIDTHS * a / s,
        lambda y: w_profile(h0, s * y, mu),
        lambda y: s * w_profile_prime(h0, s * y, mu),
        h,
    )
