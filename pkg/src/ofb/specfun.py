"""Special-function primitives.

Only two objects are needed: the first positive zero of the Bessel
function J0 and the Jacobi elliptic functions with modulus ``k = 1/sqrt(2)``
(parameter ``m = k**2 = 1/2``). The elliptic functions are evaluated with
the arithmetic-geometric mean and the descending Landen recursion, which
reaches machine precision in five or six steps for this modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from ._roots import bisect_newton

M = 0.5  # elliptic parameter m = k^2


def _agm_tables():
    a, b, c = 1.0, math.sqrt(1.0 - M), math.sqrt(M)
    aa, cc = [a], [c]
    while abs(c) > 4e-16 * a and len(aa) < 32:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        aa.append(a)
        cc.append(c)
    return np.array(aa), np.array(cc)


_AGM_A, _AGM_C = _agm_tables()
# quarter period K(1/2) from the AGM limit
QUARTER_PERIOD = math.pi / (2.0 * _AGM_A[-1])


def jacobi_sncndn(t):
    """Return ``(sn, cn, dn)`` at ``t`` for modulus ``k = 1/sqrt(2)``.

    Accepts scalars or arrays. The argument is reduced modulo the real
    period ``4K`` before running the Landen recursion.
    """
    t = np.asarray(t, dtype=float)
    period = 4.0 * QUARTER_PERIOD
    u = t - period * np.round(t / period)
    n = len(_AGM_A) - 1
    phi = (2.0 ** n) * _AGM_A[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(_AGM_C[j] / _AGM_A[j] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    dn = np.sqrt(1.0 - M * sn * sn)
    if t.ndim == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def jacobi_cn(t):
    """Jacobi elliptic cosine ``cn(t | m=1/2)``; solves ``cn'' + cn**3 = 0``, ``cn(0) = 1``."""
    return jacobi_sncndn(t)[1]


def jacobi_cn_prime(t):
    """Derivative ``cn' = -sn * dn``."""
    sn, _, dn = jacobi_sncndn(t)
    return -sn * dn


def _alpha_integrand(t):
    return 1.0 / np.sqrt(2.0 - np.sin(t) ** 2)


@lru_cache(maxsize=None)
def cn_first_zero(order: int = 24, panels: int = 4) -> float:
    """First positive zero of cn, ``sqrt(2) * int_0^{pi/2} dt / sqrt(2 - sin(t)**2)``.

    Composite Gauss-Legendre quadrature of the (analytic) integrand; the
    default rule is accurate to rounding.
    """
    g, w = leggauss(order)
    edges = np.linspace(0.0, 0.5 * math.pi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * float(np.dot(w, _alpha_integrand(mid + half * g)))
    return float(math.sqrt(2.0) * total)


def cn_root(a: float = 1.5, b: float = 2.2) -> float:
    """Zero of ``jacobi_cn`` in ``(a, b)`` by bisection refined with Newton."""
    return bisect_newton(jacobi_cn, jacobi_cn_prime, a, b)


def bessel_j0(x):
    return special.j0(x)


@lru_cache(maxsize=None)
def bessel_j0_first_zero() -> float:
    """First positive zero of J0, bracketed in (2, 3)."""
    return bisect_newton(
        lambda x: float(special.j0(x)), lambda x: -float(special.j1(x)), 2.0, 3.0
    )


@dataclass(frozen=True)
class SpectralConstants:
    mu0: float
    alpha: float

    def __post_init__(self):
        if not 2.4048 < self.mu0 < 2.4049:
            raise ValueError(f"mu0 out of range: {self.mu0}")
        if not 1.8540 < self.alpha < 1.8541:
            raise ValueError(f"alpha out of range: {self.alpha}")


@lru_cache(maxsize=None)
def spectral_constants() -> SpectralConstants:
    return SpectralConstants(mu0=bessel_j0_first_zero(), alpha=cn_first_zero())
