"""Explicit solenoidal extension of the boundary velocity ``(U, 0)``.

With the C^1 cubic cutoff ``phi_eps`` (equal to 1 on [-1, 1], vanishing
outside [-1-eps, 1+eps]) and ``omega(x, y) = 1 - phi_{h-1}(x) phi_{h-1}(y)``,
the field

    Psi_R = U * (omega + y * omega_y, -y * omega_x)

is divergence free, equals ``(U, 0)`` for ``|x| >= h`` and vanishes on
``[-1, 1]^2``. Its norms are given in closed form by ``B1(h)`` and
``B2(R, h)``; quadrature over the pierced rectangle is the independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ChannelGeometry, DomainError, check_height
from .quadrature import DEFAULT_RULE, IntegrationRegion, QuadratureRule, integrate

# Psi is a polynomial of degree <= 4 per variable on every aligned cell, so
# |Psi|^4 (degree 16) is integrated exactly by 12 Gauss points per panel.
EXACT_RULE = QuadratureRule(order=12, panels=1, max_width=None)


def _check_eps(eps):
    if not eps > 0:
        raise DomainError(f"cutoff width eps must be positive, got {eps!r}")


def phi(eps: float, t):
    _check_eps(eps)
    a = np.abs(np.asarray(t, dtype=float))
    cubic = (2 * a ** 3 - 3 * (eps + 2) * a ** 2 + 6 * (1 + eps) * a + eps ** 3 - 3 * eps - 2) / eps ** 3
    return np.where(a <= 1.0, 1.0, np.where(a >= 1.0 + eps, 0.0, cubic))


def phi_prime(eps: float, t):
    _check_eps(eps)
    t = np.asarray(t, dtype=float)
    a = np.abs(t)
    d = 6.0 * (a ** 2 - (eps + 2) * a + 1 + eps) / eps ** 3
    return np.where((a > 1.0) & (a < 1.0 + eps), np.sign(t) * d, 0.0)


def phi_second(eps: float, t):
    """Second derivative; defined as 0 at the four points where it jumps."""
    _check_eps(eps)
    a = np.abs(np.asarray(t, dtype=float))
    return np.where((a > 1.0) & (a < 1.0 + eps), (12.0 * a - 6.0 * (eps + 2)) / eps ** 3, 0.0)


@dataclass(frozen=True)
class CutoffProfile:
    eps: float

    def __post_init__(self):
        _check_eps(self.eps)

    def __call__(self, t):
        return phi(self.eps, t)

    def prime(self, t):
        return phi_prime(self.eps, t)

    def second(self, t):
        return phi_second(self.eps, t)

    @property
    def sup_prime(self) -> float:
        return 1.5 / self.eps

    @property
    def sup_second(self) -> float:
        return 6.0 / self.eps ** 2


def omega_partials(geom: ChannelGeometry, x, y):
    """``(omega, omega_x, omega_y, omega_xx, omega_yy, omega_xy)``."""
    e = geom.h - 1.0
    px, py = phi(e, x), phi(e, y)
    dx, dy = phi_prime(e, x), phi_prime(e, y)
    return (
        1.0 - px * py,
        -dx * py,
        -px * dy,
        -phi_second(e, x) * py,
        -px * phi_second(e, y),
        -dx * dy,
    )


def omega(geom: ChannelGeometry, x, y):
    return omega_partials(geom, x, y)[0]


def psi(geom: ChannelGeometry, U: float, x, y):
    """The extension field ``(psi_x, psi_y)`` at the given points."""
    w, wx, wy, *_ = omega_partials(geom, x, y)
    y = np.asarray(y, dtype=float)
    return U * (w + y * wy), -U * y * wx


def psi_jacobian(geom: ChannelGeometry, U: float, x, y):
    """``(d psi_x/dx, d psi_x/dy, d psi_y/dx, d psi_y/dy)``."""
    _, wx, wy, wxx, wyy, wxy = omega_partials(geom, x, y)
    y = np.asarray(y, dtype=float)
    return (
        U * (wx + y * wxy),
        U * (2.0 * wy + y * wyy),
        -U * y * wxx,
        -U * (wx + y * wxy),
    )


def divergence(geom: ChannelGeometry, U: float, x, y):
    j = psi_jacobian(geom, U, x, y)
    return j[0] + j[3]


def B1(h: float) -> float:
    """``||grad Psi_R||_{L^2}^2 / U^2``; independent of R."""
    h = check_height(h)
    d = h - 1.0
    return (8.0 / 35.0) * (
        (36.0 / 5.0) * (2 * h * h + 3 * h + 2) / d ** 2
        + (6.0 / 5.0) * (13 * h + 22) * (3 * h * h - h + 3) / d ** 3
        + (19 * h ** 3 + 51 * h ** 2 + 75 * h + 65) / (3.0 * d ** 3)
    )


def B2(R: float, h: float) -> float:
    """Reference closed form for ``||Psi_R||_{L^4}^4 / U^4``.

    This expression exceeds the true integral by an R-independent amount
    for every h > 1 (see :func:`B2_exact`), so it is an upper bound rather
    than an identity. Uniqueness thresholds built from it stay valid.
    """
    h = check_height(h)
    if not R > 1:
        raise DomainError(f"R must exceed 1, got {R}")
    d = h - 1.0
    return (
        4.0 * R * h
        + 4.0 * (82563626 + 139273674 * h + 131633079 * h ** 2 + 47395086 * h ** 3) / (75150075.0 * d)
        + 4.0 * (6562533 + 20038773 * h + 29176308 * h ** 2 + 22648263 * h ** 3 + 5977793 * h ** 4)
        / (25050025.0 * d ** 2)
        + 288.0
        * (1561958 + 3280874 * h + 4160951 * h ** 2 + 3491837 * h ** 3 + 1768313 * h ** 4 + 336653 * h ** 5)
        / (425850425.0 * d ** 3)
    )


def B2_exact(R: float, h: float) -> float:
    """Exact ``||Psi_R||_{L^4}^4 / U^4``, from symbolic integration of the piecewise polynomial field."""
    h = check_height(h)
    if not R > 1:
        raise DomainError(f"R must exceed 1, got {R}")
    num = (1011981090 * h ** 5 + 1495360527 * h ** 4 - 173841573 * h ** 3
           + 41135272 * h ** 2 + 362811451 * h + 416279809)
    return 4.0 * R * h + 4.0 * num / (1277551275.0 * (h - 1.0) ** 3)


def grad_norm_sq_quadrature(geom: ChannelGeometry, U: float = 1.0, rule: QuadratureRule = DEFAULT_RULE):
    """Quadrature of ``||grad Psi_R||^2`` over the pierced rectangle, with error estimate."""

    def f(x, y):
        return sum(np.square(c) for c in psi_jacobian(geom, U, x, y))

    return integrate(IntegrationRegion.pierced(geom), f, rule)


def l4_fourth_quadrature(geom: ChannelGeometry, U: float = 1.0, rule: QuadratureRule = DEFAULT_RULE):
    """Quadrature of ``||Psi_R||_{L^4}^4`` over the pierced rectangle, with error estimate."""

    def f(x, y):
        p1, p2 = psi(geom, U, x, y)
        return np.square(p1 * p1 + p2 * p2)

    return integrate(IntegrationRegion.pierced(geom), f, rule)


def boundary_flux(geom: ChannelGeometry, U: float = 1.0, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """``int_{boundary} Psi . nu`` over the outer rectangle and the unit circle (outward from the fluid)."""
    R, h = geom.R, geom.h
    parts = []
    ys, wy = rule.nodes(-h, h)
    for sx in (-1.0, 1.0):
        p1, _ = psi(geom, U, np.full_like(ys, sx * R), ys)
        parts.append(sx * float(np.dot(wy, p1)))
    xs, wx = rule.nodes(-R, R)
    for sy in (-1.0, 1.0):
        _, p2 = psi(geom, U, xs, np.full_like(xs, sy * h))
        parts.append(sy * float(np.dot(wx, p2)))
    th, wt = rule.nodes(0.0, 2.0 * math.pi)
    p1, p2 = psi(geom, U, np.cos(th), np.sin(th))
    # the fluid lies outside the disk, so the outward normal there is -(cos, sin)
    parts.append(-float(np.dot(wt, p1 * np.cos(th) + p2 * np.sin(th))))
    return math.fsum(parts)


@dataclass(frozen=True)
class ExtensionCheck:
    B1_closed: float
    B1_quadrature: float
    B1_rel_err: float
    B2_closed: float
    B2_quadrature: float
    B2_rel_err: float
    B2_exact: float
    flux: float

    def passed(self, rtol: float = 1e-6) -> bool:
        return self.B1_rel_err <= rtol and self.B2_rel_err <= rtol


@dataclass(frozen=True)
class ExtensionField:
    geom: ChannelGeometry
    U: float
    B1: float
    B2: float

    @classmethod
    def build(cls, geom: ChannelGeometry, U: float = 1.0) -> "ExtensionField":
        if not U > 0:
            raise DomainError(f"U must be positive, got {U}")
        return cls(geom, float(U), B1(geom.h), B2(geom.R, geom.h))

    @property
    def grad_norm(self) -> float:
        return math.sqrt(self.B1) * self.U

    @property
    def l4_norm(self) -> float:
        return self.B2 ** 0.25 * self.U

    def __call__(self, x, y):
        return psi(self.geom, self.U, x, y)

    def verify(self, rule: QuadratureRule = DEFAULT_RULE) -> ExtensionCheck:
        g = grad_norm_sq_quadrature(self.geom, 1.0, rule).value
        q = l4_fourth_quadrature(self.geom, 1.0, rule).value
        return ExtensionCheck(
            B1_closed=self.B1,
            B1_quadrature=g,
            B1_rel_err=abs(self.B1 - g) / g,
            B2_closed=self.B2,
            B2_quadrature=q,
            B2_rel_err=abs(self.B2 - q) / q,
            B2_exact=B2_exact(self.geom.R, self.geom.h),
            flux=boundary_flux(self.geom, self.U, rule),
        )

    def sample_grid(self, nx: int = 121, ny: int = 41):
        """Rows ``(x, y, psi_x, psi_y)`` on a uniform grid over the closed rectangle."""
        xs = np.linspace(-self.geom.R, self.geom.R, nx)
        ys = np.linspace(-self.geom.h, self.geom.h, ny)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        p1, p2 = self(X, Y)
        return np.column_stack([X.ravel(), Y.ravel(), p1.ravel(), p2.ravel()])
