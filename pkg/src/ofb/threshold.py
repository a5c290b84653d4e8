"""Sufficient conditions for uniqueness of the stationary channel flow.

The weak solution with inflow speed ``U`` and viscosity ``eta`` is unique
(and mirror symmetric) as soon as

    2 ||grad Psi|| + sqrt(S) ||Psi||_{L^4} < eta * S,

where ``Psi`` is the solenoidal extension and ``S`` is the Sobolev constant
of the channel. The left side grows in ``sqrt(S)`` more slowly than the
right side grows in ``S``, so the condition only gets harder when ``S``
is replaced by a smaller value. The certified surrogate used here is the
Poincare arm of the explicit lower bound, which turns the condition into
``U / eta < re_bar(geom)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._roots import bisect_newton
from .bounds import lower_bound_terms
from .extension import EXACT_RULE, B1, B2, l4_fourth_quadrature
from .geometry import ChannelGeometry, DomainError, FlowParams, check_height
from .quadrature import QuadratureRule

_GN = math.pi * math.sqrt(1.5)


def sobolev_surrogate(geom: ChannelGeometry) -> float:
    """Certified lower bound for the Sobolev constant built from the rectangle Poincare constant."""
    return _GN * lower_bound_terms(geom)[0]


def umbral_condition(grad_norm: float, l4_norm: float, S: float, eta: float) -> tuple[float, float, bool]:
    """Return ``(lhs, rhs, lhs < rhs)`` for the uniqueness inequality.

    Parameters
    ----------
    grad_norm, l4_norm : float
        ``||grad Psi||_{L^2}`` and ``||Psi||_{L^4}`` of the extension.
    S : float
        Value used for the Sobolev constant; must be positive.
    eta : float
        Viscosity.
    """
    if not S > 0:
        raise DomainError(f"Sobolev constant must be positive, got {S}")
    lhs = 2.0 * grad_norm + math.sqrt(S) * l4_norm
    rhs = eta * S
    return lhs, rhs, lhs < rhs


def re_bar(geom: ChannelGeometry) -> float:
    """Explicit bound on ``U / eta`` below which uniqueness is certified."""
    R, h = geom.R, geom.h
    num = 0.5 * math.pi * math.sqrt(1.5 * math.pi) * math.hypot(R, h) / (R * h)
    den = 2.0 * math.sqrt(B1(h)) + math.sqrt(math.pi / (2.0 * R * h)) * (
        1.5 * math.pi * B2(R, h) * (R * R + h * h)
    ) ** 0.25
    return num / den


def _eps_poly(h):
    a = 2.0 * h / (3.0 * math.pi ** 3)
    b = 2.0 * math.sqrt(2.0) / h ** 0.25
    return a, b


def eps_residual(h: float, eps: float) -> float:
    a, b = _eps_poly(h)
    return a * eps ** 4 + b * eps - 1.0


def eps_bracket(h: float) -> tuple[float, float]:
    """Interval ``[0, 1/b]`` that contains the positive root (the quartic term is nonnegative)."""
    _, b = _eps_poly(check_height(h))
    return 0.0, 1.0 / b


def eps_growth(h: float) -> float:
    """Unique positive root of ``(2h/(3 pi^3)) e^4 + (2 sqrt 2 / h^{1/4}) e = 1``."""
    h = check_height(h)
    a, b = _eps_poly(h)
    lo, hi = eps_bracket(h)
    return bisect_newton(
        lambda e: a * e ** 4 + b * e - 1.0,
        lambda e: 4.0 * a * e ** 3 + b,
        lo,
        hi,
        coarse=1e-6,
    )


@dataclass(frozen=True)
class ThresholdReport:
    """Outcome of the uniqueness test.

    ``S_R_lower`` replaces the unknown Sobolev constant. Using a smaller
    value can only turn a certified case into an uncertified one, never
    the reverse.
    """

    geom: ChannelGeometry
    flow: FlowParams
    S_R_lower: float
    lhs_umbral: float
    rhs_umbral: float
    unique_certified: bool
    re_bar: float
    grad_u_bound: float
    eps_h: float
    B1: float
    B2: float

    CSV_HEADER = ("R", "h", "U", "eta", "re_bar", "unique", "eps_h", "B1", "B2")

    def csv_row(self) -> tuple:
        return (self.geom.R, self.geom.h, self.flow.U, self.flow.eta, self.re_bar,
                int(self.unique_certified), self.eps_h, self.B1, self.B2)


def certify_uniqueness(geom: ChannelGeometry, flow: FlowParams) -> ThresholdReport:
    b1, b2 = B1(geom.h), B2(geom.R, geom.h)
    S = sobolev_surrogate(geom)
    grad = math.sqrt(b1) * flow.U
    lhs, rhs, ok = umbral_condition(grad, b2 ** 0.25 * flow.U, S, flow.eta)
    return ThresholdReport(
        geom=geom,
        flow=flow,
        S_R_lower=S,
        lhs_umbral=lhs,
        rhs_umbral=rhs,
        unique_certified=ok,
        re_bar=re_bar(geom),
        grad_u_bound=3.0 * grad,
        eps_h=eps_growth(geom.h),
        B1=b1,
        B2=b2,
    )


@dataclass(frozen=True)
class GrowthRow:
    R: float
    grad_norm: float
    l4_norm: float
    ratio: float  # (||grad Psi|| + ||Psi||_4) / R^{1/4}
    l4_ratio: float  # ||Psi||_4 / R^{1/4}, tends to (4h)^{1/4}
    eps_h: float

    @property
    def above_eps(self) -> bool:
        return self.ratio >= self.eps_h


def growth_diagnostic(h: float, R_list, U: float = 1.0, rule: QuadratureRule = EXACT_RULE) -> list[GrowthRow]:
    """Scaled norms of the extension family for each ``R`` in ``R_list``.

    ``||Psi||_{L^4}`` is obtained by quadrature (exact for this piecewise
    polynomial field with the default rule), ``||grad Psi||`` from ``B1``.
    Only the L^4 part converges to ``(4h)^{1/4}``; the gradient part decays
    like ``R^{-1/4}``, so the total ratio approaches the same limit from above.
    """
    h = check_height(h)
    eps = eps_growth(h)
    rows = []
    for R in sorted(float(r) for r in R_list):
        geom = ChannelGeometry(R, h)
        grad = math.sqrt(B1(h)) * U
        l4 = l4_fourth_quadrature(geom, U, rule).value ** 0.25
        scale = R ** 0.25 * U
        rows.append(GrowthRow(R, grad, l4, (grad + l4) / scale, l4 / scale, eps))
    return rows
