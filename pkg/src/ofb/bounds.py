"""Explicit lower and upper bounds for the Sobolev constants of the channel and the strip.

``S_R`` is the best constant in ``S_R ||v||_{L^4}^2 <= ||grad v||_{L^2}^2`` on the
pierced rectangle and ``S_inf(h)`` the same quantity on the strip ``R x (-h, h)``.
The lower bound combines a Gagliardo-Nirenberg inequality with the
Poincare constant of the rectangle and with the Faber-Krahn inequality; the
upper bounds come from evaluating the quotient at two explicit test
functions.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import mpmath
import numpy as np

from .geometry import ChannelGeometry, check_height
from .quadrature import DEFAULT_RULE, IntegrationRegion, QuadratureRule, norm_L2_grad, norm_Lp
from .specfun import bessel_j0_first_zero

# (pi/2) sqrt(3 pi / 2): limit of h * lower_bound as R -> infinity
STRIP_LOWER_CONST = 0.5 * math.pi * math.sqrt(1.5 * math.pi)
_GN = math.pi * math.sqrt(1.5)
_KAPPA_DPS = 50


def _kappa_mp(h):
    # heavy cancellation: kappa ~ (h-1)^9 near h = 1, so evaluate in multiprecision
    h = mpmath.mpf(h)
    L = mpmath.log(h)
    h6 = h ** 6
    mpf = mpmath.mpf
    return (
        -mpf(1) / 324
        + 96 * h / mpf(3125)
        - 9 * h ** 2 / mpf(64)
        + 32 * h ** 3 / mpf(81)
        - 3 * h ** 4 / mpf(4)
        + 7580461 * h6 / mpf(16200000)
        - (66801 * h6 * L - 46690 * h6 * L ** 2 + 17400 * h6 * L ** 3 - 3000 * h6 * L ** 4) / mpf(90000)
    )


def _upper_x0_mp(h):
    h = mpmath.mpf(h)
    L = mpmath.log(h)
    num = 2 * h ** 2 * L ** 2 - 2 * h ** 2 * L + h ** 2 - 1
    return mpmath.sqrt(mpmath.pi / (2 * _kappa_mp(h))) * num / 2


def kappa(h: float) -> float:
    """The polynomial-logarithmic constant ``kappa(h) = int X0^4 / (2 pi)`` (positive for h > 1)."""
    check_height(h)
    with mpmath.workdps(_KAPPA_DPS):
        return float(_kappa_mp(h))


def lower_bound_terms(geom: ChannelGeometry) -> tuple[float, float]:
    """The two arguments of the max in the lower bound: (Poincare, Faber-Krahn)."""
    R, h = geom.R, geom.h
    poincare = 0.5 * math.sqrt(math.pi) * math.hypot(R, h) / (R * h)
    faber_krahn = bessel_j0_first_zero() / math.sqrt(4.0 * R * h - math.pi)
    return poincare, faber_krahn


def lower_bound(geom: ChannelGeometry) -> float:
    return _GN * max(lower_bound_terms(geom))


def rectangle_lower_bound(R: float, h: float) -> float:
    """Lower bound for the Sobolev constant of the full rectangle ``Q_R`` (no obstacle)."""
    return STRIP_LOWER_CONST * math.hypot(R, h) / (R * h)


def upper_bound_X0(h: float) -> float:
    """Rayleigh quotient of the radial test function X0, in closed form."""
    check_height(h)
    with mpmath.workdps(_KAPPA_DPS):
        return float(_upper_x0_mp(h))


def x0_ratio_limit_check(h) -> float:
    """``h * upper_bound_X0(h) / STRIP_LOWER_CONST`` in multiprecision.

    ``h`` may be a string such as ``"1e5000"`` to probe the limit
    ``2 sqrt(10) / pi``, which is approached only at rate ``1 / log h``.
    """
    with mpmath.workdps(_KAPPA_DPS):
        hm = mpmath.mpf(h)
        if not hm > 1:
            raise ValueError("h must exceed 1")
        ratio = hm * _upper_x0_mp(hm) / (mpmath.pi / 2 * mpmath.sqrt(3 * mpmath.pi / 2))
        return float(ratio)


def x1_admissible(geom: ChannelGeometry) -> bool:
    """Whether the disk of radius h centred at ((R+1)/2, 0) fits in (1, R) x (-h, h)."""
    return geom.R >= 2.0 * geom.h + 1.0


def x1_value(h: float) -> float:
    """Quotient of X1, ``2 sqrt(5 pi) / h``; a bound on ``S_R`` only when X1 is admissible."""
    return 2.0 * math.sqrt(5.0 * math.pi) / check_height(h)


def upper_bound_X1(geom: ChannelGeometry) -> float | None:
    """``2 sqrt(5 pi) / h`` when the supporting disk of X1 fits (``R >= 2h + 1``), else ``None``.

    For shorter channels the disk crosses ``x = 1`` or ``x = R`` and X1 is
    not a competitor; grid minimisation at ``R = 2.05, h = 2`` gives a
    discrete constant near 7.2, well above ``2 sqrt(5 pi) / 2 = 3.96``.
    """
    if x1_admissible(geom):
        return x1_value(geom.h)
    return None


def strip_lower(h: float) -> float:
    return STRIP_LOWER_CONST / check_height(h)


def strip_bounds(h: float, sep_upper: float | None = None) -> tuple[float, float]:
    """Lower and upper bound for the strip constant ``S_inf(h)``.

    ``sep_upper`` is the separated-variables bound ``c / h``; it is computed
    by :mod:`ofb.strip` when omitted.
    """
    lo = strip_lower(h)
    if sep_upper is None:
        from .strip import separated_quotient

        sep_upper = separated_quotient().c_upper / h
    hi = min(upper_bound_X0(h), sep_upper)
    return lo, hi


# -- test functions ---------------------------------------------------------

def x0(h, x, y):
    """``X0 = (h - r) log r`` on ``1 < r < h``, zero elsewhere."""
    r = np.hypot(x, y)
    return np.where((r > 1.0) & (r < h), (h - r) * np.log(r), 0.0)


def x0_grad(h, x, y):
    r = np.hypot(x, y)
    inside = (r > 1.0) & (r < h)
    rs = np.where(inside, r, 1.0)
    dr = np.where(inside, -np.log(rs) + (h - rs) / rs, 0.0)
    return dr * x / rs, dr * y / rs


def x1(geom: ChannelGeometry, x, y):
    cx = 0.5 * (geom.R + 1.0)
    v = geom.h ** 2 - (x - cx) ** 2 - y ** 2
    return np.maximum(v, 0.0)


def x1_grad(geom: ChannelGeometry, x, y):
    cx = 0.5 * (geom.R + 1.0)
    inside = geom.h ** 2 - (x - cx) ** 2 - y ** 2 > 0
    return np.where(inside, -2.0 * (x - cx), 0.0), np.where(inside, -2.0 * y, 0.0)


def x0_quotient(h: float, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """Quadrature value of ``||grad X0||^2 / ||X0||_{L^4}^2`` on the annulus ``1 < r < h``."""
    h = check_height(h)
    region = IntegrationRegion.annulus(h)
    g = norm_L2_grad(region, lambda x, y: x0_grad(h, x, y)[0], lambda x, y: x0_grad(h, x, y)[1], rule)
    return g * g / norm_Lp(region, lambda x, y: x0(h, x, y), 4, rule) ** 2


def x1_quotient(geom: ChannelGeometry, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """Quadrature value of the X1 quotient on its supporting disk."""
    region = IntegrationRegion.disk(geom.h, center=(0.5 * (geom.R + 1.0), 0.0))
    g = norm_L2_grad(region, lambda x, y: x1_grad(geom, x, y)[0], lambda x, y: x1_grad(geom, x, y)[1], rule)
    return g * g / norm_Lp(region, lambda x, y: x1(geom, x, y), 4, rule) ** 2


@dataclass(frozen=True)
class BoundsReport:
    R: float
    h: float
    lower_poincare: float
    lower_faberkrahn: float
    lower: float
    upper_X0: float
    upper_X1: float | None
    kappa: float
    strip_lower: float
    strip_upper_X0: float
    strip_upper_sep: float

    def as_dict(self) -> dict:
        return asdict(self)


def bounds_report(geom: ChannelGeometry) -> BoundsReport:
    from .strip import separated_quotient

    p, fk = lower_bound_terms(geom)
    up0 = upper_bound_X0(geom.h)
    return BoundsReport(
        R=geom.R,
        h=geom.h,
        lower_poincare=p,
        lower_faberkrahn=fk,
        lower=_GN * max(p, fk),
        upper_X0=up0,
        upper_X1=upper_bound_X1(geom),
        kappa=kappa(geom.h),
        strip_lower=strip_lower(geom.h),
        strip_upper_X0=up0,
        strip_upper_sep=separated_quotient().c_upper / geom.h,
    )
