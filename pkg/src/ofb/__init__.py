"""Sobolev constants, solenoidal extensions and uniqueness thresholds for channel flow past a disk."""

from .bounds import (
    STRIP_LOWER_CONST,
    BoundsReport,
    bounds_report,
    lower_bound,
    strip_bounds,
    upper_bound_X0,
    upper_bound_X1,
)
from .extension import B1, B2, B2_exact, ExtensionField
from .geometry import ChannelGeometry, DomainError, FlowParams, StripGeometry
from .minimizer import MinimizeResult, minimize, symmetry_breaking_scan
from .specfun import bessel_j0_first_zero, cn_first_zero, jacobi_cn
from .strip import find_h0, separated_quotient
from .threshold import ThresholdReport, certify_uniqueness, eps_growth, re_bar

__version__ = "0.1.0"

__all__ = [
    "B1",
    "B2",
    "B2_exact",
    "BoundsReport",
    "ChannelGeometry",
    "DomainError",
    "ExtensionField",
    "FlowParams",
    "MinimizeResult",
    "STRIP_LOWER_CONST",
    "StripGeometry",
    "ThresholdReport",
    "bessel_j0_first_zero",
    "bounds_report",
    "certify_uniqueness",
    "cn_first_zero",
    "eps_growth",
    "find_h0",
    "jacobi_cn",
    "lower_bound",
    "minimize",
    "re_bar",
    "separated_quotient",
    "strip_bounds",
    "symmetry_breaking_scan",
    "upper_bound_X0",
    "upper_bound_X1",
]
