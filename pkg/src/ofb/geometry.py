"""Channel domains: the pierced rectangle, the infinite strip and flow parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Raised when a parameter lies outside the admissible range."""


def check_height(h: float) -> float:
    h = float(h)
    if not h > 1.0 or not math.isfinite(h):
        raise DomainError(f"half-height h must satisfy h > 1, got h={h!r}")
    return h


@dataclass(frozen=True)
class ChannelGeometry:
    """Pierced rectangle ``(-R, R) x (-h, h)`` minus the closed unit disk.

    Parameters
    ----------
    R : float
        Half-length of the channel.
    h : float
        Half-height of the channel. Requires ``R > h > 1``.
    """

    R: float
    h: float
    obstacle_radius: float = 1.0

    def __post_init__(self):
        R, h = float(self.R), float(self.h)
        if not (math.isfinite(R) and math.isfinite(h)):
            raise DomainError(f"non-finite geometry R={R!r}, h={h!r}")
        if not h > 1.0:
            raise DomainError(f"half-height must satisfy h > 1, got h={h}")
        if not R > h:
            raise DomainError(f"half-length must satisfy R > h, got R={R}, h={h}")
        if self.obstacle_radius != 1.0:
            raise DomainError("the obstacle is the unit disk; obstacle_radius must be 1")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "h", h)

    @property
    def area(self) -> float:
        return 4.0 * self.R * self.h - math.pi

    @property
    def rectangle_area(self) -> float:
        return 4.0 * self.R * self.h


@dataclass(frozen=True)
class FlowParams:
    """Inflow speed ``U`` and kinematic viscosity ``eta``, both positive."""

    U: float
    eta: float

    def __post_init__(self):
        for name in ("U", "eta"):
            val = float(getattr(self, name))
            if not (val > 0.0 and math.isfinite(val)):
                raise DomainError(f"{name} must be positive and finite, got {val!r}")
            object.__setattr__(self, name, val)

    @property
    def ratio(self) -> float:
        return self.U / self.eta


@dataclass(frozen=True)
class StripGeometry:
    """Infinite strip ``R x (-h, h)``."""

    h: float

    def __post_init__(self):
        object.__setattr__(self, "h", check_height(self.h))


def contains(geom: ChannelGeometry, x, y):
    """Membership in the open pierced rectangle; works elementwise on arrays."""
    return (abs(x) < geom.R) & (abs(y) < geom.h) & (x * x + y * y > 1.0)
