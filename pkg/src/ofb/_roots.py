"""Bracketed scalar root finding shared by the special-function and threshold code."""

from __future__ import annotations

import math


class BracketError(RuntimeError):
    """The supplied interval does not bracket a sign change."""


def bisect(f, a: float, b: float, xtol: float = 1e-14, maxiter: int = 200) -> float:
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if math.copysign(1.0, fa) == math.copysign(1.0, fb):
        raise BracketError(f"no sign change on [{a}, {b}]: f(a)={fa:.3e}, f(b)={fb:.3e}")
    for _ in range(maxiter):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0 or 0.5 * (b - a) < xtol:
            return m
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def bisect_newton(f, fprime, a: float, b: float, coarse: float = 1e-3, maxnewton: int = 20) -> float:
    """Bisect down to width ``coarse`` then polish with Newton steps kept inside [a, b]."""
    x = bisect(f, a, b, xtol=coarse)
    lo, hi = min(a, b), max(a, b)
    for _ in range(maxnewton):
        d = fprime(x)
        if d == 0.0:
            break
        step = f(x) / d
        xn = x - step
        if not lo <= xn <= hi:
            break
        x = xn
        if abs(step) <= 4e-16 * max(1.0, abs(x)):
            break
    return x
