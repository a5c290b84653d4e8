"""
Lower and upper bounds for the pierced rectangle
================================================

The lower bound is the larger of a Poincare arm and a Faber-Krahn arm.
The upper bounds come from two explicit test functions, X0 (radial, around
the obstacle) and X1 (a paraboloid on a disk beside it).
"""

import math

from ofb.bounds import bounds_report, x0_quotient, x0_ratio_limit_check
from ofb.geometry import ChannelGeometry

###############################################################################
# A few geometries. X1 only competes when its disk fits next to the
# obstacle, i.e. R >= 2h + 1.

for R, h in [(3, 2), (6, 2), (40, 2), (12, 5), (200, 5)]:
    rep = bounds_report(ChannelGeometry(R, h))
    x1 = "   -   " if rep.upper_X1 is None else f"{rep.upper_X1:.4f}"
    print(f"R={R:5}, h={h}:  lower {rep.lower:.4f}  X0 {rep.upper_X0:8.4f}  X1 {x1}")

###############################################################################
# The closed form of the X0 quotient agrees with quadrature.

for h in (2.0, 5.0, 10.0):
    print(f"h = {h:4.1f}: X0 closed form vs quadrature, rel diff "
          f"{abs(bounds_report(ChannelGeometry(h + 1, h)).upper_X0 / x0_quotient(h) - 1):.1e}")

###############################################################################
# On the strip, h * X0 / (lower constant) tends to 2 sqrt(10) / pi, but only
# like 1 / log h. Multiprecision lets us follow it far out.

print(f"limit 2 sqrt(10)/pi = {2 * math.sqrt(10) / math.pi:.6f}")
for h in ("1e2", "1e6", "1e50", "1e500", "1e5000"):
    print(f"  h = {h:>7}: ratio {x0_ratio_limit_check(h):.6f}")
