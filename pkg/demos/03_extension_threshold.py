"""
Solenoidal extension and the uniqueness threshold
=================================================

Psi = U (omega + y omega_y, -y omega_x) carries the boundary data (U, 0)
and vanishes near the obstacle. Its norms enter the explicit Reynolds
threshold re_bar.
"""

import numpy as np

from ofb.extension import B2_exact, ExtensionField
from ofb.geometry import ChannelGeometry, FlowParams
from ofb.threshold import certify_uniqueness, eps_growth, growth_diagnostic, re_bar

###############################################################################
# Closed forms against quadrature. B1 matches to rounding; the reference
# B2 overshoots the integral by an R-independent amount, B2_exact does not.

for R, h in [(6, 2), (10, 3), (20, 5)]:
    chk = ExtensionField.build(ChannelGeometry(R, h)).verify()
    print(f"(R,h)=({R},{h}): B1 rel err {chk.B1_rel_err:.1e}; "
          f"B2 reference {chk.B2_closed:.4f}, exact {B2_exact(R, h):.4f}, quadrature {chk.B2_quadrature:.4f}; "
          f"flux {chk.flux:.1e}")

###############################################################################
# The threshold. Small U/eta is always certified.

g = ChannelGeometry(6, 5)
for U in (0.01, 0.05, 0.06):
    rep = certify_uniqueness(g, FlowParams(U, 1.0))
    print(f"U/eta = {U}: re_bar = {rep.re_bar:.6f}, certified = {rep.unique_certified}")

###############################################################################
# re_bar decays like R^{-1/4}, but only once 4Rh dominates the constant part
# of B2. Local slopes of log re_bar against log R at h = 5:

for lo, hi in [(1e2, 1e6), (1e6, 1e10), (1e8, 1e12)]:
    R = np.logspace(np.log10(lo), np.log10(hi), 41)
    s = np.polyfit(np.log(R), np.log([re_bar(ChannelGeometry(r, 5)) for r in R]), 1)[0]
    print(f"  R in [{lo:.0e}, {hi:.0e}]: slope {s:.3f}")

###############################################################################
# Growth of the extension norms against eps(h).

print(f"eps(2) = {eps_growth(2):.6f}")
for row in growth_diagnostic(2, [1e2, 1e3, 1e4, 1e5]):
    print(f"  R = {row.R:8.0f}: (grad + L4)/R^(1/4) = {row.ratio:.4f}, L4/R^(1/4) = {row.l4_ratio:.4f}")
