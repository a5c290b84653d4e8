"""
Strip constant from separated variables
=======================================

The transverse profile is a Jacobi elliptic cosine with modulus 1/sqrt(2),
the longitudinal one a sech. This script walks through the calibration
height h0 and the resulting constant c in S_inf(h) <= c / h.
"""

import math

from ofb.bounds import STRIP_LOWER_CONST, strip_bounds
from ofb.specfun import bessel_j0_first_zero, cn_first_zero, jacobi_cn
from ofb.strip import find_h0, separated_quotient, w_norms

###############################################################################
# Two constants feed everything else: the first zero of J0 and the first
# zero of cn.

mu0 = bessel_j0_first_zero()
alpha = cn_first_zero()
print(f"first zero of J0   mu0   = {mu0:.12f}")
print(f"first zero of cn   alpha = {alpha:.12f}   (cn(alpha) = {jacobi_cn(alpha):.1e})")

###############################################################################
# The profile W_h(y) = cn(alpha y / h) / mu_h has unit L^4 norm. Its
# derivative norm decreases in h; h0 is where it equals one.

for h in (1.5, 2.0, 2.5):
    l2, d2, l4 = w_norms(h)
    print(f"h = {h:3.1f}:  ||W||_2 = {l2:.6f}  ||W'||_2 = {d2:.6f}  ||W||_4 = {l4:.6f}")
h0 = find_h0()
print(f"h0 = {h0:.10f}")

###############################################################################
# With the sech profile at width ||W_h0||_2 the quotient at h0, times h0,
# is the constant c. Its ratio to the lower constant is the accuracy of the
# bound and does not depend on h.

res = separated_quotient()
print(f"c = {res.c_upper:.9f}   c / lower constant = {res.c_upper / STRIP_LOWER_CONST:.7f}")
for h in (2.0, 5.0, 20.0):
    lo, hi = strip_bounds(h)
    print(f"h = {h:4.1f}:  {lo:.6f} <= S_inf <= {hi:.6f}")
