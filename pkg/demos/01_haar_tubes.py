"""
Projected products of two tubes
===============================

Two length-4 tubes multiplied three ways with the 4-point Haar matrix:
the full star-M product, the projected product on the first two Haar
columns, and the projected product on the remaining two.
"""

import numpy as np

from projprod import StarContext, haar_complement, haar_matrix, haar_transform
from projprod import mode3_product, star_m_product, star_q_product

a = np.array([2.0, 4.0, 6.0, 8.0]).reshape(1, 1, 4)
b = np.array([1.0, -1.0, 1.0, 0.0]).reshape(1, 1, 4)

# M = H^T; Q keeps the first two columns of H
ctx = StarContext(haar_transform(4, 2), haar_complement(4, 2))
perp = ctx.complement_context()

full = star_m_product(a, b, haar_matrix(4).T)
left = star_q_product(a, b, ctx)
right = star_q_product(a, b, perp)
print("a *M b       =", full.ravel())
print("a *Q' b      =", left.ravel().round(12))
print("a *Qperp' b  =", right.ravel().round(12))

# the two projected products add back up to the full one
print("sum matches:", np.allclose(left + right, full))

# projecting the inputs first gives the same projected product
P = ctx.Q @ ctx.Q.T
print("a x3 QQ^T    =", mode3_product(a, P).ravel().round(12))
print("b x3 QQ^T    =", mode3_product(b, P).ravel().round(12))
