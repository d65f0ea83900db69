"""
When the data-dependent basis is not best
=========================================

A 2 x 2 x 2 tensor whose frontal slices are I and diag(1, -1). The leading
left singular vector of the mode-3 unfolding minimizes the projection error,
but the transform-domain slice it produces is full rank, so a rank-1
truncation pays an extra Eckart-Young term. The Haar vector has the same
projection error and a rank-1 slice.
"""

import numpy as np

from projprod import data_dependent_transform, haar_transform, tsvdq, tsvdq_error

A = np.zeros((2, 2, 2))
A[:, :, 0] = np.eye(2)
A[:, :, 1] = np.diag([1.0, -1.0])

for name, T in [("U3(:,1)", data_dependent_transform(A, 1)), ("H2(1,:)^T", haar_transform(2, 1))]:
    e = tsvdq_error(A, tsvdq(A, T, 1))
    print(f"{name:10s} Q = {T.Q.ravel().round(4) + 0.0}")
    print(f"           total^2 = {e.total**2:.3f} = {e.eckart_young**2:.3f} (Eckart-Young)"
          f" + {e.projection**2:.3f} (projection)")
