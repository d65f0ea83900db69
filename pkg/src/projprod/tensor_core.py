"""Dense order-3 tensors: slicing, unfoldings, mode products, facewise products.

Tensors are plain ``numpy.ndarray`` objects of shape ``(n1, n2, n3)`` and
dtype float64. Index ``(i, j, k)`` maps to the flat offset
``i + j*n1 + k*n1*n2`` when the array is viewed in Fortran (mode-1 fastest)
order, which is also the order used by the PT3 file format.

Every function returns a new array; inputs are never modified.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError

__all__ = [
    "as_tensor",
    "frontal_slice",
    "tube",
    "mode3_unfold",
    "mode3_fold",
    "mode_unfold",
    "mode_fold",
    "mode_product",
    "mode3_product",
    "facewise_product",
    "frobenius_norm",
]


def as_tensor(A) -> np.ndarray:
    """Return ``A`` as a float64 order-3 array (a copy)."""
    A = np.array(A, dtype=np.float64)
    if A.ndim != 3:
        raise ShapeError(f"expected an order-3 tensor, got shape {A.shape}")
    return A


def _check3(A: np.ndarray) -> None:
    if A.ndim != 3:
        raise ShapeError(f"expected an order-3 tensor, got shape {A.shape}")


def frontal_slice(A: np.ndarray, k: int) -> np.ndarray:
    """Copy of the ``k``-th frontal slice ``A[:, :, k]``."""
    _check3(A)
    n3 = A.shape[2]
    if not 0 <= k < n3:
        raise IndexError(f"frontal slice {k} out of range for n3={n3}")
    return A[:, :, k].copy()


def tube(A: np.ndarray, i: int, j: int) -> np.ndarray:
    """Copy of the tube fiber ``A[i, j, :]``."""
    _check3(A)
    n1, n2, _ = A.shape
    if not (0 <= i < n1 and 0 <= j < n2):
        raise IndexError(f"tube ({i}, {j}) out of range for shape {A.shape}")
    return A[i, j, :].copy()


def mode3_unfold(A: np.ndarray) -> np.ndarray:
    """Mode-3 unfolding, an ``n3 x n1*n2`` matrix whose column ``i + j*n1`` is
    the tube ``A[i, j, :]``."""
    _check3(A)
    n1, n2, n3 = A.shape
    return A.reshape(n1 * n2, n3, order="F").T.copy()


def mode3_fold(B: np.ndarray, dims) -> np.ndarray:
    """Inverse of :func:`mode3_unfold`."""
    n1, n2, n3 = (int(d) for d in dims)
    B = np.asarray(B, dtype=np.float64)
    if B.shape != (n3, n1 * n2):
        raise ShapeError(
            f"cannot fold a {B.shape} matrix into dims {(n1, n2, n3)}; "
            f"expected ({n3}, {n1 * n2})"
        )
    return B.T.reshape(n1, n2, n3, order="F").copy()


def _check_mode(mode: int) -> None:
    if mode not in (1, 2, 3):
        raise ValueError(f"mode must be 1, 2 or 3, got {mode!r}")


def mode_unfold(A: np.ndarray, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding (Kolda-Bader ordering).

    The result has ``A.shape[mode-1]`` rows; its columns run over the
    remaining indices in ascending mode order with the earlier mode fastest.
    ``mode_unfold(A, 3)`` equals ``mode3_unfold(A)``.
    """
    _check3(A)
    _check_mode(mode)
    ax = mode - 1
    n = A.shape[ax]
    return np.moveaxis(A, ax, 0).reshape(n, -1, order="F").copy()


def mode_fold(B: np.ndarray, mode: int, dims) -> np.ndarray:
    """Inverse of :func:`mode_unfold`."""
    _check_mode(mode)
    dims = tuple(int(d) for d in dims)
    ax = mode - 1
    rest = [d for a, d in enumerate(dims) if a != ax]
    B = np.asarray(B, dtype=np.float64)
    if B.shape != (dims[ax], rest[0] * rest[1]):
        raise ShapeError(f"cannot fold a {B.shape} matrix into dims {dims} along mode {mode}")
    T = B.reshape(dims[ax], rest[0], rest[1], order="F")
    return np.moveaxis(T, 0, ax).copy()


def mode_product(A: np.ndarray, M: np.ndarray, mode: int) -> np.ndarray:
    """Mode-``mode`` product ``A x_mode M`` for a matrix ``M`` of shape
    ``(q, A.shape[mode-1])``."""
    _check3(A)
    _check_mode(mode)
    M = np.asarray(M, dtype=np.float64)
    ax = mode - 1
    if M.ndim != 2 or M.shape[1] != A.shape[ax]:
        raise ShapeError(
            f"mode-{mode} product needs a matrix with {A.shape[ax]} columns, got {M.shape}"
        )
    out = np.tensordot(M, A, axes=([1], [ax]))
    return np.moveaxis(out, 0, ax)


def mode3_product(A: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``A x_3 M = fold(M @ A_(3))``; ``M`` is ``q x n3`` and the result is
    ``n1 x n2 x q``."""
    _check3(A)
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[1] != A.shape[2]:
        raise ShapeError(f"mode-3 product needs a q x {A.shape[2]} matrix, got {M.shape}")
    return A @ M.T


def facewise_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Slice-by-slice matrix product: ``C[:, :, k] = A[:, :, k] @ B[:, :, k]``."""
    _check3(A)
    _check3(B)
    if A.shape[1] != B.shape[0] or A.shape[2] != B.shape[2]:
        raise ShapeError(f"facewise product of {A.shape} and {B.shape} is undefined")
    return np.einsum("imk,mjk->ijk", A, B)


def frobenius_norm(A: np.ndarray) -> float:
    """Frobenius norm, ``sqrt(sum_k ||A[:, :, k]||_F^2)``."""
    return float(np.linalg.norm(np.ravel(A)))
