"""Dense matrix kernels: SVD, truncated SVD, orthonormalization, ranks.

The SVD itself is LAPACK's (through numpy); this module pins the output
contract on top of it: descending nonnegative singular values and a
deterministic sign for every singular pair.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DegenerateInputError, NumericError

DEFAULT_RANK_TOL = 1e-12


class SvdResult(NamedTuple):
    """Thin SVD ``A = U @ diag(s) @ V.T`` with ``r = len(s)`` retained terms."""

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.s) @ self.V.T


def _check_finite(A: np.ndarray) -> None:
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix contains non-finite entries")


def _fix_signs(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # largest-magnitude entry of each column of U made positive
    if U.size == 0:
        return U, V
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    return U * signs, V * signs


def svd(A: np.ndarray) -> SvdResult:
    """Thin SVD with ``r = min(m, n)``.

    Raises
    ------
    NumericError
        If ``A`` has NaN or infinite entries.
    """
    A = np.asarray(A, dtype=np.float64)
    _check_finite(A)
    m, n = A.shape
    if m == 0 or n == 0:
        r = min(m, n)
        return SvdResult(np.zeros((m, r)), np.zeros(r), np.zeros((n, r)))
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    U, V = _fix_signs(U, Vt.T)
    return SvdResult(U, s, V)


def truncated_svd(A: np.ndarray, k: int) -> SvdResult:
    """Leading ``k`` singular triplets of ``A``."""
    A = np.asarray(A, dtype=np.float64)
    r = min(A.shape)
    if not 1 <= k <= r:
        raise ValueError(f"truncation k={k} must lie in [1, {r}]")
    U, s, V = svd(A)
    return SvdResult(U[:, :k].copy(), s[:k].copy(), V[:, :k].copy())


def _first_nonzero_positive(Q: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    Q = Q.copy()
    for j in range(Q.shape[1]):
        nz = np.flatnonzero(np.abs(Q[:, j]) > tol)
        if nz.size and Q[nz[0], j] < 0:
            Q[:, j] = -Q[:, j]
    return Q


def orthonormalize(A: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Orthonormal basis for the column space of a full-column-rank ``A``.

    Columns come from a Householder QR, so the span of the leading ``j``
    columns of the output equals that of ``A[:, :j]``. Each column is signed
    so that its first nonzero entry is positive.
    """
    A = np.asarray(A, dtype=np.float64)
    _check_finite(A)
    n, p = A.shape
    if p > n:
        raise DegenerateInputError(f"cannot orthonormalize {p} columns in R^{n}")
    if p == 0:
        return np.zeros((n, 0))
    Q, R = np.linalg.qr(A, mode="reduced")
    d = np.abs(np.diag(R))
    scale = max(float(np.max(np.abs(R))), np.finfo(float).tiny)
    if np.any(d <= tol * scale):
        raise DegenerateInputError("input matrix is rank deficient")
    return _first_nonzero_positive(Q)


def orthonormal_completion(Q: np.ndarray, n_extra: int | None = None) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(Q)``.

    ``Q`` must have orthonormal columns. Returns an ``n x (n - p)`` matrix
    (or its first ``n_extra`` columns). The basis is the leading left
    singular vectors of the projector ``I - Q Q^T``, so it is deterministic.
    """
    Q = np.asarray(Q, dtype=np.float64)
    n, p = Q.shape
    m = n - p if n_extra is None else int(n_extra)
    if not 0 <= m <= n - p:
        raise ValueError(f"cannot add {m} columns to a {n} x {p} basis")
    if m == 0:
        return np.zeros((n, 0))
    P = np.eye(n) - Q @ Q.T
    U = svd(P).U[:, :m]
    # one re-orthogonalization pass against Q and within U
    U = U - Q @ (Q.T @ U)
    return orthonormalize(U)


def numerical_rank(s, tol_rel: float = DEFAULT_RANK_TOL, reference: float | None = None) -> int:
    """Number of singular values strictly above ``tol_rel * reference``.

    ``reference`` defaults to ``s[0]``, the largest value; pass a global
    maximum to compare several spectra on a common scale.
    """
    s = np.asarray(s, dtype=np.float64)
    if s.size == 0:
        return 0
    ref = float(s[0]) if reference is None else float(reference)
    if ref <= 0:
        return 0
    return int(np.count_nonzero(s > tol_rel * ref))


def orthonormality_defect(Q: np.ndarray) -> float:
    """``||Q^T Q - I||_F``."""
    Q = np.asarray(Q, dtype=np.float64)
    return float(np.linalg.norm(Q.T @ Q - np.eye(Q.shape[1])))


def jacobi_eigvalsh(S: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by the cyclic Jacobi method.

    Kept deliberately separate from LAPACK so it can serve as an independent
    oracle for :func:`svd`. Returns eigenvalues in descending order.
    """
    S = np.array(S, dtype=np.float64)
    n = S.shape[0]
    if S.shape != (n, n):
        raise ValueError("matrix must be square")
    S = 0.5 * (S + S.T)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(S, -1) ** 2))
        if off <= tol * max(np.linalg.norm(S), np.finfo(float).tiny):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = S[p, q]
                if apq == 0.0:
                    continue
                theta = (S[q, q] - S[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                rot_p = S[:, p].copy()
                rot_q = S[:, q].copy()
                S[:, p] = c * rot_p - sn * rot_q
                S[:, q] = sn * rot_p + c * rot_q
                rot_p = S[p, :].copy()
                rot_q = S[q, :].copy()
                S[p, :] = c * rot_p - sn * rot_q
                S[q, :] = sn * rot_p + c * rot_q
    return np.sort(np.diag(S))[::-1]
