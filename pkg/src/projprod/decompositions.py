"""Truncated projected-product SVDs and the HOSVD / matrix-SVD baselines.

Projected factors are stored in the transform domain as stacks whose last
axis indexes the ``p`` transform-domain frontal slices; spatial tensors
are materialized on demand by :func:`tsvdq_reconstruct` and friends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .matrix_kernels import DEFAULT_RANK_TOL, SvdResult, numerical_rank, orthonormal_completion, svd, truncated_svd
from .tensor_core import mode3_product, mode_product, mode_unfold
from .transforms import Transform, projection_error

__all__ = [
    "ErrorParts",
    "TsvdqFactors",
    "TsvdqIIFactors",
    "HosvdFactors",
    "facewise_svd",
    "tsvdq",
    "tsvdq_full",
    "tsvdq_reconstruct",
    "tsvdq_error",
    "star_q_rank",
    "star_q_multirank",
    "tsvdq2",
    "tsvdq2_reconstruct",
    "tsvdq2_error",
    "energy_for_truncation",
    "hosvd",
    "hosvd_reconstruct",
    "matrix_svd_baseline",
    "hosvd_matched_truncation",
]

# slack on the cumulative-energy comparison in tsvdq2, covering the rounding
# difference between two summation orders of the same energies
_ENERGY_SLACK = 1e-14


class ErrorParts(NamedTuple):
    """Frobenius error of an approximation split into its two parts;
    ``total**2 == eckart_young**2 + projection**2`` up to rounding."""

    total: float
    eckart_young: float
    projection: float


def _transform_domain(A: np.ndarray, T: Transform) -> np.ndarray:
    if A.ndim != 3 or A.shape[2] != T.n3:
        raise ValueError(f"tensor {A.shape} does not match transform with n3={T.n3}")
    return mode3_product(A, T.Q.T)


def facewise_svd(Ahat: np.ndarray) -> list[SvdResult]:
    """Thin SVD of every frontal slice of a transform-domain tensor."""
    return [svd(Ahat[:, :, i]) for i in range(Ahat.shape[2])]


@dataclass(frozen=True, eq=False)
class TsvdqFactors:
    """Transform-domain factors of a truncated projected SVD.

    ``U`` is ``n1 x k x p``, ``s`` is ``k x p`` and ``V`` is ``n2 x k x p``;
    slice ``i`` approximates ``(A x_3 Q^T)[:, :, i]`` by
    ``U[:, :, i] @ diag(s[:, i]) @ V[:, :, i].T``. ``tail_energy[i]`` holds the
    squared singular values that were discarded from slice ``i``.
    """

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray
    transform: Transform
    k: int
    tail_energy: np.ndarray

    @property
    def p(self) -> int:
        return self.transform.p


def tsvdq(A: np.ndarray, T: Transform, k: int) -> TsvdqFactors:
    """Truncated projected SVD with truncation ``k``.

    Each transform-domain frontal slice ``(A x_3 Q^T)[:, :, i]`` is replaced by
    its best rank-``k`` approximation.
    """
    n1, n2, _ = A.shape
    if not 1 <= k <= min(n1, n2):
        raise ValueError(f"truncation k={k} must lie in [1, {min(n1, n2)}]")
    Ahat = _transform_domain(A, T)
    p = T.p
    U = np.empty((n1, k, p))
    s = np.empty((k, p))
    V = np.empty((n2, k, p))
    tail = np.empty(p)
    for i, (Ui, si, Vi) in enumerate(facewise_svd(Ahat)):
        U[:, :, i] = Ui[:, :k]
        s[:, i] = si[:k]
        V[:, :, i] = Vi[:, :k]
        tail[i] = float(np.sum(si[k:] ** 2))
    return TsvdqFactors(U, s, V, T, k, tail)


def tsvdq_full(A: np.ndarray, T: Transform) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full projected SVD in the spatial domain.

    Returns ``(U, S, V)`` with ``U`` ``n1 x n1 x n3`` and ``V`` ``n2 x n2 x n3``
    unitary under the projected product, ``S`` f-diagonal, and
    ``U *Q' S *Q' V^T == A x_3 Q Q^T``.
    """
    n1, n2, _ = A.shape
    Ahat = _transform_domain(A, T)
    p = T.p
    Uh = np.empty((n1, n1, p))
    Sh = np.zeros((n1, n2, p))
    Vh = np.empty((n2, n2, p))
    q = min(n1, n2)
    for i in range(p):
        Ui, si, Vti = np.linalg.svd(Ahat[:, :, i], full_matrices=True)
        Uh[:, :, i] = Ui
        Sh[np.arange(q), np.arange(q), i] = si
        Vh[:, :, i] = Vti.T
    Q = T.Q
    return mode3_product(Uh, Q), mode3_product(Sh, Q), mode3_product(Vh, Q)


def tsvdq_reconstruct(F: TsvdqFactors) -> np.ndarray:
    """Spatial-domain approximation ``A_k = (U facewise S facewise V^T) x_3 Q``."""
    Ahat = np.einsum("irk,rk,jrk->ijk", F.U, F.s, F.V)
    return mode3_product(Ahat, F.transform.Q)


def tsvdq_error(A: np.ndarray, F: TsvdqFactors) -> ErrorParts:
    """Reconstruction error of ``F`` together with its Eckart-Young and
    projection parts.

    ``total`` is measured directly as ``||A - A_k||_F``; the two parts come
    from the discarded singular values and from :func:`projection_error`.
    """
    total = float(np.linalg.norm(A - tsvdq_reconstruct(F)))
    ey = math.sqrt(float(np.sum(F.tail_energy)))
    return ErrorParts(total, ey, projection_error(A, F.transform))


def star_q_multirank(A: np.ndarray, T: Transform, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Rank of every transform-domain frontal slice.

    Singular values are compared against ``tol`` times the largest singular
    value over all slices.
    """
    spectra = [r.s for r in facewise_svd(_transform_domain(A, T))]
    smax = max((float(s[0]) for s in spectra if s.size), default=0.0)
    return np.array([numerical_rank(s, tol, reference=smax) for s in spectra], dtype=int)


def star_q_rank(A: np.ndarray, T: Transform, tol: float = DEFAULT_RANK_TOL) -> int:
    """Projected rank: the largest transform-domain frontal-slice rank."""
    ranks = star_q_multirank(A, T, tol)
    return int(ranks.max()) if ranks.size else 0


@dataclass(frozen=True, eq=False)
class TsvdqIIFactors:
    """Variably truncated transform-domain factors.

    ``U[i]`` is ``n1 x rho[i]``, ``s[i]`` has length ``rho[i]`` and ``V[i]`` is
    ``n2 x rho[i]``. ``kappa = sum(rho)`` is the implicit rank.
    """

    U: list
    s: list
    V: list
    rho: np.ndarray
    gamma: float
    transform: Transform
    tail_energy: np.ndarray

    @property
    def kappa(self) -> int:
        return int(np.sum(self.rho))

    @property
    def p(self) -> int:
        return self.transform.p


def tsvdq2(A: np.ndarray, T: Transform, gamma: float, tol: float = DEFAULT_RANK_TOL) -> TsvdqIIFactors:
    """Projected SVD truncated by global energy level ``gamma`` in (0, 1].

    All transform-domain singular values are sorted together in descending
    order (ties broken by slice index, then position within the slice). The
    shortest prefix whose squared sum reaches ``gamma`` times the
    transform-domain energy is kept, and each slice keeps those of its own
    values that fall inside the prefix. Values below ``tol`` times the
    global maximum are treated as zero.
    """
    if not 0 < gamma <= 1:
        raise ValueError(f"energy level gamma={gamma} must lie in (0, 1]")
    Ahat = _transform_domain(A, T)
    slices = facewise_svd(Ahat)
    p = len(slices)
    smax = max((float(r.s[0]) for r in slices if r.s.size), default=0.0)

    vals, slice_idx, pos_idx = [], [], []
    for i, r in enumerate(slices):
        keep = r.s > tol * smax if smax > 0 else np.zeros(r.s.shape, dtype=bool)
        n = int(np.count_nonzero(keep))
        vals.append(r.s[:n])
        slice_idx.append(np.full(n, i))
        pos_idx.append(np.arange(n))
    vals = np.concatenate(vals) if vals else np.zeros(0)
    slice_idx = np.concatenate(slice_idx).astype(int) if p else np.zeros(0, dtype=int)
    pos_idx = np.concatenate(pos_idx).astype(int) if p else np.zeros(0, dtype=int)

    order = np.lexsort((pos_idx, slice_idx, -vals))
    energy = vals[order] ** 2
    total = float(np.sum(energy))
    if total > 0:
        frac = np.cumsum(energy) / total
        hits = np.flatnonzero(frac >= gamma - _ENERGY_SLACK)
        K = int(hits[0]) + 1 if hits.size else energy.size
    else:
        K = 0

    rho = np.bincount(slice_idx[order[:K]], minlength=p).astype(int)
    Us, ss, Vs, tail = [], [], [], np.empty(p)
    for i, r in enumerate(slices):
        ri = rho[i]
        Us.append(r.U[:, :ri].copy())
        ss.append(r.s[:ri].copy())
        Vs.append(r.V[:, :ri].copy())
        tail[i] = float(np.sum(r.s[ri:] ** 2))
    return TsvdqIIFactors(Us, ss, Vs, rho, float(gamma), T, tail)


def tsvdq2_reconstruct(F: TsvdqIIFactors) -> np.ndarray:
    n1 = F.U[0].shape[0]
    n2 = F.V[0].shape[0]
    Ahat = np.empty((n1, n2, F.p))
    for i in range(F.p):
        Ahat[:, :, i] = (F.U[i] * F.s[i]) @ F.V[i].T
    return mode3_product(Ahat, F.transform.Q)


def tsvdq2_error(A: np.ndarray, F: TsvdqIIFactors) -> ErrorParts:
    total = float(np.linalg.norm(A - tsvdq2_reconstruct(F)))
    ey = math.sqrt(float(np.sum(F.tail_energy)))
    return ErrorParts(total, ey, projection_error(A, F.transform))


def energy_for_truncation(A: np.ndarray, F: TsvdqFactors) -> float:
    """``||A_k x_3 Q^T||^2 / ||A x_3 Q^T||^2``, the energy level at which
    :func:`tsvdq2` is guaranteed to do no worse than the truncation in ``F``."""
    kept = float(np.sum(F.s ** 2))
    total = kept + float(np.sum(F.tail_energy))
    return kept / total if total > 0 else 1.0


@dataclass(frozen=True, eq=False)
class HosvdFactors:
    """Truncated Tucker form ``A ~ G x_1 U1 x_2 U2 x_3 U3``."""

    G: np.ndarray
    U1: np.ndarray
    U2: np.ndarray
    U3: np.ndarray

    @property
    def ranks(self) -> tuple[int, int, int]:
        return self.G.shape


def _leading_left_vectors(A: np.ndarray, mode: int, k: int) -> np.ndarray:
    Am = mode_unfold(A, mode)
    r = min(Am.shape)
    if k <= r:
        return truncated_svd(Am, k).U
    U = svd(Am).U
    return np.hstack([U, orthonormal_completion(U, k - r)])


def hosvd(A: np.ndarray, ranks) -> HosvdFactors:
    """Truncated (non-sequential) HOSVD with multilinear rank ``(k1, k2, k3)``."""
    ks = tuple(int(k) for k in ranks)
    if len(ks) != 3:
        raise ValueError("HOSVD needs three truncation ranks")
    for mode, (k, n) in enumerate(zip(ks, A.shape), start=1):
        if not 1 <= k <= n:
            raise ValueError(f"mode-{mode} rank {k} must lie in [1, {n}]")
    U1, U2, U3 = (_leading_left_vectors(A, m, k) for m, k in zip((1, 2, 3), ks))
    G = mode_product(mode_product(mode_product(A, U1.T, 1), U2.T, 2), U3.T, 3)
    return HosvdFactors(G, U1, U2, U3)


def hosvd_reconstruct(F: HosvdFactors) -> np.ndarray:
    return mode_product(mode_product(mode_product(F.G, F.U1, 1), F.U2, 2), F.U3, 3)


def matrix_svd_baseline(A: np.ndarray, k: int) -> tuple[SvdResult, float]:
    """Rank-``k`` SVD of the ``n1*n3 x n2`` matrix of vertically stacked
    frontal slices, and its Frobenius reconstruction error."""
    n1, n2, n3 = A.shape
    Amat = np.transpose(A, (2, 0, 1)).reshape(n1 * n3, n2)
    F = truncated_svd(Amat, k)
    return F, float(np.linalg.norm(Amat - F.reconstruct()))


def _tsvdq_storage(n, k: int, p: int) -> int:
    n1, n2, n3 = n
    return k * (n1 + n2) * p + n3 * p


def hosvd_matched_truncation(n, k: int, p: int, variant: str = "full") -> int | None:
    """Largest HOSVD truncation ``k2`` whose storage does not exceed that of
    the rank-``k`` projected SVD with ``p`` slices (transform included).

    ``variant="full"`` uses multilinear rank ``(n1, k2, p)`` and
    ``variant="square"`` uses ``(k2, k2, p)``. Returns ``None`` when no
    positive ``k2`` is feasible. ``k2`` is capped at the largest rank the
    variant admits.
    """
    n1, n2, n3 = (int(x) for x in n)
    budget = _tsvdq_storage((n1, n2, n3), k, p) - n3 * p
    if variant == "full":
        num = budget - n1 * n1
        if num <= 0:
            return None
        k2 = num // (n1 * p + n2)
        cap = n2
    elif variant == "square":
        # largest integer k2 with p k2^2 + (n1 + n2) k2 <= budget
        b = n1 + n2
        k2 = int((-b + math.sqrt(b * b + 4 * p * budget)) // (2 * p))
        while k2 > 0 and p * k2 * k2 + b * k2 > budget:
            k2 -= 1
        while p * (k2 + 1) ** 2 + b * (k2 + 1) <= budget:
            k2 += 1
        cap = min(n1, n2)
    else:
        raise ValueError(f"unknown HOSVD variant {variant!r}")
    if k2 < 1:
        return None
    return min(int(k2), cap)
