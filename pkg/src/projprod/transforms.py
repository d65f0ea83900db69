"""Transformation matrices with orthonormal columns.

A :class:`Transform` wraps an ``n3 x p`` matrix ``Q`` with ``Q^T Q = I_p``.
Moving a tensor to the transform domain is ``A x_3 Q^T``; moving back is
``x_3 Q``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError
from .matrix_kernels import orthonormal_completion, orthonormalize, svd
from .tensor_core import mode3_unfold

STIEFEL_TOL = 1e-10


class TransformKind(str, enum.Enum):
    IDENTITY = "identity"
    RANDOM = "random"
    DCT = "dct"
    DATA = "data"
    HAAR = "haar"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class Transform:
    """An ``n3 x p`` matrix with orthonormal columns plus provenance.

    ``scale`` is the nonzero multiple ``c`` of the scaled transform
    ``W = c Q``. It is only consulted by the products in
    :mod:`projprod.star_products`; ``Q`` itself always has unit columns.
    ``completed`` marks a data-dependent transform whose trailing columns
    were padded by an orthonormal completion.
    """

    Q: np.ndarray
    kind: TransformKind = TransformKind.CUSTOM
    seed: int | None = None
    scale: float = 1.0
    completed: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        Q = np.array(self.Q, dtype=np.float64)
        if Q.ndim != 2:
            raise ShapeError(f"transform matrix must be 2-D, got shape {Q.shape}")
        n3, p = Q.shape
        if not 1 <= p <= n3:
            raise ValueError(f"projection dimension p={p} must lie in [1, {n3}]")
        if self.scale == 0 or not np.isfinite(self.scale):
            raise ValueError("transform scale must be finite and nonzero")
        defect = np.linalg.norm(Q.T @ Q - np.eye(p))
        if defect > STIEFEL_TOL * p:
            raise ValueError(f"columns of Q are not orthonormal (defect {defect:.3e})")
        Q.setflags(write=False)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "kind", TransformKind(self.kind))

    @property
    def n3(self) -> int:
        return self.Q.shape[0]

    @property
    def p(self) -> int:
        return self.Q.shape[1]

    def truncate(self, p: int) -> "Transform":
        """The same transform restricted to its first ``p`` columns."""
        return Transform(
            self.Q[:, :p], self.kind, self.seed, self.scale,
            self.completed and p > self.meta.get("rank", p), dict(self.meta),
        )

    def with_scale(self, c: float) -> "Transform":
        return Transform(self.Q, self.kind, self.seed, float(c), self.completed, dict(self.meta))

    def __repr__(self) -> str:
        return f"Transform(kind={self.kind.value}, n3={self.n3}, p={self.p}, seed={self.seed}, scale={self.scale})"


def _check_p(n3: int, p: int) -> None:
    if not 1 <= p <= n3:
        raise ValueError(f"projection dimension p={p} must lie in [1, {n3}]")


def identity_transform(n3: int, p: int) -> Transform:
    _check_p(n3, p)
    return Transform(np.eye(n3)[:, :p], TransformKind.IDENTITY)


def random_orthogonal_transform(n3: int, p: int, seed: int = 0) -> Transform:
    """First ``p`` columns of an orthonormalized Gaussian ``n3 x n3`` matrix.

    Gaussians are drawn with numpy's Philox4x32 counter-based bit generator
    keyed by ``seed``, so the matrix is reproducible across platforms.
    """
    _check_p(n3, p)
    rng = np.random.Generator(np.random.Philox(seed))
    G = rng.standard_normal((n3, n3))
    W = orthonormalize(G)
    return Transform(W[:, :p], TransformKind.RANDOM, seed=seed)


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix ``C`` (rows are cosine modes), as MATLAB's
    ``dctmtx``."""
    j = np.arange(n)[:, None]
    t = np.arange(n)[None, :]
    C = np.cos(np.pi * (2 * t + 1) * j / (2 * n))
    C[0, :] *= np.sqrt(1.0 / n)
    C[1:, :] *= np.sqrt(2.0 / n)
    return C


def dct_transform(n3: int, p: int) -> Transform:
    """``Q = C[:p, :].T`` for the orthonormal DCT-II matrix ``C``."""
    _check_p(n3, p)
    return Transform(dct_matrix(n3)[:p, :].T, TransformKind.DCT)


def mode3_left_singular_vectors(A: np.ndarray) -> np.ndarray:
    """``U3`` from the SVD of the mode-3 unfolding (thin: ``min(n3, n1*n2)``
    columns)."""
    return svd(mode3_unfold(A)).U


def data_dependent_transform(A: np.ndarray, p: int) -> Transform:
    """Leading ``p`` left singular vectors of the mode-3 unfolding of ``A``.

    When ``p`` exceeds the number of computed singular vectors (possible
    only if ``n3 > n1*n2``) the basis is padded with an orthonormal
    completion and the result is flagged ``completed=True``.
    """
    n3 = A.shape[2]
    _check_p(n3, p)
    U3 = mode3_left_singular_vectors(A)
    r = U3.shape[1]
    if p <= r:
        return Transform(U3[:, :p], TransformKind.DATA, meta={"rank": r})
    extra = orthonormal_completion(U3, p - r)
    return Transform(np.hstack([U3, extra]), TransformKind.DATA, completed=True, meta={"rank": r})


def haar_matrix(n: int) -> np.ndarray:
    """Haar wavelet matrices ``H2`` and ``H4``."""
    r2 = np.sqrt(2.0)
    if n == 2:
        return np.array([[1.0, 1.0], [1.0, -1.0]]) / r2
    if n == 4:
        return 0.5 * np.array(
            [
                [1.0, 1.0, 1.0, 1.0],
                [1.0, 1.0, -1.0, -1.0],
                [r2, -r2, 0.0, 0.0],
                [0.0, 0.0, r2, -r2],
            ]
        )
    raise ValueError(f"Haar matrix available only for n=2 or n=4, got {n}")


def haar_transform(n3: int, p: int) -> Transform:
    """``Q = M[:p, :].T`` with ``M = H^T``, i.e. the first ``p`` columns of ``H``."""
    H = haar_matrix(n3)
    _check_p(n3, p)
    return Transform(H[:, :p], TransformKind.HAAR)


def haar_complement(n3: int, p: int) -> np.ndarray:
    """Remaining columns ``H[:, p:]`` completing :func:`haar_transform`."""
    H = haar_matrix(n3)
    _check_p(n3, p)
    return H[:, p:].copy()


def make_transform(kind, n3: int, p: int, *, A: np.ndarray | None = None, seed: int = 0) -> Transform:
    """Construct a transform by kind name (``identity``, ``random``, ``dct``,
    ``data``, ``haar``)."""
    kind = TransformKind(kind)
    if kind is TransformKind.IDENTITY:
        return identity_transform(n3, p)
    if kind is TransformKind.RANDOM:
        return random_orthogonal_transform(n3, p, seed)
    if kind is TransformKind.DCT:
        return dct_transform(n3, p)
    if kind is TransformKind.HAAR:
        return haar_transform(n3, p)
    if kind is TransformKind.DATA:
        if A is None:
            raise ValueError("the data-dependent transform needs the tensor A")
        return data_dependent_transform(A, p)
    raise ValueError(f"cannot construct a transform of kind {kind.value!r} by name")


def projection_error(A: np.ndarray, T: Transform) -> float:
    """``||A x_3 (I - Q Q^T)||_F``, the part of ``A`` outside ``span(Q)``."""
    Q = T.Q
    if A.ndim != 3 or A.shape[2] != Q.shape[0]:
        raise ShapeError(f"tensor {A.shape} and transform with n3={Q.shape[0]} do not match")
    A3 = mode3_unfold(A)
    return float(np.linalg.norm(A3 - Q @ (Q.T @ A3)))
