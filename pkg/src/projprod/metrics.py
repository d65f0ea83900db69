"""Relative error, storage accounting and compression ratios.

Storage is counted in stored real scalars, not bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateInputError
from .transforms import TransformKind

CSV_HEADER = ("method", "transform", "k", "p", "gamma", "kappa", "re", "st_factors", "st_transform", "cr")


def relative_error(A: np.ndarray, Ahat: np.ndarray) -> float:
    """``||A - Ahat||_F / ||A||_F``."""
    ref = float(np.linalg.norm(np.ravel(A)))
    if ref == 0:
        raise DegenerateInputError("relative error is undefined for a zero reference tensor")
    return float(np.linalg.norm(np.ravel(A) - np.ravel(Ahat))) / ref


@dataclass(frozen=True)
class StorageCount:
    factors: int
    transform: int = 0

    @property
    def total(self) -> int:
        return self.factors + self.transform


def _transform_cost(n3: int, p: int, kind) -> int:
    return 0 if TransformKind(kind) is TransformKind.IDENTITY else n3 * p


def raw_storage(n) -> int:
    return math.prod(int(x) for x in n)


def storage_tsvdq(n, k: int, p: int, transform_kind) -> StorageCount:
    """``n1 k p + k n2 p`` factor entries plus ``n3 p`` for a non-identity ``Q``."""
    n1, n2, n3 = (int(x) for x in n)
    if k < 1 or p < 1:
        raise ValueError("storage_tsvdq needs k >= 1 and p >= 1")
    return StorageCount(n1 * k * p + k * n2 * p, _transform_cost(n3, p, transform_kind))


def storage_tsvdq2(n, kappa: int, p: int, transform_kind) -> StorageCount:
    """``kappa (n1 + n2)`` factor entries plus the transform."""
    n1, n2, n3 = (int(x) for x in n)
    if kappa < 0:
        raise ValueError("implicit rank must be nonnegative")
    return StorageCount(int(kappa) * (n1 + n2), _transform_cost(n3, p, transform_kind))


def storage_hosvd(n, ranks) -> StorageCount:
    n1, n2, n3 = (int(x) for x in n)
    k1, k2, k3 = (int(x) for x in ranks)
    return StorageCount(k1 * k2 * k3 + n1 * k1 + n2 * k2 + n3 * k3)


def storage_matrix_svd(n, k: int) -> StorageCount:
    n1, n2, n3 = (int(x) for x in n)
    return StorageCount(n1 * n3 * k + k * n2)


def compression_ratio_exact(n, storage: StorageCount) -> Fraction:
    return Fraction(raw_storage(n), storage.total)


@dataclass
class CompressionReport:
    """One row of a compression experiment."""

    method: str
    transform: str
    relative_error: float
    storage: StorageCount
    dims: tuple
    k: int | str | None = None
    p: int | None = None
    gamma: float | None = None
    kappa: int | None = None
    multirank: tuple | None = field(default=None, repr=False)

    @property
    def compression_ratio(self) -> float:
        return float(compression_ratio_exact(self.dims, self.storage))

    def csv_row(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return repr(x)
            return str(x)

        return [
            self.method,
            self.transform,
            fmt(self.k),
            fmt(self.p),
            fmt(self.gamma),
            fmt(self.kappa),
            fmt(self.relative_error),
            str(self.storage.factors),
            str(self.storage.transform),
            fmt(self.compression_ratio),
        ]
