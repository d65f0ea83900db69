"""The star-M product and the projected (star-Q') product.

For a transform ``W = c Q`` with ``Q`` an ``n3 x p`` matrix with orthonormal
columns, the projected product is

    A *Q' B = [(A x_3 W^T) facewise (B x_3 W^T)] x_3 pinv(W^T)

which equals ``c (A *Q' B)`` computed with the unit-scale ``Q``. Moving to
the transform domain is :func:`to_transform_domain`, moving back is
:func:`from_transform_domain`; every operation here is built from those two
maps, so identities, transposes and products stay consistent for any
scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ShapeError
from .matrix_kernels import DEFAULT_RANK_TOL, numerical_rank, orthonormal_completion, svd
from .tensor_core import facewise_product, mode3_product
from .transforms import Transform

__all__ = [
    "StarContext",
    "as_context",
    "to_transform_domain",
    "from_transform_domain",
    "star_m_product",
    "star_q_product",
    "star_q_identity",
    "star_q_transpose",
    "is_star_q_unitary",
    "is_f_diagonal",
    "split_identity_check",
    "transform_annihilation_check",
]


@dataclass(frozen=True, eq=False)
class StarContext:
    """A transform plus, optionally, an orthonormal basis ``Q_perp`` of the
    complement of ``span(Q)``, so that ``M = [Q Q_perp]^T`` is orthogonal."""

    transform: Transform
    complement: np.ndarray | None = None

    def __post_init__(self):
        if self.complement is None:
            return
        Q = self.transform.Q
        C = np.array(self.complement, dtype=np.float64).reshape(Q.shape[0], -1)
        n3 = Q.shape[0]
        if C.shape[1] != n3 - Q.shape[1]:
            raise ShapeError(f"complement must have {n3 - Q.shape[1]} columns, got {C.shape[1]}")
        defect = np.linalg.norm(Q @ Q.T + C @ C.T - np.eye(n3))
        if defect > 1e-10 * n3:
            raise ValueError(f"[Q Q_perp] is not orthogonal (defect {defect:.3e})")
        C.setflags(write=False)
        object.__setattr__(self, "complement", C)

    @property
    def Q(self) -> np.ndarray:
        return self.transform.Q

    @property
    def scale(self) -> float:
        return self.transform.scale

    @property
    def p(self) -> int:
        return self.transform.p

    @property
    def n3(self) -> int:
        return self.transform.n3

    def with_complement(self) -> "StarContext":
        """This context, materializing a complement if none was given."""
        if self.complement is not None:
            return self
        return StarContext(self.transform, orthonormal_completion(self.transform.Q))

    def complement_context(self) -> "StarContext":
        """Context for the complementary product ``*Q_perp'`` (unit scale).

        Returns ``None`` when ``p = n3`` and the complement is empty.
        """
        ctx = self.with_complement()
        if ctx.complement.shape[1] == 0:
            return None
        return StarContext(Transform(ctx.complement), self.transform.Q)

    def full_matrix(self) -> np.ndarray:
        """``M = [Q Q_perp]^T``."""
        ctx = self.with_complement()
        return np.hstack([ctx.Q, ctx.complement]).T


def as_context(ctx) -> StarContext:
    if isinstance(ctx, StarContext):
        return ctx
    if isinstance(ctx, Transform):
        return StarContext(ctx)
    raise TypeError(f"expected a StarContext or Transform, got {type(ctx).__name__}")


def _check_n3(A: np.ndarray, ctx: StarContext) -> None:
    if A.ndim != 3 or A.shape[2] != ctx.n3:
        raise ShapeError(f"tensor of shape {A.shape} does not match transform with n3={ctx.n3}")


def to_transform_domain(A: np.ndarray, ctx) -> np.ndarray:
    """``A x_3 W^T`` with ``W = c Q``; the result has ``p`` frontal slices."""
    ctx = as_context(ctx)
    _check_n3(A, ctx)
    return mode3_product(A, ctx.scale * ctx.Q.T)


def from_transform_domain(Ahat: np.ndarray, ctx) -> np.ndarray:
    """``Ahat x_3 pinv(W^T) = Ahat x_3 (Q / c)``."""
    ctx = as_context(ctx)
    if Ahat.ndim != 3 or Ahat.shape[2] != ctx.p:
        raise ShapeError(f"transform-domain tensor {Ahat.shape} needs {ctx.p} frontal slices")
    return mode3_product(Ahat, ctx.Q / ctx.scale)


def _inverse(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"star-M transform must be square, got {M.shape}")
    U, s, V = svd(M)
    if numerical_rank(s, DEFAULT_RANK_TOL) < M.shape[0]:
        raise DegenerateInputError("star-M transform matrix is singular")
    return (V / s) @ U.T


def star_m_product(A: np.ndarray, B: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``A *M B = ((A x_3 M) facewise (B x_3 M)) x_3 M^{-1}``."""
    M = np.asarray(M, dtype=np.float64)
    Minv = _inverse(M)
    if A.ndim != 3 or B.ndim != 3 or A.shape[2] != M.shape[0] or B.shape[2] != M.shape[0]:
        raise ShapeError(f"operands {A.shape}, {B.shape} do not match a {M.shape} transform")
    C = facewise_product(mode3_product(A, M), mode3_product(B, M))
    return mode3_product(C, Minv)


def star_q_product(A: np.ndarray, B: np.ndarray, ctx) -> np.ndarray:
    """Projected product ``[(A x_3 Q^T) facewise (B x_3 Q^T)] x_3 Q``
    (times the transform scale ``c``)."""
    ctx = as_context(ctx)
    _check_n3(A, ctx)
    _check_n3(B, ctx)
    if A.shape[1] != B.shape[0]:
        raise ShapeError(f"inner dimensions of {A.shape} and {B.shape} differ")
    Chat = facewise_product(to_transform_domain(A, ctx), to_transform_domain(B, ctx))
    return from_transform_domain(Chat, ctx)


def star_q_identity(m: int, ctx) -> np.ndarray:
    """The ``m x m x n3`` tensor whose transform-domain slices are all ``I_m``."""
    ctx = as_context(ctx)
    if m < 1:
        raise ValueError("identity size must be positive")
    Ihat = np.repeat(np.eye(m)[:, :, None], ctx.p, axis=2)
    return from_transform_domain(Ihat, ctx)


def star_q_transpose(A: np.ndarray, ctx) -> np.ndarray:
    """Transpose every frontal slice in the transform domain and map back."""
    ctx = as_context(ctx)
    Ahat = to_transform_domain(A, ctx)
    return from_transform_domain(np.transpose(Ahat, (1, 0, 2)), ctx)


def is_star_q_unitary(U: np.ndarray, ctx, tol: float = 1e-8) -> bool:
    """True when ``U^T *Q' U`` and ``U *Q' U^T`` both match the identity to
    within ``tol * sqrt(m p)`` in Frobenius norm."""
    ctx = as_context(ctx)
    if U.ndim != 3 or U.shape[0] != U.shape[1]:
        return False
    m = U.shape[0]
    I = star_q_identity(m, ctx)
    Ut = star_q_transpose(U, ctx)
    bound = tol * np.sqrt(m * ctx.p)
    left = np.linalg.norm(star_q_product(Ut, U, ctx) - I)
    right = np.linalg.norm(star_q_product(U, Ut, ctx) - I)
    return bool(left <= bound and right <= bound)


def is_f_diagonal(D: np.ndarray, tol: float = 1e-12) -> bool:
    """True when every off-diagonal tube has norm at most ``tol * ||D||_F``."""
    D = np.asarray(D, dtype=np.float64)
    mask = np.ones(D.shape[:2], dtype=bool)
    q = min(D.shape[0], D.shape[1])
    mask[np.arange(q), np.arange(q)] = False
    tube_norms = np.linalg.norm(D, axis=2)[mask]
    if tube_norms.size == 0:
        return True
    return bool(np.max(tube_norms) <= tol * np.linalg.norm(D))


def _require_complement(ctx) -> StarContext:
    ctx = as_context(ctx)
    if ctx.complement is None:
        raise ValueError("this check needs a StarContext with an explicit complement")
    return ctx


def split_identity_check(A: np.ndarray, B: np.ndarray, ctx) -> float:
    """``||A *M B - (A *Q' B + A *Q_perp' B)||_F`` with ``M = [Q Q_perp]^T``.

    The context scale is ignored here; both products use unit columns.
    """
    ctx = _require_complement(ctx)
    unit = StarContext(ctx.transform.with_scale(1.0), ctx.complement)
    lhs = star_m_product(A, B, unit.full_matrix())
    rhs = star_q_product(A, B, unit)
    comp = unit.complement_context()
    if comp is not None:
        rhs = rhs + star_q_product(A, B, comp)
    return float(np.linalg.norm(lhs - rhs))


def transform_annihilation_check(A: np.ndarray, B: np.ndarray, ctx) -> float:
    """``||(A *Q' B) x_3 Q_perp^T||_F``; zero up to rounding."""
    ctx = _require_complement(ctx)
    C = star_q_product(A, B, ctx)
    if ctx.complement.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(mode3_product(C, ctx.complement.T)))
