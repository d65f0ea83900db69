import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projprod.errors import DegenerateInputError, NumericError
from projprod.matrix_kernels import (
    jacobi_eigvalsh,
    numerical_rank,
    orthonormal_completion,
    orthonormality_defect,
    orthonormalize,
    svd,
    truncated_svd,
)

R2 = np.sqrt(2.0)


def test_svd_rank_one_slice():
    U, s, V = svd([[R2, 0], [0, 0]])
    np.testing.assert_allclose(s, [R2, 0], atol=1e-15)


def test_svd_identity():
    np.testing.assert_allclose(svd(np.eye(3)).s, [1, 1, 1])


def test_svd_against_jacobi_oracle(rng):
    A = rng.standard_normal((5, 4))
    s = svd(A).s
    lam = jacobi_eigvalsh(A.T @ A)
    np.testing.assert_allclose(s ** 2, lam, rtol=1e-9)


def test_jacobi_oracle_matches_known_spectrum(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    lam = np.array([5.0, 3.0, 2.5, 1.0, 0.1, -2.0])
    np.testing.assert_allclose(jacobi_eigvalsh(Q @ np.diag(lam) @ Q.T), lam, atol=1e-12)
    with pytest.raises(ValueError):
        jacobi_eigvalsh(np.zeros((2, 3)))


def test_svd_rejects_non_finite():
    with pytest.raises(NumericError):
        svd([[1.0, np.nan]])
    with pytest.raises(NumericError):
        svd([[np.inf]])


def test_svd_sign_convention(rng):
    U, s, V = svd(rng.standard_normal((7, 4)))
    for j in range(U.shape[1]):
        assert U[np.argmax(np.abs(U[:, j])), j] > 0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_svd_invariants(m, n, seed):
    A = np.random.default_rng(seed).standard_normal((m, n))
    U, s, V = svd(A)
    r = min(m, n)
    assert U.shape == (m, r) and V.shape == (n, r) and s.shape == (r,)
    assert np.all(s >= 0) and np.all(np.diff(s) <= 0)
    assert orthonormality_defect(U) <= 1e-10 * r
    assert orthonormality_defect(V) <= 1e-10 * r
    assert np.linalg.norm(A - (U * s) @ V.T) <= 1e-10 * np.linalg.norm(A)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_svd_gram_oracle(m, n, seed):
    A = np.random.default_rng(seed).standard_normal((m, n))
    s = svd(A).s
    G = A.T @ A if n <= m else A @ A.T
    np.testing.assert_allclose(s ** 2, jacobi_eigvalsh(G)[: s.size], rtol=1e-9)


def test_truncated_examples():
    T = truncated_svd([[R2, 0], [0, 0]], 1)
    np.testing.assert_allclose(T.reconstruct(), [[R2, 0], [0, 0]], atol=1e-15)
    T = truncated_svd(np.diag([3.0, 2.0, 1.0]), 2)
    assert np.linalg.norm(np.diag([3.0, 2, 1]) - T.reconstruct()) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_truncated_tail_energy(rng):
    for _ in range(50):
        m, n = rng.integers(1, 10, size=2)
        A = rng.standard_normal((m, n))
        s = svd(A).s
        for k in range(1, min(m, n) + 1):
            err2 = np.linalg.norm(A - truncated_svd(A, k).reconstruct()) ** 2
            assert err2 == pytest.approx(np.sum(s[k:] ** 2), rel=1e-9, abs=1e-12 * np.sum(s ** 2))


@pytest.mark.parametrize("k", [0, 3])
def test_truncated_range(k):
    with pytest.raises(ValueError):
        truncated_svd(np.eye(2), k)


def test_orthonormalize_examples(rng):
    Q0 = np.eye(4)[:, :2]
    np.testing.assert_allclose(orthonormalize(Q0), Q0, atol=1e-12)
    np.testing.assert_allclose(orthonormalize([[2.0], [0.0]]), [[1.0], [0.0]])
    G = rng.standard_normal((6, 3))
    Q = orthonormalize(G)
    assert orthonormality_defect(Q) <= 1e-10
    # same span: projecting G onto span(Q) loses nothing
    assert np.linalg.norm(G - Q @ (Q.T @ G)) <= 1e-12 * np.linalg.norm(G)
    for j in range(3):
        nz = np.flatnonzero(np.abs(Q[:, j]) > 1e-14)
        assert Q[nz[0], j] > 0


def test_orthonormalize_rank_deficient():
    with pytest.raises(DegenerateInputError):
        orthonormalize([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(DegenerateInputError):
        orthonormalize(np.ones((2, 3)))


def test_orthonormal_completion(rng):
    Q = orthonormalize(rng.standard_normal((6, 2)))
    C = orthonormal_completion(Q)
    assert C.shape == (6, 4)
    full = np.hstack([Q, C])
    assert orthonormality_defect(full) <= 1e-12
    assert orthonormal_completion(Q, 1).shape == (6, 1)
    assert orthonormal_completion(np.eye(3)).shape == (3, 0)
    with pytest.raises(ValueError):
        orthonormal_completion(Q, 5)


def test_numerical_rank():
    assert numerical_rank([3, 2, 1e-15], 1e-12) == 2
    assert numerical_rank([0, 0], 1e-3) == 0
    assert numerical_rank([R2, 0], 1e-12) == 1
    assert numerical_rank([], 1e-12) == 0
    assert numerical_rank([1e-13], 1e-12, reference=1.0) == 0
