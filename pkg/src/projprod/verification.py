"""Machine checks of the worked examples and theorems on seeded instances.

Each ``check_*`` function returns a :class:`CheckResult` whose ``residual``
is the worst value observed; ``passed`` compares it with ``tolerance``.
:func:`run_checks` runs a selection and is what ``projprod verify`` calls.
"""

from __future__ import annotations

import math
import os
import tempfile
import time
from dataclasses import dataclass

import numpy as np

from . import decompositions as dec
from .data_io import SyntheticSpec, gen_spectral_cube, read_pt3, write_pt3
from .matrix_kernels import jacobi_eigvalsh, orthonormality_defect, svd
from .metrics import relative_error
from .star_products import (
    StarContext,
    star_m_product,
    star_q_identity,
    star_q_product,
    star_q_transpose,
    split_identity_check,
    transform_annihilation_check,
)
from .tensor_core import mode3_product, mode3_unfold
from .transforms import (
    Transform,
    TransformKind,
    data_dependent_transform,
    haar_complement,
    haar_matrix,
    haar_transform,
    identity_transform,
    make_transform,
    projection_error,
    random_orthogonal_transform,
)

KINDS = (TransformKind.IDENTITY, TransformKind.RANDOM, TransformKind.DCT, TransformKind.DATA)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    elapsed: float = 0.0
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (
            f"{status} {self.name:<20s} residual={self.residual:.3e} "
            f"tol={self.tolerance:.1e} time={self.elapsed:.3f}s{extra}"
        )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def random_instances(count: int, seed: int, max_dims=(8, 7, 6)):
    """``count`` seeded Gaussian tensors with each dim drawn from
    ``1..max_dims[m]``."""
    rng = _rng(seed)
    for _ in range(count):
        dims = tuple(int(rng.integers(1, d + 1)) for d in max_dims)
        yield rng.standard_normal(dims)


def transform_for(kind, A: np.ndarray, p: int, seed: int) -> Transform:
    return make_transform(kind, A.shape[2], p, A=A, seed=seed)


def _result(name, residual, tol, t0, detail="", passed=None):
    ok = residual <= tol if passed is None else passed
    return CheckResult(name, bool(ok), float(residual), tol, time.perf_counter() - t0, detail)


# -- exact fixtures ------------------------------------------------------------

def haar_tube_values() -> dict[str, np.ndarray]:
    """The seven tube results of the 4-point Haar example."""
    a = np.array([2.0, 4.0, 6.0, 8.0]).reshape(1, 1, 4)
    b = np.array([1.0, -1.0, 1.0, 0.0]).reshape(1, 1, 4)
    ctx = StarContext(haar_transform(4, 2), haar_complement(4, 2))
    perp = ctx.complement_context()
    Q, Qp = ctx.Q, ctx.complement
    return {
        "a*M b": star_m_product(a, b, haar_matrix(4).T).ravel(),
        "a*Q b": star_q_product(a, b, ctx).ravel(),
        "a*Qperp b": star_q_product(a, b, perp).ravel(),
        "a x3 QQ^T": mode3_product(a, Q @ Q.T).ravel(),
        "b x3 QQ^T": mode3_product(b, Q @ Q.T).ravel(),
        "a x3 QpQp^T": mode3_product(a, Qp @ Qp.T).ravel(),
        "b x3 QpQp^T": mode3_product(b, Qp @ Qp.T).ravel(),
    }


HAAR_TUBE_EXPECTED = {
    "a*M b": [2, 4, 3, 8],
    "a*Q b": [3, 3, 3, 0],
    "a*Qperp b": [-1, 1, 0, 8],
    "a x3 QQ^T": [3, 3, 6, 0],
    "b x3 QQ^T": [0, 0, 1, 0],
    "a x3 QpQp^T": [-1, 1, 0, 8],
    "b x3 QpQp^T": [1, -1, 0, 0],
}


def check_haar_tubes(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    vals = haar_tube_values()
    worst = max(float(np.max(np.abs(vals[key] - np.array(exp, float)))) for key, exp in HAAR_TUBE_EXPECTED.items())
    return _result("appendix-a", worst, 1e-12, t0)


def counterexample_tensor() -> np.ndarray:
    A = np.zeros((2, 2, 2))
    A[:, :, 0] = np.eye(2)
    A[:, :, 1] = np.diag([1.0, -1.0])
    return A


def check_counterexample(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    A = counterexample_tensor()
    got = []
    for T, expect in ((data_dependent_transform(A, 1), (3.0, 1.0, 2.0)), (haar_transform(2, 1), (2.0, 0.0, 2.0))):
        e = dec.tsvdq_error(A, dec.tsvdq(A, T, 1))
        got.append(max(abs(e.total ** 2 - expect[0]), abs(e.eckart_young ** 2 - expect[1]), abs(e.projection ** 2 - expect[2])))
    return _result("counterexample", max(got), 1e-12, t0)


# -- randomized theorem checks ---------------------------------------------------

def check_svd_kernel(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    rng = _rng(seed + 101)
    worst = 0.0
    for _ in range(max(1, int(200 * scale))):
        m, n = (int(x) for x in rng.integers(1, 13, size=2))
        A = rng.standard_normal((m, n))
        U, s, V = svd(A)
        r = min(m, n)
        nrm = max(np.linalg.norm(A), 1e-300)
        worst = max(
            worst,
            np.linalg.norm(A - (U * s) @ V.T) / nrm,
            orthonormality_defect(U) / r,
            orthonormality_defect(V) / r,
            float(np.max(np.maximum(np.diff(s), 0.0), initial=0.0)) / nrm,
            float(max(0.0, -s.min())) / nrm,
        )
    kernel = worst
    oracle = 0.0
    for _ in range(max(1, int(200 * scale))):
        m, n = (int(x) for x in rng.integers(1, 7, size=2))
        A = rng.standard_normal((m, n))
        s = svd(A).s
        lam = jacobi_eigvalsh(A.T @ A if n <= m else A @ A.T)[: s.size]
        oracle = max(oracle, float(np.max(np.abs(s ** 2 - lam) / lam)))
    passed = kernel <= 1e-10 and oracle <= 1e-9
    return _result("svd-kernel", max(kernel / 1e-10, oracle / 1e-9), 1.0, t0,
                   f"kernel={kernel:.2e} gram_oracle={oracle:.2e}", passed)


def check_eckart_young(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    for idx, A in enumerate(random_instances(max(1, int(100 * scale)), seed + 1)):
        n1, n2, n3 = A.shape
        nrm2 = float(np.sum(A ** 2))
        for kind in KINDS:
            for p in range(1, n3 + 1):
                T = transform_for(kind, A, p, seed + idx)
                for k in range(1, min(n1, n2) + 1):
                    e = dec.tsvdq_error(A, dec.tsvdq(A, T, k))
                    worst = max(worst, abs(e.total ** 2 - (e.eckart_young ** 2 + e.projection ** 2)) / nrm2)
    return _result("eckart-young", worst, 1e-10, t0)


def check_tail_identity(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    for A in random_instances(max(1, int(100 * scale)), seed + 1):
        n3 = A.shape[2]
        sig = np.zeros(n3)
        sv = np.linalg.svd(mode3_unfold(A), compute_uv=False)
        sig[: sv.size] = sv
        nrm2 = float(np.sum(A ** 2))
        for p in range(1, n3 + 1):
            proj2 = projection_error(A, data_dependent_transform(A, p)) ** 2
            worst = max(worst, abs(proj2 - float(np.sum(sig[p:] ** 2))) / nrm2)
    return _result("tail-identity", worst, 1e-9, t0)


def check_optimal_projection(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    worst = -math.inf
    n_samples = max(1, int(50 * scale))
    for idx, A in enumerate(random_instances(max(1, int(100 * scale)), seed + 1)):
        n3 = A.shape[2]
        for p in range(1, n3 + 1):
            best = projection_error(A, data_dependent_transform(A, p))
            for r in range(n_samples):
                Qr = random_orthogonal_transform(n3, p, seed=10_000 * idx + 100 * p + r)
                worst = max(worst, best - projection_error(A, Qr))
    return _result("optimal-projection", worst, 1e-12, t0)


def check_hosvd_dominance(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    worst = -math.inf
    for A in random_instances(max(1, int(20 * scale)), seed + 2):
        n1, n2, n3 = A.shape
        q = min(n1, n2)
        for p in range(1, n3 + 1):
            T = data_dependent_transform(A, p)
            errs = {k: dec.tsvdq_error(A, dec.tsvdq(A, T, k)).total for k in range(1, q + 1)}
            for k1 in range(1, q + 1):
                for k2 in range(1, q + 1):
                    H = dec.hosvd_reconstruct(dec.hosvd(A, (k1, k2, p)))
                    worst = max(worst, errs[min(k1, k2)] - float(np.linalg.norm(A - H)))
    return _result("hosvd-dominance", worst, 1e-12, t0)


def check_svdii_dominance(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    worst = -math.inf
    kappa_ok = True
    for idx, A in enumerate(random_instances(max(1, int(50 * scale)), seed + 3)):
        n1, n2, n3 = A.shape
        nrm = float(np.linalg.norm(A))
        for kind in KINDS:
            for p in range(1, n3 + 1):
                T = transform_for(kind, A, p, seed + idx)
                for k in range(1, min(n1, n2) + 1):
                    F = dec.tsvdq(A, T, k)
                    gamma = dec.energy_for_truncation(A, F)
                    F2 = dec.tsvdq2(A, T, gamma)
                    re1 = float(np.linalg.norm(A - dec.tsvdq_reconstruct(F))) / nrm
                    re2 = float(np.linalg.norm(A - dec.tsvdq2_reconstruct(F2))) / nrm
                    worst = max(worst, re2 - re1)
                    kappa_ok &= F2.kappa <= k * p
    return _result("svdii-dominance", worst, 1e-12, t0, "" if kappa_ok else "kappa > k*p",
                   passed=worst <= 1e-12 and kappa_ok)


def _rel(x: np.ndarray, ref: float) -> float:
    return float(np.linalg.norm(x)) / max(ref, 1e-300)


def algebra_residuals(rng: np.random.Generator, kind, scale_c: float) -> dict[str, float]:
    """Residuals of the product identities on one random instance."""
    n1, m, n2, n3 = (int(x) for x in rng.integers(1, 6, size=4))
    n3 = max(n3, 2)
    p = int(rng.integers(1, n3 + 1))
    A = rng.standard_normal((n1, m, n3))
    B = rng.standard_normal((m, n2, n3))
    C = rng.standard_normal((n2, int(rng.integers(1, 5)), n3))
    a, b, c = (rng.standard_normal((1, 1, n3)) for _ in range(3))
    T = make_transform(kind, n3, p, A=A, seed=int(rng.integers(0, 2 ** 31)))
    ctx = StarContext(T).with_complement()
    Q = ctx.Q
    P = Q @ Q.T
    out = {}

    ab = star_q_product(a, b, ctx)
    out["commutativity"] = _rel(ab - star_q_product(b, a, ctx), np.linalg.norm(ab))
    abc = star_q_product(ab, c, ctx)
    out["assoc-tubes"] = _rel(abc - star_q_product(a, star_q_product(b, c, ctx), ctx), np.linalg.norm(abc))
    AB = star_q_product(A, B, ctx)
    ABC = star_q_product(AB, C, ctx)
    out["assoc-tensors"] = _rel(ABC - star_q_product(A, star_q_product(B, C, ctx), ctx), np.linalg.norm(ABC))
    apbc = star_q_product(a + b, c, ctx)
    out["distributivity"] = _rel(apbc - star_q_product(a, c, ctx) - star_q_product(b, c, ctx), np.linalg.norm(apbc))
    lhs = star_q_transpose(AB, ctx)
    rhs = star_q_product(star_q_transpose(B, ctx), star_q_transpose(A, ctx), ctx)
    out["transpose"] = _rel(lhs - rhs, np.linalg.norm(lhs))
    M = ctx.full_matrix()
    proj_form = star_m_product(mode3_product(A, P), mode3_product(B, P), M)
    out["colspace-form"] = _rel(AB - proj_form, np.linalg.norm(AB))
    ABm = star_m_product(A, B, M)
    out["split-sum"] = split_identity_check(A, B, ctx) / max(np.linalg.norm(ABm), 1e-300)
    out["annihilation"] = transform_annihilation_check(A, B, ctx) / max(np.linalg.norm(AB), 1e-300)
    out["starM-slices"] = _rel(mode3_product(ABm, Q.T) - mode3_product(AB, Q.T), np.linalg.norm(ABm))
    E = rng.standard_normal((m, m, n3))
    J = star_q_identity(m, ctx) + mode3_product(E, np.eye(n3) - P)
    JB = star_q_product(J, B, ctx)
    out["identity-null"] = _rel(JB - mode3_product(B, P), np.linalg.norm(B))
    Tc = T.with_scale(scale_c)
    ABc = star_q_product(A, B, Tc)
    out["scale-law"] = _rel(ABc - scale_c * AB, abs(scale_c) * np.linalg.norm(AB))
    return out


def check_algebra(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    rng = _rng(seed + 4)
    worst: dict[str, float] = {}
    for i in range(max(1, int(200 * scale))):
        kind = KINDS[i % len(KINDS)]
        c = (-2.0, 0.5, 3.0)[i % 3]
        for key, val in algebra_residuals(rng, kind, c).items():
            worst[key] = max(worst.get(key, 0.0), val)
    name, val = max(worst.items(), key=lambda kv: kv[1])
    return _result("algebra", val, 1e-10, t0, f"worst={name}")


def trend_errors(k: int = 5, seed: int = 7):
    """Relative errors on a 32 x 32 x 48 spectral cube with 3 signatures.

    Returns ``(re_data, re_identity, re_data_full)`` where the first two are
    indexed by ``p`` (dicts) and the last uses ``p = n3``.
    """
    A = gen_spectral_cube(SyntheticSpec("spectral-cube", (32, 32, 48), seed=seed, signatures=3))
    n3 = A.shape[2]
    U3 = data_dependent_transform(A, n3)
    full = relative_error(A, dec.tsvdq_reconstruct(dec.tsvdq(A, U3, k)))
    re_data, re_id = {}, {}
    for p in range(1, int(0.2 * n3) + 1):
        re_data[p] = relative_error(A, dec.tsvdq_reconstruct(dec.tsvdq(A, U3.truncate(p), k)))
        re_id[p] = relative_error(A, dec.tsvdq_reconstruct(dec.tsvdq(A, identity_transform(n3, p), k)))
    return re_data, re_id, full


def check_trend(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    re_data, re_id, full = trend_errors()
    hits = [p for p in sorted(re_data) if abs(re_data[p] - full) <= 0.01 * full]
    if not hits:
        return _result("trend", math.inf, 0.01, t0, "data-dependent never within 1%", passed=False)
    p = hits[0]
    ratio = re_id[p] / re_data[p]
    ok = ratio >= 2.0
    return _result("trend", abs(re_data[p] - full) / full, 0.01, t0,
                   f"p={p} identity/data={ratio:.2f}", passed=ok)


def check_pt3_roundtrip(seed: int = 0, scale: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    rng = _rng(seed + 5)
    mismatches = 0
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "x.pt3")
        for _ in range(max(1, int(1000 * scale))):
            dims = tuple(int(x) for x in rng.integers(1, 17, size=3))
            A = rng.standard_normal(dims)
            write_pt3(path, A)
            B = read_pt3(path)
            mismatches += int(B.shape != A.shape or A.tobytes() != np.ascontiguousarray(B).tobytes())
    return _result("pt3-roundtrip", mismatches, 0, t0)


CHECKS = {
    "appendix-a": check_haar_tubes,
    "counterexample": check_counterexample,
    "svd-kernel": check_svd_kernel,
    "eckart-young": check_eckart_young,
    "tail-identity": check_tail_identity,
    "optimal-projection": check_optimal_projection,
    "hosvd-dominance": check_hosvd_dominance,
    "svdii-dominance": check_svdii_dominance,
    "algebra": check_algebra,
    "trend": check_trend,
    "pt3-roundtrip": check_pt3_roundtrip,
}


def run_checks(names=None, seed: int = 0, scale: float = 1.0) -> list[CheckResult]:
    names = list(CHECKS) if not names else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    return [CHECKS[n](seed=seed, scale=scale) for n in names]
