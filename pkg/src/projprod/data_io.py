"""PT3 tensor files, CSV reports and synthetic test data.

PT3 layout (all integers little-endian)::

    offset  size  field
    0       4     magic  b"PT3\\0"
    4       4     version (u32) = 1
    8       1     dtype (u8)    = 1, float64 little-endian
    9       1     field (u8)    = 0, real
    10      2     padding, zero
    12      24    n1, n2, n3 (u64 each)
    36      ...   8*n1*n2*n3 bytes of payload, mode-1 fastest

A matrix is stored as a PT3 tensor with ``n3 = 1``.
"""

from __future__ import annotations

import csv
import enum
import os
import struct
import sys
from dataclasses import dataclass

import numpy as np

from .errors import FormatError
from .metrics import CSV_HEADER, CompressionReport

MAGIC = b"PT3\0"
VERSION = 1
DTYPE_F64 = 1
FIELD_REAL = 0
_HEADER = struct.Struct("<4sIBB2xQQQ")
HEADER_SIZE = _HEADER.size
_MAX_ELEMENTS = sys.maxsize // 8


def write_pt3(path, A: np.ndarray) -> None:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim == 2:
        A = A[:, :, None]
    if A.ndim != 3:
        raise ValueError(f"PT3 stores order-3 tensors, got shape {A.shape}")
    n1, n2, n3 = A.shape
    header = _HEADER.pack(MAGIC, VERSION, DTYPE_F64, FIELD_REAL, n1, n2, n3)
    payload = np.ravel(A, order="F").astype("<f8", copy=False).tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_pt3(path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read(HEADER_SIZE)
        if len(raw) < HEADER_SIZE:
            raise FormatError(f"{path}: file too short for a PT3 header")
        magic, version, dtype, fld, n1, n2, n3 = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise FormatError(f"{path}: unsupported PT3 version {version}")
        if dtype != DTYPE_F64 or fld != FIELD_REAL:
            raise FormatError(f"{path}: unsupported dtype/field ({dtype}, {fld})")
        count = n1 * n2 * n3
        if count > _MAX_ELEMENTS:
            raise FormatError(f"{path}: dims {(n1, n2, n3)} exceed the addressable payload size")
        payload = fh.read(8 * count + 1)
    if len(payload) != 8 * count:
        raise FormatError(f"{path}: payload has {len(payload)} bytes, expected {8 * count}")
    data = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    return data.reshape((n1, n2, n3), order="F")


def write_matrix_pt3(path, M: np.ndarray) -> None:
    write_pt3(path, np.asarray(M, dtype=np.float64)[:, :, None])


def read_matrix_pt3(path) -> np.ndarray:
    A = read_pt3(path)
    if A.shape[2] != 1:
        raise FormatError(f"{path}: expected a matrix (n3 = 1), got dims {A.shape}")
    return A[:, :, 0]


def write_reports(path, reports, append: bool = True) -> None:
    """Write reports to a CSV file, adding the header when the file is new."""
    exists = os.path.exists(path) and os.path.getsize(path) > 0
    mode = "a" if append and exists else "w"
    with open(path, mode, newline="") as fh:
        w = csv.writer(fh)
        if mode == "w":
            w.writerow(CSV_HEADER)
        for r in reports:
            w.writerow(r.csv_row())


def read_reports(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class SyntheticKind(str, enum.Enum):
    MOVING_SQUARE = "moving-square"
    SPECTRAL_CUBE = "spectral-cube"
    EXACT_RANK = "exact-rank"


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters for the synthetic generators.

    Only the fields relevant to ``kind`` are used: ``square_size`` and
    ``velocity`` for moving squares, ``signatures`` and ``smoothness`` for
    spectral cubes, ``rank``, ``p`` and ``transform_kind`` for exact-rank
    tensors.
    """

    kind: SyntheticKind
    dims: tuple
    seed: int = 0
    square_size: int | None = None
    velocity: tuple = (1, 1)
    signatures: int = 3
    smoothness: float = 0.08
    rank: int = 2
    p: int | None = None
    transform_kind: str = "random"

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise ValueError(f"dims must be three positive integers, got {self.dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "kind", SyntheticKind(self.kind))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def gen_moving_square(spec: SyntheticSpec) -> np.ndarray:
    """Video-like tensor: background 0.2 with a 1.0-valued square that moves
    by ``velocity`` (rows, cols) pixels per frame, wrapping at the borders."""
    n1, n2, n3 = spec.dims
    size = spec.square_size or max(1, min(n1, n2) // 4)
    if size > min(n1, n2):
        raise ValueError(f"square of size {size} does not fit a {n1} x {n2} frame")
    rng = _rng(spec.seed)
    r0 = int(rng.integers(0, n1))
    c0 = int(rng.integers(0, n2))
    vr, vc = (int(v) for v in spec.velocity)
    A = np.full((n1, n2, n3), 0.2)
    offs = np.arange(size)
    for t in range(n3):
        rows = (r0 + vr * t + offs) % n1
        cols = (c0 + vc * t + offs) % n2
        A[np.ix_(rows, cols, [t])] = 1.0
    return A


def spectral_signatures(n3: int, s: int, smoothness: float, rng: np.random.Generator) -> np.ndarray:
    """``n3 x s`` matrix of smooth, positive, unit-norm spectra (sums of
    Gaussian bumps over the band index)."""
    t = np.linspace(0.0, 1.0, n3)
    V = np.empty((n3, s))
    for ell in range(s):
        centers = rng.uniform(0.0, 1.0, size=3)
        heights = rng.uniform(0.3, 1.0, size=3)
        widths = smoothness * rng.uniform(0.5, 2.0, size=3)
        v = 0.05 + np.sum(heights * np.exp(-0.5 * ((t[:, None] - centers) / widths) ** 2), axis=1)
        V[:, ell] = v / np.linalg.norm(v)
    return V


def gen_spectral_cube(spec: SyntheticSpec) -> np.ndarray:
    """Hyperspectral-like cube ``A[i, j, :] = sum_l w_l(i, j) v_l``.

    The abundance maps ``w_l`` are nonnegative mixtures of a Voronoi region
    labelling and smooth distance falloffs, so the mode-3 unfolding has rank
    at most ``signatures``.
    """
    n1, n2, n3 = spec.dims
    s = int(spec.signatures)
    if not 1 <= s <= n3:
        raise ValueError(f"number of signatures {s} must lie in [1, n3={n3}]")
    rng = _rng(spec.seed)
    V = spectral_signatures(n3, s, spec.smoothness, rng)
    centers = rng.uniform(0.0, 1.0, size=(s, 2))
    ii, jj = np.meshgrid(np.linspace(0, 1, n1), np.linspace(0, 1, n2), indexing="ij")
    d2 = (ii[..., None] - centers[:, 0]) ** 2 + (jj[..., None] - centers[:, 1]) ** 2
    hard = (d2 == d2.min(axis=2, keepdims=True)).astype(float)
    soft = np.exp(-d2 / 0.05)
    soft /= soft.sum(axis=2, keepdims=True)
    W = 0.7 * hard + 0.3 * soft
    return np.einsum("ijl,tl->ijt", W, V)


def gen_exact_rank(spec: SyntheticSpec, transform=None) -> np.ndarray:
    """``A = (X facewise Y^T) x_3 Q`` with random rank-``rank`` transform-domain
    slices, so that the projected rank of ``A`` is at most ``rank`` and its
    projection error is zero.

    ``transform`` overrides the one built from ``spec.transform_kind`` and
    ``spec.p`` (which defaults to ``n3``).
    """
    from .transforms import make_transform

    n1, n2, n3 = spec.dims
    k = int(spec.rank)
    if not 1 <= k <= min(n1, n2):
        raise ValueError(f"rank {k} must lie in [1, {min(n1, n2)}]")
    if transform is None:
        transform = make_transform(spec.transform_kind, n3, spec.p or n3, seed=spec.seed)
    rng = _rng(spec.seed + 1)
    p = transform.p
    X = rng.standard_normal((n1, k, p))
    Y = rng.standard_normal((n2, k, p))
    Ahat = np.einsum("irk,jrk->ijk", X, Y)
    return Ahat @ transform.Q.T


def generate(spec: SyntheticSpec, transform=None) -> np.ndarray:
    if spec.kind is SyntheticKind.MOVING_SQUARE:
        return gen_moving_square(spec)
    if spec.kind is SyntheticKind.SPECTRAL_CUBE:
        return gen_spectral_cube(spec)
    return gen_exact_rank(spec, transform)


__all__ = [
    "MAGIC",
    "HEADER_SIZE",
    "write_pt3",
    "read_pt3",
    "write_matrix_pt3",
    "read_matrix_pt3",
    "write_reports",
    "read_reports",
    "SyntheticKind",
    "SyntheticSpec",
    "gen_moving_square",
    "gen_spectral_cube",
    "gen_exact_rank",
    "generate",
    "CompressionReport",
]
