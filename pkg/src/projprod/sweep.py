"""Relative-error sweeps of the truncated projected SVD over ``(k, p)`` grids."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .decompositions import facewise_svd
from .metrics import CompressionReport, storage_tsvdq
from .tensor_core import mode3_product
from .transforms import TransformKind, make_transform, mode3_left_singular_vectors, projection_error, Transform


def thread_count() -> int:
    """Worker cap from ``PROJPROD_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("PROJPROD_THREADS", "1")))
    except ValueError:
        return 1


def _cell_errors(A: np.ndarray, T: Transform, ks, nrm: float) -> list[float]:
    # error^2 = discarded transform-domain energy + projection error^2
    spectra = [r.s for r in facewise_svd(mode3_product(A, T.Q.T))]
    proj2 = projection_error(A, T) ** 2
    out = []
    for k in ks:
        ey2 = sum(float(np.sum(s[k:] ** 2)) for s in spectra)
        out.append(math.sqrt(ey2 + proj2) / nrm)
    return out


def sweep_tsvdq(A: np.ndarray, kinds, ks, ps, seed: int = 0, threads: int | None = None) -> list[CompressionReport]:
    """Relative error and storage of the rank-``k`` projected SVD for every
    transform kind, ``p`` and ``k``.

    Rows are ordered by kind, then ``p``, then ``k`` regardless of how many
    workers run. Errors come from the slice spectra (one facewise SVD per
    ``(kind, p)``) rather than from explicit reconstructions.
    """
    n1, n2, n3 = A.shape
    ks = [int(k) for k in ks]
    ps = [int(p) for p in ps]
    if not ks or not ps:
        raise ValueError("sweep grid is empty")
    if min(ks) < 1 or max(ks) > min(n1, n2):
        raise ValueError(f"k values must lie in [1, {min(n1, n2)}]")
    if min(ps) < 1 or max(ps) > n3:
        raise ValueError(f"p values must lie in [1, {n3}]")
    nrm = float(np.linalg.norm(A))
    if nrm == 0:
        raise ValueError("cannot sweep a zero tensor")
    kinds = [TransformKind(k) for k in kinds]
    U3 = None
    if TransformKind.DATA in kinds:
        U3 = make_transform(TransformKind.DATA, n3, n3, A=A)

    cells = []
    for kind in kinds:
        for p in ps:
            T = U3.truncate(p) if kind is TransformKind.DATA else make_transform(kind, n3, p, seed=seed)
            cells.append((kind, p, T))

    workers = threads or thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda c: _cell_errors(A, c[2], ks, nrm), cells))
    else:
        results = [_cell_errors(A, c[2], ks, nrm) for c in cells]

    reports = []
    for (kind, p, _), errs in zip(cells, results):
        for k, re in zip(ks, errs):
            reports.append(
                CompressionReport("tsvdq", kind.value, re, storage_tsvdq(A.shape, k, p, kind), A.shape, k=k, p=p)
            )
    return reports


def gnuplot_script(csv_path: str, kinds, ks, output: str = "sweep.png") -> str:
    """A gnuplot script drawing relative error against ``p``, one panel per
    transform and one curve per ``k``."""
    kinds = [TransformKind(k).value for k in kinds]
    klist = " ".join(str(int(k)) for k in ks)
    lines = [
        "set datafile separator ','",
        "set terminal pngcairo size 1200,800",
        f"set output '{output}'",
        "set logscale y",
        "set xlabel 'p'",
        "set ylabel 'relative error'",
        "set key outside",
        f"set multiplot layout {math.ceil(len(kinds) / 2)},{min(2, len(kinds))}",
    ]
    for kind in kinds:
        lines.append(f"set title '{kind}'")
        lines.append(
            f"plot for [kk in \"{klist}\"] '{csv_path}' every ::1 "
            f"using (strcol(2) eq '{kind}' && $3 == kk+0 ? $4 : 1/0):7 "
            "with linespoints title 'k='.kk"
        )
    lines.append("unset multiplot")
    return "\n".join(lines) + "\n"
