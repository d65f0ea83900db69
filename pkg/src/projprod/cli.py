"""Command-line entry point: ``projprod {gen,compress,sweep,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import decompositions as dec
from .data_io import SyntheticSpec, generate, read_pt3, write_pt3, write_reports
from .errors import ProjProdError
from .metrics import (
    CSV_HEADER,
    CompressionReport,
    relative_error,
    storage_hosvd,
    storage_matrix_svd,
    storage_tsvdq,
    storage_tsvdq2,
)
from .sweep import gnuplot_script, sweep_tsvdq
from .transforms import TransformKind, make_transform
from .verification import CHECKS, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_tuple(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


def _dims(text: str) -> tuple[int, int, int]:
    dims = _int_tuple(text, 3)
    if min(dims) < 1:
        raise argparse.ArgumentTypeError(f"dims must be positive, got {text!r}")
    return dims


def parse_grid(text: str) -> list[int]:
    """``"1:10"``, ``"1:10:2"`` (inclusive) or ``"1,2,5"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = [int(b) for b in part.split(":")]
            start, stop = bits[0], bits[1]
            step = bits[2] if len(bits) > 2 else 1
            if step < 1:
                raise argparse.ArgumentTypeError("grid step must be positive")
            out.extend(range(start, stop + 1, step))
        else:
            out.append(int(part))
    return out


def _grid(text: str) -> list[int]:
    try:
        return parse_grid(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="projprod", description="Projected tensor-tensor product toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic tensor as a PT3 file")
    g.add_argument("--kind", required=True, choices=["moving-square", "spectral-cube", "exact-rank"])
    g.add_argument("--dims", required=True, type=_dims)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--velocity", type=lambda s: _int_tuple(s, 2), default=(1, 1))
    g.add_argument("--size", type=int, default=None, help="square side (moving-square)")
    g.add_argument("--signatures", type=int, default=3, help="spectral signatures (spectral-cube)")
    g.add_argument("--smoothness", type=float, default=0.08)
    g.add_argument("--rank", type=int, default=2, help="target projected rank (exact-rank)")
    g.add_argument("-p", type=int, default=None, help="projection dimension (exact-rank)")
    g.add_argument("--transform", default="random", choices=["identity", "random", "dct", "haar"])
    g.add_argument("-o", "--output", required=True)

    c = sub.add_parser("compress", help="compress a PT3 tensor and report RE/CR")
    c.add_argument("input")
    c.add_argument("--method", required=True, choices=["tsvdq", "tsvdq2", "hosvd", "matrix-svd"])
    c.add_argument("--transform", default="data", choices=[k.value for k in TransformKind if k is not TransformKind.CUSTOM])
    c.add_argument("-k", type=int, default=None)
    c.add_argument("-p", type=int, default=None)
    c.add_argument("--gamma", type=float, default=None, help="energy level (tsvdq2); defaults to the level matching -k")
    c.add_argument("--ranks", type=lambda s: _int_tuple(s, 3), default=None, help="k1,k2,k3 (hosvd)")
    c.add_argument("--variant", choices=["full", "square"], default="full",
                   help="hosvd rank pattern matched to the storage of a rank-k tsvdq")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--csv", default=None, help="append the report row to this CSV file")
    c.add_argument("--save-factors", default=None, help="write factors to this .npz file")

    s = sub.add_parser("sweep", help="relative error over a (k, p) grid")
    s.add_argument("input")
    s.add_argument("--k", dest="ks", type=_grid, required=True)
    s.add_argument("--p", dest="ps", type=_grid, required=True)
    s.add_argument("--transforms", default="identity,random,dct,data")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--csv", required=True)
    s.add_argument("--plot-script", default=None, help="write a gnuplot script for the CSV")

    v = sub.add_parser("verify", help="run the theorem and fixture checks")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--only", action="append", choices=sorted(CHECKS), default=None)
    v.add_argument("--scale", type=float, default=1.0, help="multiplier on randomized instance counts")
    return ap


def cmd_gen(args) -> int:
    spec = SyntheticSpec(
        args.kind, args.dims, seed=args.seed, square_size=args.size, velocity=args.velocity,
        signatures=args.signatures, smoothness=args.smoothness, rank=args.rank, p=args.p,
        transform_kind=args.transform,
    )
    A = generate(spec)
    write_pt3(args.output, A)
    print(f"wrote {args.output} dims={A.shape}")
    return EXIT_OK


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--method {args.method} needs: {', '.join('-' + m if len(m) == 1 else '--' + m for m in missing)}")


def compress(A: np.ndarray, args) -> tuple[CompressionReport, dict]:
    n1, n2, n3 = A.shape
    method = args.method
    if method in ("tsvdq", "tsvdq2"):
        p = args.p if args.p is not None else n3
        if not 1 <= p <= n3:
            raise UsageError(f"-p must lie in [1, {n3}]")
        T = make_transform(args.transform, n3, p, A=A, seed=args.seed)
        if method == "tsvdq":
            _need(args, "k")
            F = dec.tsvdq(A, T, args.k)
            Ak = dec.tsvdq_reconstruct(F)
            rep = CompressionReport("tsvdq", T.kind.value, relative_error(A, Ak),
                                    storage_tsvdq(A.shape, args.k, p, T.kind), A.shape, k=args.k, p=p)
            return rep, {"U": F.U, "s": F.s, "V": F.V, "Q": T.Q}
        gamma = args.gamma
        if gamma is None:
            _need(args, "k")
            gamma = dec.energy_for_truncation(A, dec.tsvdq(A, T, args.k))
        F2 = dec.tsvdq2(A, T, gamma)
        rep = CompressionReport("tsvdq2", T.kind.value, relative_error(A, dec.tsvdq2_reconstruct(F2)),
                                storage_tsvdq2(A.shape, F2.kappa, p, T.kind), A.shape,
                                k=args.k, p=p, gamma=gamma, kappa=F2.kappa, multirank=tuple(F2.rho))
        factors = {"rho": F2.rho, "Q": T.Q}
        for i in range(F2.p):
            factors[f"U{i}"], factors[f"s{i}"], factors[f"V{i}"] = F2.U[i], F2.s[i], F2.V[i]
        return rep, factors
    if method == "hosvd":
        if args.ranks is not None:
            ranks = args.ranks
        else:
            _need(args, "k", "p")
            k2 = dec.hosvd_matched_truncation(A.shape, args.k, args.p, args.variant)
            if k2 is None:
                raise UsageError(f"no feasible HOSVD truncation matches k={args.k}, p={args.p}")
            ranks = (n1, k2, args.p) if args.variant == "full" else (k2, k2, args.p)
        H = dec.hosvd(A, ranks)
        rep = CompressionReport("hosvd", "data", relative_error(A, dec.hosvd_reconstruct(H)),
                                storage_hosvd(A.shape, ranks), A.shape,
                                k=":".join(str(r) for r in ranks), p=ranks[2])
        return rep, {"G": H.G, "U1": H.U1, "U2": H.U2, "U3": H.U3}
    _need(args, "k")
    if not 1 <= args.k <= min(n1 * n3, n2):
        raise UsageError(f"-k must lie in [1, {min(n1 * n3, n2)}]")
    (U, s, V), err = dec.matrix_svd_baseline(A, args.k)
    rep = CompressionReport("matrix-svd", "none", err / float(np.linalg.norm(A)),
                            storage_matrix_svd(A.shape, args.k), A.shape, k=args.k)
    return rep, {"U": U, "s": s, "V": V}


def cmd_compress(args) -> int:
    A = read_pt3(args.input)
    try:
        rep, factors = compress(A, args)
    except ValueError as exc:
        raise UsageError(str(exc))
    w = csv.writer(sys.stdout)
    w.writerow(CSV_HEADER)
    w.writerow(rep.csv_row())
    if args.csv:
        write_reports(args.csv, [rep])
    if args.save_factors:
        np.savez(args.save_factors, **factors)
    return EXIT_OK


def cmd_sweep(args) -> int:
    A = read_pt3(args.input)
    kinds = [k.strip() for k in args.transforms.split(",") if k.strip()]
    if not kinds or not args.ks or not args.ps:
        raise UsageError("sweep grid is empty")
    try:
        reports = sweep_tsvdq(A, kinds, args.ks, args.ps, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc))
    write_reports(args.csv, reports, append=False)
    if args.plot_script:
        with open(args.plot_script, "w") as fh:
            fh.write(gnuplot_script(args.csv, kinds, args.ks))
    print(f"wrote {len(reports)} rows to {args.csv}")
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_checks(args.only, seed=args.seed, scale=args.scale)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"failed check {r.name}: residual {r.residual:.3e}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"gen": cmd_gen, "compress": cmd_compress, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ProjProdError, ValueError, OSError) as exc:
        print(f"projprod {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
