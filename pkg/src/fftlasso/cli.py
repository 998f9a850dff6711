"""Command-line front end: generate / solve / bench."""

from __future__ import annotations

import argparse
import json
import sys
import time

from .dataio import read_mask, read_volume, write_mask, write_volume
from .fourier import synthesize
from .ipm import IpmConfig, solve
from .synthetic import SyntheticSpec, generate_synthetic

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_MAX_ITERS = 2


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(part) for part in text.replace("x", ",").split(",") if part)
    except ValueError as exc:
        raise ValueError(f"cannot parse dims {text!r}") from exc
    if not dims:
        raise ValueError(f"cannot parse dims {text!r}")
    return dims


def _write_report(path: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True))
            fh.write("\n")


def _cmd_generate(args) -> int:
    dims = _parse_dims(args.dims)
    spec = SyntheticSpec(
        dims=dims,
        noise_seed=args.noise_seed,
        missing_fraction=args.missing_fraction,
        missing_seed=args.missing_seed,
    )
    noisy, mask, truth = generate_synthetic(spec)
    write_volume(args.signal, noisy, dims)
    write_mask(args.mask, mask, fmt=args.mask_format)
    if args.truth:
        write_volume(args.truth, truth, dims)
    print(f"wrote {args.signal} ({'x'.join(map(str, dims))}, "
          f"{mask.n_missing} of {mask.shape.n} samples missing)")
    return EXIT_OK


def _cmd_solve(args) -> int:
    try:
        values, dims = read_volume(args.input)
        mask = read_mask(args.mask)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if tuple(dims) != mask.shape.dims:
        print(
            f"error: volume dims {dims} do not match mask dims {mask.shape.dims}",
            file=sys.stderr,
        )
        return EXIT_INPUT_ERROR

    b = values[~mask.missing_bool]
    config = IpmConfig(
        lam=args.lam,
        tol=args.tol,
        cg_tol=args.cg_tol,
        max_iters=args.max_iters,
    )
    beta, report = solve(b, mask, config)

    write_volume(args.output, beta, dims)
    if args.impute:
        write_volume(args.impute, synthesize(beta, mask.shape), dims)

    records = [{
        "record": "meta",
        "input": args.input,
        "dims": list(dims),
        "unknowns": mask.shape.n,
        "ipm_variables": 2 * mask.shape.n,
        "missing": mask.n_missing,
        "lambda": report.lam,
        "lambda_source": "flag" if args.lam is not None else "default",
        "tol": report.tol,
        "cg_tol": args.cg_tol,
    }]
    records.extend(rec.to_dict() for rec in report.records)
    records.append(report.to_dict())
    if args.report:
        _write_report(args.report, records)

    print(f"{report.status} in {report.iterations} iterations, "
          f"objective {report.final_objective:.6e}, "
          f"total Krylov iterations {report.total_krylov}")
    return EXIT_OK if report.converged else EXIT_MAX_ITERS


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    records = []
    worst = EXIT_OK
    for size in sizes:
        dims = (size, size, size)
        spec = SyntheticSpec(
            dims=dims,
            noise_seed=args.seed,
            missing_fraction=args.missing_fraction,
            missing_seed=args.seed + 1,
        )
        noisy, mask, _ = generate_synthetic(spec)
        b = noisy[~mask.missing_bool]
        config = IpmConfig(tol=args.tol, cg_tol=args.cg_tol, max_iters=args.max_iters)
        t0 = time.perf_counter()
        _, report = solve(b, mask, config)
        elapsed = time.perf_counter() - t0
        row = {
            "record": "bench",
            "size": list(dims),
            "unknowns": mask.shape.n,
            "ipm_variables": 2 * mask.shape.n,
            "missing": mask.n_missing,
            "status": report.status,
            "iterations": report.iterations,
            "total_krylov": report.total_krylov,
            "krylov_per_iteration": report.krylov_counts,
            "lambda": report.lam,
            "wall_time": elapsed,
        }
        records.append(row)
        print(f"{size}^3: n={row['unknowns']}, {row['status']} in "
              f"{row['iterations']} iterations, {row['total_krylov']} Krylov, "
              f"{elapsed:.2f}s")
        if not report.converged:
            worst = EXIT_MAX_ITERS
    if args.report:
        _write_report(args.report, records)
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fftlasso",
        description="Sparse spectral recovery from noisy, incomplete signals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic volume and mask")
    gen.add_argument("--dims", required=True, help="grid dims, e.g. 32,32,32 or 32x32x32")
    gen.add_argument("--noise-seed", type=int, default=0)
    gen.add_argument("--missing-seed", type=int, default=1)
    gen.add_argument("--missing-fraction", type=float, default=0.15)
    gen.add_argument("--mask-format", choices=["indices", "bytemask"], default="indices")
    gen.add_argument("--signal", required=True, help="output volume path")
    gen.add_argument("--mask", required=True, help="output mask path")
    gen.add_argument("--truth", help="optional noise-free volume path")
    gen.set_defaults(func=_cmd_generate)

    slv = sub.add_parser("solve", help="recover the sparse spectrum of a volume")
    slv.add_argument("--input", required=True, help="noisy volume (full grid)")
    slv.add_argument("--mask", required=True, help="missing-sample mask")
    slv.add_argument("--lambda", dest="lam", type=float, default=None,
                     help="l1 penalty (default: 0.1 * max correlation)")
    slv.add_argument("--tol", type=float, default=1e-8)
    slv.add_argument("--cg-tol", type=float, default=1e-12)
    slv.add_argument("--max-iters", type=int, default=200)
    slv.add_argument("--output", required=True, help="recovered spectrum volume")
    slv.add_argument("--report", help="JSON-lines solve report")
    slv.add_argument("--impute", help="optional imputed signal volume")
    slv.set_defaults(func=_cmd_solve)

    ben = sub.add_parser("bench", help="synthetic cube benchmark")
    ben.add_argument("--sizes", required=True, help="cube edges, e.g. 8,16,32")
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--missing-fraction", type=float, default=0.15)
    ben.add_argument("--tol", type=float, default=1e-8)
    ben.add_argument("--cg-tol", type=float, default=1e-12)
    ben.add_argument("--max-iters", type=int, default=200)
    ben.add_argument("--report", help="JSON-lines bench report")
    ben.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
