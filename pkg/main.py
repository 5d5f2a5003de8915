"""
normlab - Fast Euclidean norm approximations and their error laboratory
Features: Table 2 / Table 3 / Figure 1 reproduction, calibration, benchmarks, norm evaluation
Outputs RFC-4180 CSV with an embedded run manifest
"""
import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import config
from config import __version__

# Logging configuration
logging.basicConfig(
    level=getattr(logging, config.LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

import analytic
import bench
import error_lab
import norms
from models import RunManifest, SamplerConfig
from sampler import SAMPLER_ALGORITHM
from report_manager import (
    BENCH_COLUMNS, DELTA_COLUMNS, EVAL_COLUMNS, FIGURE1_COLUMNS, FIGURE1_TCOST_COLUMNS,
    SEOL_CHEUN_COLUMNS, TABLE2_COLUMNS, TABLE3_COLUMNS, ReportManager, bench_cells,
    delta_cells, fmt_float, load_vector_file, parse_vector, pct, seol_cheun_cells,
    table2_cells, table3_cells,
)

report_manager = ReportManager()


# =============================================================================
# ARGUMENT HELPERS
# =============================================================================

def parse_dims(text: str) -> List[int]:
    """'2..8' or '2,4,8' or '2..4,8' -> ordered list of dimensions"""
    dims = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = (int(v) for v in part.split("..", 1))
                if hi < lo:
                    raise ValueError
                dims.extend(range(lo, hi + 1))
            else:
                dims.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"Invalid dimension list '{text}'")
    if not dims:
        raise argparse.ArgumentTypeError("Empty dimension list")
    return dims


def _check_table_dims(dims: List[int]):
    bad = [n for n in dims if not 2 <= n <= config.MAX_TABLE_DIM]
    if bad:
        raise ValueError(f"Table dimensions must lie in [2, {config.MAX_TABLE_DIM}], got {bad}")


def _sampling(args):
    """Resolve epsilon / initial sample count, honouring --fast"""
    epsilon = args.epsilon
    initial = args.initial
    if args.fast:
        epsilon = epsilon if epsilon is not None else config.FAST_EPSILON
        initial = initial if initial is not None else config.FAST_INITIAL_SAMPLES
    epsilon = epsilon if epsilon is not None else config.DEFAULT_EPSILON
    initial = initial if initial is not None else config.INITIAL_SAMPLES
    return epsilon, initial


def _batch_size(initial: int, requested: int) -> int:
    return min(requested, initial)


def _worker_split(dims: List[int], workers: int) -> Tuple[int, int]:
    """(dimension workers, batch workers): several dimensions share the pool, a single one gets it for its batches"""
    if len(dims) > 1:
        return workers, 1
    return 1, workers


def _per_dimension(func, dims: List[int], workers: int):
    """Run func(n) for each dimension; results in dims order"""
    if workers > 1 and len(dims) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, dims))
    return [func(n) for n in dims]


def _manifest(command: str, dims=None, **extra) -> RunManifest:
    return RunManifest(command=command, dims=list(dims or []), version=__version__, **extra)


def _sampled_manifest(command: str, args, batch_size: int, **extra) -> RunManifest:
    """Manifest of a Monte Carlo command; batch size and generator fix every substream"""
    return _manifest(
        command, args.dims, seed=args.seed, batch_size=batch_size, sampler=SAMPLER_ALGORITHM, **extra
    )


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_table2(args) -> int:
    """Approximation comparison table: D_ab, D_B, D_M-hat, D_M"""
    _check_table_dims(args.dims)
    epsilon, initial = _sampling(args)
    batch_size = _batch_size(initial, args.batch_size)
    dim_workers, batch_workers = _worker_split(args.dims, args.workers)
    logger.info(f"🚀 Table 2 for n={args.dims} (seed={args.seed}, epsilon={epsilon}, initial={initial:,})")

    def row(n):
        cfg = SamplerConfig(dim=n, seed=args.seed, batch_size=batch_size)
        return error_lab.table2_row(
            n, cfg, epsilon=epsilon, initial_samples=initial, cap=args.cap,
            calibration_samples=args.calibration_samples, workers=batch_workers,
        )

    rows = _per_dimension(row, args.dims, dim_workers)
    manifest = _sampled_manifest(
        "table2", args, batch_size, epsilon=epsilon, sample_cap=args.cap,
        initial_samples=initial, calibration_samples=args.calibration_samples, fast=args.fast,
    )
    report_manager.write(manifest, TABLE2_COLUMNS, [table2_cells(r) for r in rows], args.out)
    logger.info("✅ Table 2 complete")
    return 0


def cmd_table3(args) -> int:
    """D_M-hat at delta* versus the grid-searched delta-hat"""
    _check_table_dims(args.dims)
    epsilon, initial = _sampling(args)
    batch_size = _batch_size(initial, args.batch_size)
    dim_workers, batch_workers = _worker_split(args.dims, args.workers)
    logger.info(f"🚀 Table 3 for n={args.dims} (grid step {args.grid_step})")

    def row(n):
        cfg = SamplerConfig(dim=n, seed=args.seed, batch_size=batch_size)
        return error_lab.table3_row(
            n, cfg, args.grid_step, epsilon=epsilon, initial_samples=initial,
            cap=args.cap, workers=batch_workers,
        )

    rows = _per_dimension(row, args.dims, dim_workers)
    manifest = _sampled_manifest(
        "table3", args, batch_size, epsilon=epsilon, grid_step=args.grid_step,
        sample_cap=args.cap, initial_samples=initial, fast=args.fast,
    )
    report_manager.write(manifest, TABLE3_COLUMNS, [table3_cells(r) for r in rows], args.out)
    logger.info("✅ Table 3 complete")
    return 0


def cmd_figure1(args) -> int:
    """Theoretical MRE curves of D_M and D_B for n = 2..n_max"""
    if args.n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {args.n_max}")

    columns = list(FIGURE1_COLUMNS)
    if args.with_tcost:
        columns += FIGURE1_TCOST_COLUMNS

    rows = []
    for n in range(2, args.n_max + 1):
        cells = [str(n), pct(analytic.mukherjee_mre_theoretical(n)), pct(analytic.barni_optimal(n).mre)]
        if args.with_tcost:
            cells += [pct(analytic.tcost_mre_theoretical(n, 1)), pct(analytic.tcost_mre_theoretical(n, n))]
        rows.append(cells)

    manifest = _manifest("figure1", range(2, args.n_max + 1))
    report_manager.write(manifest, columns, rows, args.out)
    return 0


def cmd_calibrate(args) -> int:
    """Seol-Cheun (a, b) fit or delta-hat grid search"""
    epsilon, initial = _sampling(args)
    batch_size = _batch_size(initial, args.batch_size)
    dim_workers, batch_workers = _worker_split(args.dims, args.workers)

    if args.target == "seol-cheun":
        def fit(n):
            cfg = SamplerConfig(dim=n, seed=args.seed, batch_size=batch_size)
            return error_lab.calibrate_seol_cheun(n, args.samples, cfg)

        results = _per_dimension(fit, args.dims, args.workers)
        manifest = _sampled_manifest(
            "calibrate-seol-cheun", args, batch_size, calibration_samples=args.samples,
        )
        report_manager.write(manifest, SEOL_CHEUN_COLUMNS, [seol_cheun_cells(r) for r in results], args.out)
        return 0

    def search(n):
        cfg = SamplerConfig(dim=n, seed=args.seed, batch_size=batch_size)
        return error_lab.grid_search_delta(
            n, args.grid_step, cfg, epsilon=epsilon, initial_samples=initial, cap=args.cap,
            workers=batch_workers,
        )

    results = _per_dimension(search, args.dims, dim_workers)
    manifest = _sampled_manifest(
        "calibrate-delta", args, batch_size, epsilon=epsilon, grid_step=args.grid_step,
        sample_cap=args.cap, initial_samples=initial, fast=args.fast,
    )
    report_manager.write(manifest, DELTA_COLUMNS, [delta_cells(r) for r in results], args.out)
    return 0


def cmd_bench(args) -> int:
    """Operation counts and throughput, single-threaded"""
    names = [n.strip() for n in args.norms.split(",") if n.strip()]
    rows = bench.bench_suite(names, args.dims, trials=args.trials, batch=args.batch, seed=args.seed)
    manifest = _manifest("bench", args.dims, seed=args.seed)
    report_manager.write(manifest, BENCH_COLUMNS, [bench_cells(c, t) for c, t in rows], args.out)
    return 0


def cmd_eval(args) -> int:
    """Evaluate a named norm on inline or file vectors"""
    if args.vector is not None and args.vector_option is not None:
        raise ValueError("Give the vector either positionally or with --vector, not both")
    inline = args.vector if args.vector is not None else args.vector_option
    if args.file is not None:
        vectors = load_vector_file(args.file)
    elif inline is not None:
        vectors = [parse_vector(inline)]
    else:
        raise ValueError("Provide a vector or --file")

    params = {"t": args.t, "p": args.p, "a": args.a, "b": args.b, "delta": args.delta}
    if args.weights is not None:
        params["w"] = parse_vector(args.weights)
    params = {k: v for k, v in params.items() if v is not None}

    rows = []
    for vector in vectors:
        evaluator = norms.make_norm(args.norm, vector.size, **params)
        rows.append([args.norm, fmt_float(evaluator(vector))])

    manifest = _manifest("eval")
    report_manager.write(manifest, EVAL_COLUMNS, rows, args.out)
    return 0


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normlab",
        description="Fast Euclidean norm approximations: tables, calibration, benchmarks",
    )
    parser.add_argument("--version", action="version", version=f"normlab {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=config.DEFAULT_SEED,
                        help="RNG seed (env NORMLAB_SEED)")
    common.add_argument("--out", type=Path, default=None, help="Output CSV path (default stdout)")
    common.add_argument("--workers", type=int, default=config.WORKERS,
                        help="Parallel dimensions (env NORMLAB_WORKERS)")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--dims", "--dim", type=parse_dims, default=list(config.DEFAULT_DIMS),
                          help="Dimensions, e.g. 2..8 or 2,4,8")
    sampling.add_argument("--epsilon", type=float, default=None, help="Convergence threshold")
    sampling.add_argument("--initial", type=int, default=None, help="Initial sample count")
    sampling.add_argument("--cap", type=int, default=config.SAMPLE_CAP, help="Sample cap")
    sampling.add_argument("--batch-size", type=int, default=config.BATCH_SIZE,
                          help="Points per batch (env NORMLAB_BATCH_SIZE)")
    sampling.add_argument("--fast", action="store_true",
                          help=f"CI mode: {config.FAST_INITIAL_SAMPLES:,} initial samples, "
                               f"epsilon {config.FAST_EPSILON}")

    p = sub.add_parser("table2", parents=[common, sampling], help="Average/maximum errors table")
    p.add_argument("--calibration-samples", type=int, default=config.SEOL_CHEUN_SAMPLES)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("table3", parents=[common, sampling], help="delta* versus delta-hat table")
    p.add_argument("--grid-step", type=float, default=config.DEFAULT_GRID_STEP)
    p.set_defaults(func=cmd_table3)

    p = sub.add_parser("figure1", parents=[common], help="Theoretical MRE curves")
    p.add_argument("--n-max", type=int, default=config.FIGURE1_N_MAX)
    p.add_argument("--with-tcost", action="store_true", help="Add t-cost MRE columns (t=1, t=n)")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("calibrate", parents=[common, sampling], help="Fit (a, b) or delta-hat")
    p.add_argument("target", choices=["seol-cheun", "delta"])
    p.add_argument("--samples", type=int, default=config.SEOL_CHEUN_SAMPLES,
                   help="Gaussian samples for the Seol-Cheun fit")
    p.add_argument("--grid-step", type=float, default=config.DEFAULT_GRID_STEP)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("bench", parents=[common], help="Operation counts and throughput")
    p.add_argument("--norms", default=",".join(bench.BENCH_NORMS))
    p.add_argument("--dims", type=parse_dims, default=[2, 4, 8, 64])
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--batch", type=int, default=100_000)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("eval", parents=[common], help="Evaluate a norm on a vector")
    p.add_argument("norm", help=f"One of: {', '.join(norms.NORM_NAMES)}")
    p.add_argument("vector", nargs="?", default=None, help="Comma-separated components")
    p.add_argument("--vector", dest="vector_option", default=None,
                   help="Comma-separated components; use --vector=-3,4 when the first one is negative")
    p.add_argument("--file", type=Path, default=None, help="Vector file (one vector per line)")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--weights", default=None, help="Comma-separated weighted t-cost weights")
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    config.log_settings()

    try:
        return args.func(args)
    except (ValueError, KeyError) as e:
        logger.error(f"💥 {args.command} failed: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
