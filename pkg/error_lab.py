"""
Error Lab - Empirical ARE/MRE estimation on the unit hypersphere
Features: streaming accumulation, sample-doubling convergence, Seol-Cheun calibration,
delta grid search, Table 2 / Table 3 row assembly

All errors are fractions; percent conversion happens only in the report layer.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Collection, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

import analytic
import norms
from config import DEFAULT_EPSILON, INITIAL_SAMPLES, SAMPLE_CAP, SEOL_CHEUN_SAMPLES
from models import (
    CalibrationResult, ErrorReport, SampleBatch, SamplerConfig, Table2Row, Table3Row
)
from sampler import gaussian_sample, sample_unit_sphere

logger = logging.getLogger(__name__)

NormEvaluator = Callable[[np.ndarray], np.ndarray]

# Points further than this from the unit sphere are rejected
SPHERE_TOLERANCE = 1e-9

# Seol-Cheun systems above this condition number are treated as degenerate
MAX_CONDITION = 1e12


class DegenerateSystemError(ValueError):
    """Seol-Cheun normal equations are singular or ill-conditioned"""


class ErrorAccumulator:
    """
    Streaming ARE/MRE accumulator
    - one partial sum per batch, combined by pairwise summation in batch order
    - maximum is order-free
    """

    def __init__(self):
        self._batch_sums = []
        self._max = 0.0
        self.count = 0

    def add_stats(self, total: float, peak: float, count: int):
        self._batch_sums.append(total)
        self._max = max(self._max, peak)
        self.count += count

    def add(self, errors: np.ndarray):
        self.add_stats(float(np.sum(errors)), float(np.max(errors)), int(errors.size))

    @property
    def are(self) -> float:
        if self.count == 0:
            raise ValueError("No samples accumulated")
        return float(np.sum(np.asarray(self._batch_sums))) / self.count

    @property
    def mre(self) -> float:
        if self.count == 0:
            raise ValueError("No samples accumulated")
        return self._max


def _check_on_sphere(points: np.ndarray):
    deviation = np.abs(np.sqrt(np.sum(points * points, axis=1)) - 1.0)
    worst = float(np.max(deviation))
    if worst > SPHERE_TOLERANCE:
        raise ValueError(f"Sample point off the unit sphere (|d2 - 1| = {worst:.3e})")


def relative_errors(norm: NormEvaluator, points: np.ndarray) -> np.ndarray:
    """|N(x) - 1| for unit-sphere points"""
    _check_on_sphere(points)
    return np.abs(norm(points) - 1.0)


def empirical_errors(norm: NormEvaluator, batch_stream: Iterable[SampleBatch]) -> Tuple[float, float]:
    """
    ARE and MRE of a norm over a stream of unit-sphere batches
    Batches are consumed one at a time; nothing beyond per-batch sums is retained
    """
    acc = ErrorAccumulator()
    for batch in batch_stream:
        if batch.kind != "sphere":
            raise ValueError(f"Expected sphere batches, got '{batch.kind}'")
        if len(batch) == 0:
            continue
        acc.add(relative_errors(norm, batch.points))

    if acc.count == 0:
        raise ValueError("Empty sample stream")
    return acc.are, acc.mre


def signed_extremes(norm: NormEvaluator, batch_stream: Iterable[SampleBatch]) -> Tuple[float, float]:
    """Sampled (min, max) of N(x) over unit-sphere batches"""
    low, high = math.inf, -math.inf
    for batch in batch_stream:
        _check_on_sphere(batch.points)
        values = norm(batch.points)
        low = min(low, float(np.min(values)))
        high = max(high, float(np.max(values)))
    if math.isinf(low):
        raise ValueError("Empty sample stream")
    return low, high


# =============================================================================
# DOUBLING CONVERGENCE
# =============================================================================

BatchStats = Dict[str, Tuple[float, float, int]]


def _batch_stats(
    evaluators: Mapping[str, NormEvaluator],
    cfg: SamplerConfig,
    batch_index: int,
    keep: Collection[str] = (),
    scales: Optional[Mapping[str, float]] = None,
) -> Tuple[BatchStats, Dict[str, np.ndarray]]:
    batch = sample_unit_sphere(cfg, batch_index)
    _check_on_sphere(batch.points)
    stats, kept = {}, {}
    for name, norm in evaluators.items():
        values = norm(batch.points)
        scale = (scales or {}).get(name)
        errors = np.abs((values if scale is None else values / scale) - 1.0)
        stats[name] = (float(np.sum(errors)), float(np.max(errors)), int(errors.size))
        if name in keep:
            kept[name] = values
    return stats, kept


def converge_many(
    evaluators: Mapping[str, NormEvaluator],
    cfg: SamplerConfig,
    epsilon: float = DEFAULT_EPSILON,
    initial_samples: int = INITIAL_SAMPLES,
    cap: int = SAMPLE_CAP,
    mre_theoretical: Optional[Mapping[str, float]] = None,
    workers: int = 1,
    value_store: Optional[Dict[str, List[np.ndarray]]] = None,
    error_scale: Optional[Mapping[str, float]] = None,
) -> Dict[str, ErrorReport]:
    """
    Sample-doubling ARE/MRE estimation for several norms on one shared sample set
    - rounds cover initial, 2x initial, 4x initial ... points; each round appends new batches
    - stops when every norm's ARE and MRE moved by at most epsilon since the previous round
    - reaching the cap yields converged = False rather than an error
    - value_store: for each name it holds, the per-batch norm values are appended in batch order
    - error_scale: name -> delta; that norm is measured as N(x) / delta
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if initial_samples < cfg.batch_size or initial_samples % cfg.batch_size:
        raise ValueError(
            f"Initial sample count {initial_samples} must be a multiple of batch size {cfg.batch_size}"
        )
    if cap < initial_samples:
        raise ValueError(f"Sample cap {cap} is below the initial sample count {initial_samples}")
    if not evaluators:
        raise ValueError("No norms to evaluate")
    keep = frozenset(value_store or ())
    scales = dict(error_scale or {})
    if any(not 0 < s <= 1 for s in scales.values()):
        raise ValueError(f"Error scales must lie in (0, 1], got {scales}")
    if not keep <= set(evaluators):
        raise ValueError(f"Cannot keep values of unknown norms: {sorted(keep - set(evaluators))}")

    theoretical = dict(mre_theoretical or {})
    accumulators = {name: ErrorAccumulator() for name in evaluators}
    total = initial_samples
    next_batch = 0
    previous = None
    converged = False
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    try:
        while True:
            stop = total // cfg.batch_size
            indices = range(next_batch, stop)
            if executor is not None:
                results = executor.map(lambda i: _batch_stats(evaluators, cfg, i, keep, scales), indices)
            else:
                results = (_batch_stats(evaluators, cfg, i, keep, scales) for i in indices)
            for stats, kept in results:
                for name, (batch_sum, batch_max, count) in stats.items():
                    accumulators[name].add_stats(batch_sum, batch_max, count)
                for name, values in kept.items():
                    value_store[name].append(values)
            next_batch = stop

            current = {name: (acc.are, acc.mre) for name, acc in accumulators.items()}
            logger.info(
                f"🔄 n={cfg.dim} round at {total:,} points: "
                + ", ".join(f"{k} ARE={v[0]:.6f} MRE={v[1]:.6f}" for k, v in current.items())
            )

            if previous is not None and all(
                abs(current[k][0] - previous[k][0]) <= epsilon
                and abs(current[k][1] - previous[k][1]) <= epsilon
                for k in current
            ):
                converged = True
                break

            previous = current
            if total * 2 > cap:
                logger.warning(
                    f"⚠️  n={cfg.dim}: sample cap {cap:,} reached before convergence (epsilon={epsilon})"
                )
                break
            total *= 2
    finally:
        if executor is not None:
            executor.shutdown()

    return {
        name: ErrorReport(
            are=acc.are,
            mre_empirical=acc.mre,
            mre_theoretical=theoretical.get(name),
            samples_used=acc.count,
            converged=converged,
            epsilon=epsilon,
        )
        for name, acc in accumulators.items()
    }


def converged_errors(
    norm: NormEvaluator,
    n: int,
    epsilon: float,
    cfg: SamplerConfig,
    initial_samples: int = INITIAL_SAMPLES,
    cap: int = SAMPLE_CAP,
    mre_theoretical: Optional[float] = None,
    workers: int = 1,
) -> ErrorReport:
    """Converged ARE/MRE for a single norm"""
    if cfg.dim != n:
        raise ValueError(f"Sampler dimension {cfg.dim} does not match n={n}")
    theoretical = {"norm": mre_theoretical} if mre_theoretical is not None else None
    reports = converge_many(
        {"norm": norm}, cfg, epsilon, initial_samples, cap, theoretical, workers
    )
    return reports["norm"]


# =============================================================================
# SEOL-CHEUN CALIBRATION
# =============================================================================

def calibrate_seol_cheun(n: int, sample_count: int, cfg: SamplerConfig) -> CalibrationResult:
    """
    Least-squares fit of a * D_inf + b * D_1 to D_2 over Gaussian vectors
    Solves the 2x2 normal equations in closed form
    """
    if sample_count < 2:
        raise ValueError(f"Need at least 2 samples, got {sample_count}")
    if cfg.dim != n:
        raise ValueError(f"Sampler dimension {cfg.dim} does not match n={n}")

    points = gaussian_sample(cfg, sample_count)
    v_inf = norms.dinf(points)
    v_1 = norms.d1(points)
    v_2 = norms.d2(points)

    e_inf_inf = float(np.mean(v_inf * v_inf))
    e_inf_1 = float(np.mean(v_inf * v_1))
    e_1_1 = float(np.mean(v_1 * v_1))
    e_2_inf = float(np.mean(v_2 * v_inf))
    e_2_1 = float(np.mean(v_2 * v_1))

    system = np.array([[e_inf_inf, e_inf_1], [e_inf_1, e_1_1]])
    rhs = np.array([e_2_inf, e_2_1])

    with np.errstate(divide="ignore", invalid="ignore"):
        condition = float(np.linalg.cond(system))
    det = e_inf_inf * e_1_1 - e_inf_1 * e_inf_1
    if not math.isfinite(condition) or condition > MAX_CONDITION or det == 0.0:
        raise DegenerateSystemError(
            f"Seol-Cheun system is degenerate for n={n} (condition number {condition:.3e})"
        )

    a = (e_2_inf * e_1_1 - e_inf_1 * e_2_1) / det
    b = (e_inf_inf * e_2_1 - e_inf_1 * e_2_inf) / det
    residual = float(np.linalg.norm(system @ np.array([a, b]) - rhs) / np.linalg.norm(rhs))
    objective = float(np.mean((a * v_inf + b * v_1 - v_2) ** 2))

    warnings = []
    if a <= 0 or b <= 0:
        message = f"Fitted parameter is non-positive for n={n}: a={a:.6g}, b={b:.6g}"
        logger.warning(f"⚠️  {message}")
        warnings.append(message)

    logger.info(f"📊 Seol-Cheun n={n}: a={a:.6f}, b={b:.6f} over {sample_count:,} samples")
    return CalibrationResult(
        n=n, a=a, b=b, objective=objective, residual=residual,
        samples_used=sample_count, seed=cfg.seed, warnings=warnings,
    )


def seol_cheun_mse(points: np.ndarray, a: float, b: float) -> float:
    """Mean squared error of a * D_inf + b * D_1 against D_2"""
    fitted = norms.dinf_d1_combination(points, a, b)
    return float(np.mean((fitted - norms.d2(points)) ** 2))


# =============================================================================
# DELTA GRID SEARCH
# =============================================================================

def delta_grid(lower: float, grid_step: float, upper: float = 1.0) -> np.ndarray:
    """{lower, lower + step, ...} up to and including upper"""
    count = int(math.floor((upper - lower) / grid_step + 1e-9)) + 1
    grid = lower + grid_step * np.arange(count, dtype=np.float64)
    grid = grid[grid <= upper]
    if grid[-1] < upper - 1e-12:
        grid = np.append(grid, upper)
    return grid


def search_delta(values: np.ndarray, lower: float, grid_step: float,
                 upper: float = 1.0) -> Tuple[float, float]:
    """
    Grid minimizer of max |v / delta - 1| over cached norm values
    The objective depends on the values only through their extrema; ties go to the smaller delta
    """
    if values.size == 0:
        raise ValueError("No cached values to search over")
    grid = delta_grid(lower, grid_step, upper)
    v_min, v_max = float(np.min(values)), float(np.max(values))
    mre = np.maximum(np.abs(v_max / grid - 1.0), np.abs(v_min / grid - 1.0))
    best = int(np.argmin(mre))
    return float(grid[best]), float(mre[best])


def _delta_scan(
    n: int,
    grid_step: float,
    cfg: SamplerConfig,
    epsilon: float,
    initial_samples: int,
    cap: int,
    workers: int,
) -> Tuple[ErrorReport, CalibrationResult]:
    optimal = analytic.barni_optimal(n)
    delta_star = optimal.delta_star
    if not 0 < grid_step <= 1.0 - delta_star:
        raise ValueError(
            f"grid_step must lie in (0, {1.0 - delta_star:.6f}] for n={n}, got {grid_step}"
        )

    m = analytic.mukherjee_min_on_sphere(n)
    # D_M / delta* errors follow from the cached D_M values, one evaluation per point
    store = {"mukherjee": []}
    reports = converge_many(
        {"mukherjee": norms.mukherjee_norm}, cfg, epsilon, initial_samples, cap,
        mre_theoretical={"mukherjee": max(1.0 / delta_star - 1.0, 1.0 - m / delta_star)},
        workers=workers, value_store=store, error_scale={"mukherjee": delta_star},
    )
    at_star = reports["mukherjee"]
    values = np.concatenate(store["mukherjee"])

    delta_hat, mre_hat = search_delta(values, delta_star, grid_step)
    are_hat = float(np.mean(np.abs(values / delta_hat - 1.0)))
    logger.info(
        f"📊 n={n}: delta*={delta_star:.6f}, delta_hat={delta_hat:.6f}, "
        f"MRE={mre_hat:.6f}, ARE={are_hat:.6f} over {values.size:,} points"
    )

    result = CalibrationResult(
        n=n, delta_hat=delta_hat, delta_star=delta_star, objective=mre_hat,
        are=are_hat, samples_used=int(values.size), seed=cfg.seed,
    )
    return at_star, result


def grid_search_delta(
    n: int,
    grid_step: float,
    cfg: SamplerConfig,
    epsilon: float = DEFAULT_EPSILON,
    initial_samples: int = INITIAL_SAMPLES,
    cap: int = SAMPLE_CAP,
    workers: int = 1,
) -> CalibrationResult:
    """
    Scale delta-hat in [delta*, 1] minimizing the empirical MRE of D_M / delta
    The sample set is the one converged at delta*; D_M is evaluated once per point
    """
    if cfg.dim != n:
        raise ValueError(f"Sampler dimension {cfg.dim} does not match n={n}")
    _, result = _delta_scan(n, grid_step, cfg, epsilon, initial_samples, cap, workers)
    return result


# =============================================================================
# TABLE ROWS
# =============================================================================

def table2_row(
    n: int,
    cfg: SamplerConfig,
    epsilon: float = DEFAULT_EPSILON,
    initial_samples: int = INITIAL_SAMPLES,
    cap: int = SAMPLE_CAP,
    calibration_samples: int = SEOL_CHEUN_SAMPLES,
    workers: int = 1,
) -> Table2Row:
    """ARE/MRE of D_ab, D_B, D_M-hat (delta*) and D_M over one shared converged sample set"""
    if n < 2:
        raise ValueError(f"Table rows start at n=2, got {n}")
    if cfg.dim != n:
        raise ValueError(f"Sampler dimension {cfg.dim} does not match n={n}")

    calibration = calibrate_seol_cheun(n, calibration_samples, cfg)
    a, b = calibration.a, calibration.b
    optimal = analytic.barni_optimal(n)
    delta_star = optimal.delta_star
    spec = optimal.spec
    m = analytic.mukherjee_min_on_sphere(n)

    evaluators = {
        "seol_cheun": lambda x: norms.dinf_d1_combination(x, a, b),
        "barni": lambda x: norms.barni_norm(x, spec),
        "normalized_mukherjee": lambda x: norms.normalized_mukherjee_norm(x, delta_star),
        "mukherjee": norms.mukherjee_norm,
    }
    theoretical = {
        "barni": optimal.mre,
        "normalized_mukherjee": max(1.0 / delta_star - 1.0, 1.0 - m / delta_star),
        "mukherjee": analytic.mukherjee_mre_theoretical(n),
    }
    # flagged fits are still measured, just without a supremum
    if a > 0 and b > 0:
        theoretical["seol_cheun"] = analytic.seol_cheun_mre_theoretical(n, a, b)
    reports = converge_many(evaluators, cfg, epsilon, initial_samples, cap, theoretical, workers)
    return Table2Row(n=n, calibration=calibration, **reports)


def table3_row(
    n: int,
    cfg: SamplerConfig,
    grid_step: float,
    epsilon: float = DEFAULT_EPSILON,
    initial_samples: int = INITIAL_SAMPLES,
    cap: int = SAMPLE_CAP,
    workers: int = 1,
) -> Table3Row:
    """D_M-hat at delta* and at the grid-searched delta-hat"""
    if n < 2:
        raise ValueError(f"Table rows start at n=2, got {n}")
    if cfg.dim != n:
        raise ValueError(f"Sampler dimension {cfg.dim} does not match n={n}")
    at_star, result = _delta_scan(n, grid_step, cfg, epsilon, initial_samples, cap, workers)
    return Table3Row(
        n=n,
        delta_star=result.delta_star,
        at_delta_star=at_star,
        delta_hat=result.delta_hat,
        are_hat=result.are,
        mre_hat=result.objective,
        samples_used=result.samples_used,
    )
