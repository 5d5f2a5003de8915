"""
Benchmark Harness - Operation counting and throughput measurement for every norm
Features: tallying numeric wrapper, straight-line reference kernels, median-of-trials timing

Reference kernels are written once and run either on plain floats or on Tallied
values; both runs perform the same float operations in the same order.
"""
import heapq
import logging
import math
import statistics
import time
from dataclasses import dataclass, asdict
from functools import singledispatch
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

import analytic
import norms
from models import BenchResult, OpCount
from norms import UnknownNormError

logger = logging.getLogger(__name__)

# Placeholder Seol-Cheun parameters for counting and timing (values do not affect cost)
BENCH_A = 0.9
BENCH_B = 0.3

# Comparison budget for sorting norms: C * n * log2(n) + n
SORT_COMPARISON_FACTOR = 2


@dataclass
class OpTally:
    abs: int = 0
    comp: int = 0
    add: int = 0
    mult: int = 0
    sqrt: int = 0


class Tallied:
    """Float wrapper that counts every arithmetic operation into a shared tally"""
    __slots__ = ("value", "tally")

    def __init__(self, value: float, tally: OpTally):
        self.value = float(value)
        self.tally = tally

    @staticmethod
    def _raw(other):
        return other.value if isinstance(other, Tallied) else other

    def __add__(self, other):
        self.tally.add += 1
        return Tallied(self.value + self._raw(other), self.tally)

    def __radd__(self, other):
        self.tally.add += 1
        return Tallied(self._raw(other) + self.value, self.tally)

    def __mul__(self, other):
        self.tally.mult += 1
        return Tallied(self.value * self._raw(other), self.tally)

    def __rmul__(self, other):
        self.tally.mult += 1
        return Tallied(self._raw(other) * self.value, self.tally)

    def __abs__(self):
        self.tally.abs += 1
        return Tallied(abs(self.value), self.tally)

    def __lt__(self, other):
        self.tally.comp += 1
        return self.value < self._raw(other)

    def __gt__(self, other):
        self.tally.comp += 1
        return self.value > self._raw(other)

    def __float__(self):
        return self.value

    def __repr__(self):
        return f"Tallied({self.value!r})"


@singledispatch
def sqrt(v):
    return math.sqrt(v)


@sqrt.register
def _(v: Tallied):
    v.tally.sqrt += 1
    return Tallied(math.sqrt(v.value), v.tally)


# =============================================================================
# REFERENCE KERNELS
# =============================================================================

def kernel_dinf(x):
    best = abs(x[0])
    for v in x[1:]:
        a = abs(v)
        if a > best:
            best = a
    return best


def kernel_d1(x):
    total = abs(x[0])
    for v in x[1:]:
        total = total + abs(v)
    return total


def kernel_d2_squared(x):
    total = x[0] * x[0]
    for v in x[1:]:
        total = total + v * v
    return total


def kernel_d2(x):
    return sqrt(kernel_d2_squared(x))


def kernel_seol_cheun(x, a, b):
    # max and sum share the absolute values
    best = abs(x[0])
    total = best
    for v in x[1:]:
        m = abs(v)
        if m > best:
            best = m
        total = total + m
    return a * best + b * total


def kernel_seol_cheun_sq(x, a, b):
    r = kernel_seol_cheun(x, a, b)
    return r * r


def kernel_weighted_d1(x, weights):
    ordered = sorted((abs(v) for v in x), reverse=True)
    total = ordered[0] * weights[0]
    for o, w in zip(ordered[1:], weights[1:]):
        total = total + o * w
    return total


def kernel_mukherjee(x, inv_sqrt):
    ordered = sorted((abs(v) for v in x), reverse=True)
    prefix = ordered[0]
    best = prefix * inv_sqrt[0]
    for o, c in zip(ordered[1:], inv_sqrt[1:]):
        prefix = prefix + o
        candidate = prefix * c
        if candidate > best:
            best = candidate
    return best


def kernel_tcost(x, t):
    top = heapq.nlargest(t, [abs(v) for v in x])
    total = top[0]
    for v in top[1:]:
        total = total + v
    return total


def _kernel_for(name: str, n: int) -> Callable:
    key = name.replace("-", "_").lower()
    if key == "dinf":
        return kernel_dinf
    if key == "d1":
        return kernel_d1
    if key == "d2":
        return kernel_d2
    if key == "d2_squared":
        return kernel_d2_squared
    if key == "seol_cheun":
        return lambda x: kernel_seol_cheun(x, BENCH_A, BENCH_B)
    if key == "seol_cheun_sq":
        return lambda x: kernel_seol_cheun_sq(x, BENCH_A, BENCH_B)
    if key == "barni":
        weights = [float(w) for w in norms.barni_spec(n).weights]
        return lambda x: kernel_weighted_d1(x, weights)
    if key == "mukherjee":
        inv_sqrt = [float(c) for c in norms.inverse_sqrt_table(n)]
        return lambda x: kernel_mukherjee(x, inv_sqrt)
    if key == "tcost":
        return lambda x: kernel_tcost(x, bench_t(n))
    raise UnknownNormError(f"No counting kernel for norm '{name}'. Known: {', '.join(BENCH_NORMS)}")


BENCH_NORMS = ("dinf", "d1", "d2", "d2_squared", "seol_cheun", "seol_cheun_sq",
               "barni", "mukherjee", "tcost")
SORTING_NORMS = ("barni", "mukherjee")


def bench_t(n: int) -> int:
    return max(1, n // 2)


def bench_params(name: str, n: int) -> dict:
    """Parameters that make a registry norm match its counting kernel"""
    key = name.replace("-", "_").lower()
    if key in ("seol_cheun", "seol_cheun_sq"):
        return {"a": BENCH_A, "b": BENCH_B}
    if key == "tcost":
        return {"t": bench_t(n)}
    return {}


# =============================================================================
# OPERATION COUNTING
# =============================================================================

def evaluate_kernel(name: str, x: Sequence[float], instrumented: bool = False) -> Tuple[float, Optional[OpCount]]:
    """Run the reference kernel on plain floats or on tallied values"""
    n = len(x)
    kernel = _kernel_for(name, n)
    if not instrumented:
        return float(kernel([float(v) for v in x])), None

    tally = OpTally()
    result = kernel([Tallied(v, tally) for v in x])
    return float(result), OpCount(norm=name, n=n, **asdict(tally))


def count_ops(name: str, n: int, seed: int = 0) -> OpCount:
    """Tallied operations of one evaluation on a random Gaussian input"""
    if n < 1:
        raise ValueError(f"Dimension must be >= 1, got {n}")
    x = np.random.default_rng(seed).standard_normal(n)
    _, counts = evaluate_kernel(name, x.tolist(), instrumented=True)
    logger.debug(f"🔢 {name} n={n}: {counts.model_dump()}")
    return counts


def sort_comparison_bound(n: int) -> float:
    return SORT_COMPARISON_FACTOR * n * math.log2(n) + n


# =============================================================================
# TIMING
# =============================================================================

def _median_seconds(evaluator: Callable, inputs: np.ndarray, trials: int) -> float:
    timings = []
    sink = 0.0
    for _ in range(trials):
        start = time.perf_counter()
        out = evaluator(inputs)
        timings.append(time.perf_counter() - start)
        sink += float(out[-1])
    logger.debug(f"🕳️  sink={sink!r}")
    return statistics.median(timings)


def run_bench(name: str, n: int, trials: int = 10, batch: int = 100_000,
              seed: int = 0) -> BenchResult:
    """
    Median throughput of batched evaluation over pre-generated Gaussian inputs
    Input generation is excluded from the timings; d2 is timed on the same inputs
    """
    if trials < 3:
        raise ValueError(f"Need at least 3 trials, got {trials}")
    if batch < 1:
        raise ValueError(f"Batch must be >= 1, got {batch}")

    evaluator = norms.make_norm(name, n, **bench_params(name, n))
    inputs = np.random.default_rng(seed).standard_normal((batch, n))

    seconds = _median_seconds(evaluator, inputs, trials)
    evals_per_sec = batch / max(seconds, 1e-12)

    if name.replace("-", "_").lower() == "d2":
        relative = 1.0
    else:
        d2_seconds = _median_seconds(norms.d2, inputs, trials)
        relative = evals_per_sec / (batch / max(d2_seconds, 1e-12))

    logger.info(f"⏱️  {name} n={n}: {evals_per_sec:,.0f} evals/s ({relative:.2f}x d2)")
    return BenchResult(
        norm=name, n=n, evals_per_sec=evals_per_sec, relative_to_d2=relative,
        trials=trials, batch=batch,
    )


def bench_suite(names: Sequence[str], dims: Sequence[int], trials: int = 10,
                batch: int = 100_000, seed: int = 0) -> List[Tuple[OpCount, BenchResult]]:
    """Counts and timings for every (norm, n) pair, single-threaded"""
    rows = []
    for n in dims:
        for name in names:
            rows.append((count_ops(name, n, seed), run_bench(name, n, trials, batch, seed)))
    return rows
