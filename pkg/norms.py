"""
Norm Evaluators - Exact and approximate Euclidean norms over sorted absolute components
Features: batched (..., n) evaluation, shared sorted-prefix kernel, name registry

Every evaluator reduces over the last axis: a 1-D vector gives a scalar, an
(N, n) batch gives N values.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Dict, Sequence, Union

import numpy as np

import analytic
from models import SortedAbsProfile, WeightedD1Spec

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence[float]]
NormEvaluator = Callable[[np.ndarray], np.ndarray]


class UnknownNormError(KeyError):
    """Raised for a norm name missing from the registry"""


def as_vector(x: ArrayLike) -> np.ndarray:
    """
    Validate a vector (or a batch of vectors along the last axis)
    - float64, at least one component, every component finite
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        raise ValueError("A vector needs at least one axis")
    if arr.shape[-1] < 1:
        raise ValueError("A vector needs at least one component")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Vector components must be finite (no NaN or infinity)")
    return arr


def _sorted_desc(arr: np.ndarray) -> np.ndarray:
    return np.sort(np.abs(arr), axis=-1)[..., ::-1]


@lru_cache(maxsize=None)
def inverse_sqrt_table(n: int) -> np.ndarray:
    """Read-only constants 1/sqrt(t) for t = 1..n"""
    table = 1.0 / np.sqrt(np.arange(1, n + 1, dtype=np.float64))
    table.flags.writeable = False
    return table


# =============================================================================
# SHARED KERNEL
# =============================================================================

def sorted_abs_profile(x: ArrayLike) -> SortedAbsProfile:
    """Sorted absolute components x_(1) >= ... >= x_(n) and their prefix sums"""
    arr = as_vector(x)
    ordered = _sorted_desc(arr)
    return SortedAbsProfile(ordered=ordered, prefix=np.cumsum(ordered, axis=-1))


# =============================================================================
# MINKOWSKI NORMS
# =============================================================================

def d1(x: ArrayLike) -> np.ndarray:
    """City-block norm"""
    return np.sum(np.abs(as_vector(x)), axis=-1)


def d2(x: ArrayLike) -> np.ndarray:
    """Euclidean norm"""
    arr = as_vector(x)
    return np.sqrt(np.sum(arr * arr, axis=-1))


def d2_squared(x: ArrayLike) -> np.ndarray:
    arr = as_vector(x)
    return np.sum(arr * arr, axis=-1)


def dinf(x: ArrayLike) -> np.ndarray:
    """Chessboard norm"""
    return np.max(np.abs(as_vector(x)), axis=-1)


def lp_norm(x: ArrayLike, p: float) -> np.ndarray:
    """
    Minkowski norm (sum |x_i|^p)^(1/p)
    p = 1, 2 and infinity dispatch to d1, d2 and dinf
    """
    if not p >= 1:
        raise ValueError(f"p must be >= 1 for a norm, got {p}")
    if p == 1:
        return d1(x)
    if p == 2:
        return d2(x)
    if math.isinf(p):
        return dinf(x)

    arr = np.abs(as_vector(x))
    # Scale by the max component to keep |x|^p in range
    peak = np.max(arr, axis=-1, keepdims=True)
    safe = np.where(peak > 0, peak, 1.0)
    total = np.sum((arr / safe) ** p, axis=-1) ** (1.0 / p)
    return total * np.squeeze(safe, axis=-1)


# =============================================================================
# T-COST FAMILY
# =============================================================================

def _check_t(t: int, n: int):
    if not isinstance(t, (int, np.integer)) or isinstance(t, bool):
        raise ValueError(f"t must be an integer, got {t!r}")
    if not 1 <= t <= n:
        raise ValueError(f"t must lie in [1, {n}], got {t}")


def tcost_norm(x: ArrayLike, t: int) -> np.ndarray:
    """
    Sum of the t largest absolute components
    Partial selection of the top t, then the same ordered summation as the full profile
    """
    arr = np.abs(as_vector(x))
    n = arr.shape[-1]
    _check_t(t, n)

    if t < n:
        top = -np.partition(-arr, t - 1, axis=-1)[..., :t]
    else:
        top = arr
    top = np.sort(top, axis=-1)[..., ::-1]
    return np.cumsum(top, axis=-1)[..., -1]


def weighted_tcost_norm(x: ArrayLike, w: ArrayLike) -> np.ndarray:
    """max over t of w_t * D_t(x)"""
    arr = as_vector(x)
    weights = np.asarray(w, dtype=np.float64)
    n = arr.shape[-1]
    if weights.shape != (n,):
        raise ValueError(f"Expected {n} weights, got shape {weights.shape}")
    if np.any(weights < 0):
        raise ValueError("Weighted t-cost weights must be non-negative")

    prefix = np.cumsum(_sorted_desc(arr), axis=-1)
    return np.max(prefix * weights, axis=-1)


def mukherjee_norm(x: ArrayLike) -> np.ndarray:
    """Weighted t-cost norm with w_t = 1/sqrt(t), one max-scan over the prefix sums"""
    arr = as_vector(x)
    prefix = np.cumsum(_sorted_desc(arr), axis=-1)
    return np.max(prefix * inverse_sqrt_table(arr.shape[-1]), axis=-1)


def normalized_mukherjee_norm(x: ArrayLike, delta: float) -> np.ndarray:
    """D_M(x) / delta"""
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return mukherjee_norm(x) / delta


# =============================================================================
# WEIGHTED D1 FAMILY
# =============================================================================

def weighted_d1_norm(x: ArrayLike, spec: WeightedD1Spec) -> np.ndarray:
    """sum_i w_i x_(i) over the sorted absolute components"""
    arr = as_vector(x)
    if spec.dim != arr.shape[-1]:
        raise ValueError(f"Spec has {spec.dim} weights for a {arr.shape[-1]}-D vector")
    return np.sum(_sorted_desc(arr) * spec.weights, axis=-1)


def barni_norm(x: ArrayLike, spec: WeightedD1Spec) -> np.ndarray:
    """delta * sum alpha_i x_(i), with delta folded into the spec weights"""
    return weighted_d1_norm(x, spec)


def barni_spec(n: int) -> WeightedD1Spec:
    """Minimax-optimal Barni weights for dimension n"""
    return analytic.barni_optimal(n).spec


def dinf_d1_combination(x: ArrayLike, a: float, b: float) -> np.ndarray:
    """a * D_inf(x) + b * D_1(x) without parameter checks"""
    arr = np.abs(as_vector(x))
    return a * np.max(arr, axis=-1) + b * np.sum(arr, axis=-1)


def seol_cheun_norm(x: ArrayLike, a: float, b: float) -> np.ndarray:
    """a * D_inf(x) + b * D_1(x) for a, b > 0"""
    if not (a > 0 and b > 0):
        raise ValueError(f"Seol-Cheun parameters must be positive, got a={a}, b={b}")
    return dinf_d1_combination(x, a, b)


def seol_cheun_squared(x: ArrayLike, a: float, b: float) -> np.ndarray:
    """Squared-norm approximation at the cost of one extra multiplication"""
    v = seol_cheun_norm(x, a, b)
    return v * v


def seol_cheun_spec(n: int, a: float, b: float) -> WeightedD1Spec:
    """Weighted-D1 form: w_1 = a + b, w_i = b otherwise"""
    weights = np.full(n, b, dtype=np.float64)
    weights[0] = a + b
    return WeightedD1Spec(weights=weights)


# =============================================================================
# DIGITAL GEOMETRY
# =============================================================================

def rosenfeld_pfaltz_2d(x: ArrayLike) -> np.ndarray:
    """max(floor(2 (D_1(x) + 1) / 3), D_inf(x)) for 2-D vectors; floor applied literally"""
    arr = as_vector(x)
    if arr.shape[-1] != 2:
        raise ValueError(f"Rosenfeld-Pfaltz distance is 2-D only, got n={arr.shape[-1]}")
    a = np.abs(arr)
    return np.maximum(np.floor(2.0 * (np.sum(a, axis=-1) + 1.0) / 3.0), np.max(a, axis=-1))


# =============================================================================
# REGISTRY
# =============================================================================

def _require(params: dict, *keys):
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        raise ValueError(f"Missing norm parameter(s): {', '.join(missing)}")


def _build_lp(n, params):
    _require(params, "p")
    return lambda x: lp_norm(x, params["p"])


def _build_tcost(n, params):
    _require(params, "t")
    _check_t(params["t"], n)
    return lambda x: tcost_norm(x, params["t"])


def _build_weighted_tcost(n, params):
    _require(params, "w")
    return lambda x: weighted_tcost_norm(x, params["w"])


def _build_barni(n, params):
    spec = params.get("spec") or barni_spec(n)
    return lambda x: barni_norm(x, spec)


def _seol_cheun_params(params: dict):
    _require(params, "a", "b")
    a, b = params["a"], params["b"]
    if not (a > 0 and b > 0):
        raise ValueError(f"Seol-Cheun parameters must be positive, got a={a}, b={b}")
    return a, b


def _build_seol_cheun(n, params):
    a, b = _seol_cheun_params(params)
    return lambda x: seol_cheun_norm(x, a, b)


def _build_seol_cheun_sq(n, params):
    a, b = _seol_cheun_params(params)
    return lambda x: seol_cheun_squared(x, a, b)


def _build_normalized_mukherjee(n, params):
    delta = params.get("delta")
    if delta is None:
        delta = analytic.barni_optimal(n).delta_star
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    return lambda x: normalized_mukherjee_norm(x, delta)


def _build_rosenfeld_pfaltz(n, params):
    if n != 2:
        raise ValueError(f"Rosenfeld-Pfaltz distance is 2-D only, got n={n}")
    return rosenfeld_pfaltz_2d


_BUILDERS: Dict[str, Callable] = {
    "d1": lambda n, p: d1,
    "d2": lambda n, p: d2,
    "dinf": lambda n, p: dinf,
    "d2_squared": lambda n, p: d2_squared,
    "lp": _build_lp,
    "tcost": _build_tcost,
    "mukherjee": lambda n, p: mukherjee_norm,
    "weighted_tcost": _build_weighted_tcost,
    "normalized_mukherjee": _build_normalized_mukherjee,
    "barni": _build_barni,
    "seol_cheun": _build_seol_cheun,
    "seol_cheun_sq": _build_seol_cheun_sq,
    "rosenfeld_pfaltz": _build_rosenfeld_pfaltz,
}

NORM_NAMES = tuple(_BUILDERS)


def make_norm(name: str, n: int, **params) -> NormEvaluator:
    """
    Build a batched evaluator for a named norm at dimension n
    Parameter defaults: barni uses the optimal spec, normalized_mukherjee uses delta*
    """
    key = name.replace("-", "_").lower()
    if key not in _BUILDERS:
        raise UnknownNormError(f"Unknown norm '{name}'. Known: {', '.join(NORM_NAMES)}")
    if n < 1:
        raise ValueError(f"Dimension must be >= 1, got {n}")
    evaluator = _BUILDERS[key](n, params)
    logger.debug(f"🔧 Built norm '{key}' for n={n} with {params}")
    return evaluator
