"""
Closed-form parameters and theoretical maximum relative errors
Features: minimax-optimal Barni weights, weighted t-cost, t-cost and a*D_inf + b*D_1 MRE formulas
"""
import math
from functools import lru_cache

import numpy as np

from models import BarniOptimal


def _check_dim(n: int):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError(f"Dimension must be an integer >= 1, got {n!r}")


@lru_cache(maxsize=None)
def _alpha(n: int) -> np.ndarray:
    # sqrt(i) - sqrt(i-1) rewritten without cancellation
    i = np.arange(1, n + 1, dtype=np.float64)
    alpha = 1.0 / (np.sqrt(i) + np.sqrt(i - 1.0))
    alpha.flags.writeable = False
    return alpha


@lru_cache(maxsize=None)
def alpha_square_sum(n: int) -> float:
    """S = sum of alpha*_i^2, shared by both closed forms"""
    _check_dim(n)
    return math.fsum(float(a) * float(a) for a in _alpha(n))


def barni_alpha(n: int) -> np.ndarray:
    """alpha*_i = sqrt(i) - sqrt(i - 1), i = 1..n"""
    _check_dim(n)
    return _alpha(n)


def barni_optimal(n: int) -> BarniOptimal:
    """
    Minimax-optimal Barni parameters
    delta* = 2 / (1 + sqrt(S)), MRE = 1 - delta*; n = 1 gives delta* = 1, MRE = 0
    """
    _check_dim(n)
    delta_star = 2.0 / (1.0 + math.sqrt(alpha_square_sum(n)))
    return BarniOptimal(n=n, alpha=_alpha(n), delta_star=delta_star, mre=1.0 - delta_star)


def mukherjee_min_on_sphere(n: int) -> float:
    """Minimum of the weighted t-cost norm (w_t = 1/sqrt(t)) on the unit sphere"""
    _check_dim(n)
    return 1.0 / math.sqrt(alpha_square_sum(n))


def mukherjee_mre_theoretical(n: int) -> float:
    """1 - 1/sqrt(S); the norm never overestimates, so the minimum sets the MRE"""
    return 1.0 - mukherjee_min_on_sphere(n)


def tcost_mre_theoretical(n: int, t: int) -> float:
    """max(sqrt(t) - 1, 1 - t/sqrt(n))"""
    _check_dim(n)
    if not isinstance(t, (int, np.integer)) or isinstance(t, bool) or not 1 <= t <= n:
        raise ValueError(f"t must be an integer in [1, {n}], got {t!r}")
    return max(math.sqrt(t) - 1.0, 1.0 - t / math.sqrt(n))


def minimax_delta(n: int) -> float:
    """Scale (1 + m)/2 balancing over- and underestimate of D_M / delta"""
    return 0.5 * (1.0 + mukherjee_min_on_sphere(n))


def weighted_d1_extremes(weights) -> tuple:
    """
    (min, max) on the unit sphere of sum_i w_i x_(i) for non-increasing w >= 0
    min over the k-equal vertices (1,..,1,0,..,0)/sqrt(k) is prefix_k / sqrt(k); max is ||w||
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0 or np.any(w < 0) or np.any(np.diff(w) > 0):
        raise ValueError("Weights must be a non-empty, non-negative, non-increasing sequence")
    k = np.arange(1, w.size + 1, dtype=np.float64)
    low = float(np.min(np.cumsum(w) / np.sqrt(k)))
    high = float(np.sqrt(np.sum(w * w)))
    return low, high


def seol_cheun_mre_theoretical(n: int, a: float, b: float) -> float:
    """Supremum of |a D_inf + b D_1 - 1| on the unit sphere, a, b > 0"""
    _check_dim(n)
    if not (a > 0 and b > 0):
        raise ValueError(f"Seol-Cheun parameters must be positive, got a={a}, b={b}")
    weights = np.full(n, b, dtype=np.float64)
    weights[0] = a + b
    low, high = weighted_d1_extremes(weights)
    return max(high - 1.0, 1.0 - low)
