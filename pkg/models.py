"""
Norm Lab Models - Validated data structures for norms, sampling, and error reports
Features: weight-vector validation, sampler determinism contract, report invariants
"""
from datetime import datetime
from typing import Literal, Optional, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# 64-bit unsigned seed range
MAX_SEED = 2**64 - 1


def _frozen_array(v) -> np.ndarray:
    """Convert to a read-only float64 array"""
    arr = np.array(v, dtype=np.float64)
    arr.flags.writeable = False
    return arr


class WeightedD1Spec(BaseModel):
    """
    Non-negative weights applied to the sorted absolute components
    Common representation of the Barni and Seol-Cheun norms
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray

    @field_validator('weights', mode='before')
    @classmethod
    def validate_weights(cls, v):
        arr = _frozen_array(v)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("Weights must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Weights must be finite")
        if np.any(arr < 0):
            raise ValueError(f"Weights must be non-negative, got min {arr.min():.6g}")
        return arr

    @property
    def dim(self) -> int:
        return int(self.weights.size)

    @property
    def is_norm(self) -> bool:
        """True iff w1 >= w2 >= ... >= wn > 0"""
        w = self.weights
        return bool(w[-1] > 0 and np.all(np.diff(w) <= 0))


class SortedAbsProfile(BaseModel):
    """Sorted absolute components (non-increasing) and their prefix sums"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ordered: np.ndarray
    prefix: np.ndarray

    @field_validator('ordered', 'prefix', mode='before')
    @classmethod
    def freeze(cls, v):
        return _frozen_array(v)


class BarniOptimal(BaseModel):
    """Minimax-optimal Barni parameters for one dimension"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int = Field(..., ge=1)
    alpha: np.ndarray
    delta_star: float = Field(..., gt=0, le=1)
    mre: float = Field(..., ge=0)

    @field_validator('alpha', mode='before')
    @classmethod
    def freeze(cls, v):
        return _frozen_array(v)

    @property
    def spec(self) -> WeightedD1Spec:
        """Weights w_i = delta* alpha*_i"""
        return WeightedD1Spec(weights=self.delta_star * self.alpha)


class SamplerConfig(BaseModel):
    """
    Sampling protocol for one dimension
    Same (dim, seed, batch index) always yields bit-identical batches
    """
    model_config = ConfigDict(frozen=True)

    dim: int = Field(..., ge=1, description="Dimension n")
    seed: int = Field(..., ge=0, le=MAX_SEED, description="64-bit unsigned seed")
    batch_size: int = Field(2**16, ge=1, description="Points per batch")


class SampleBatch(BaseModel):
    """A reproducible block of unit-sphere or Gaussian points"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray
    kind: Literal["sphere", "gaussian"]
    batch_index: int = Field(0, ge=0)

    @field_validator('points', mode='before')
    @classmethod
    def validate_points(cls, v):
        arr = _frozen_array(v)
        if arr.ndim != 2:
            raise ValueError(f"Sample batch must be 2-D (points x dim), got shape {arr.shape}")
        return arr

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])


class ErrorReport(BaseModel):
    """Converged empirical ARE/MRE (fractions, not percent)"""
    are: float = Field(..., ge=0)
    mre_empirical: float = Field(..., ge=0)
    mre_theoretical: Optional[float] = None
    samples_used: int = Field(..., ge=0)
    converged: bool
    epsilon: float = Field(..., gt=0)

    @model_validator(mode='after')
    def check_supremum(self):
        """A sample maximum cannot exceed the supremum"""
        if self.mre_theoretical is not None and self.mre_empirical > self.mre_theoretical + 1e-9:
            raise ValueError(
                f"Empirical MRE {self.mre_empirical:.12f} exceeds theoretical "
                f"{self.mre_theoretical:.12f}"
            )
        return self


class CalibrationResult(BaseModel):
    """Fitted Seol-Cheun (a, b) or grid-searched delta-hat"""
    n: int = Field(..., ge=1)
    a: Optional[float] = None
    b: Optional[float] = None
    delta_hat: Optional[float] = None
    delta_star: Optional[float] = None
    objective: float = Field(..., ge=0)
    are: Optional[float] = None
    residual: Optional[float] = None
    samples_used: int = Field(..., ge=0)
    seed: int
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode='after')
    def check_params(self):
        has_pair = self.a is not None and self.b is not None
        has_delta = self.delta_hat is not None
        if has_pair == has_delta:
            raise ValueError("Calibration carries either (a, b) or delta_hat, not both")
        if has_delta and self.delta_star is not None:
            if not (self.delta_star <= self.delta_hat <= 1.0):
                raise ValueError(
                    f"delta_hat {self.delta_hat} outside [{self.delta_star}, 1]"
                )
        return self


class Table2Row(BaseModel):
    """One dimension of the approximation comparison table (fractions)"""
    n: int = Field(..., ge=2)
    seol_cheun: ErrorReport
    barni: ErrorReport
    normalized_mukherjee: ErrorReport
    mukherjee: ErrorReport
    calibration: CalibrationResult


class Table3Row(BaseModel):
    """One dimension of the delta-scaling comparison table (fractions)"""
    n: int = Field(..., ge=2)
    delta_star: float
    at_delta_star: ErrorReport
    delta_hat: float
    are_hat: float
    mre_hat: float
    samples_used: int


class OpCount(BaseModel):
    """Tallied operations for one norm evaluation at dimension n"""
    norm: str
    n: int = Field(..., ge=1)
    abs: int = Field(0, ge=0)
    comp: int = Field(0, ge=0)
    add: int = Field(0, ge=0)
    mult: int = Field(0, ge=0)
    sqrt: int = Field(0, ge=0)


class BenchResult(BaseModel):
    """Median throughput of batched evaluation"""
    norm: str
    n: int = Field(..., ge=1)
    evals_per_sec: float = Field(..., gt=0)
    relative_to_d2: float = Field(..., gt=0)
    trials: int = Field(..., ge=3)
    batch: int = Field(..., ge=1)


class RunManifest(BaseModel):
    """Everything needed to reproduce an output file"""
    command: str
    dims: List[int] = Field(default_factory=list)
    seed: Optional[int] = None
    epsilon: Optional[float] = None
    grid_step: Optional[float] = None
    sample_cap: Optional[int] = None
    initial_samples: Optional[int] = None
    batch_size: Optional[int] = None
    calibration_samples: Optional[int] = None
    sampler: Optional[str] = None
    fast: bool = False
    version: str
    timestamp: datetime = Field(default_factory=datetime.utcnow)

    def header_items(self) -> List[tuple]:
        """Reproducibility fields for the CSV header (timestamp excluded)"""
        data = self.model_dump(exclude={"timestamp"}, exclude_none=True)
        if not data.get("dims"):
            data.pop("dims", None)
        return list(data.items())
