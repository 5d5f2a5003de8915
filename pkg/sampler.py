"""
Sphere Sampler - Reproducible Gaussian and unit-hypersphere batches

Streams: numpy Philox4x64-10 (counter-based) keyed by
SeedSequence(seed, spawn_key=(dim, stream, batch_index)); Gaussian transform is
numpy's ziggurat (Generator.standard_normal). Pinned via requirements.txt so
batches are bit-identical across platforms and worker schedules.
"""
import logging
from typing import Iterator, Literal

import numpy as np

from models import SampleBatch, SamplerConfig

logger = logging.getLogger(__name__)

SAMPLER_ALGORITHM = "philox4x64-10/ziggurat/v1"

# Gaussian vectors shorter than this are redrawn before normalization
MIN_GAUSSIAN_NORM = 1e-150

_STREAMS = {"gaussian": 0, "sphere": 1}


def batch_generator(cfg: SamplerConfig, batch_index: int,
                    kind: Literal["sphere", "gaussian"]) -> np.random.Generator:
    """Independent substream for one (seed, dim, kind, batch index)"""
    if batch_index < 0:
        raise ValueError(f"Batch index must be >= 0, got {batch_index}")
    seq = np.random.SeedSequence(cfg.seed, spawn_key=(cfg.dim, _STREAMS[kind], batch_index))
    return np.random.Generator(np.random.Philox(seq))


def sample_gaussian(cfg: SamplerConfig, batch_index: int) -> SampleBatch:
    """batch_size vectors with iid N(0, 1) components"""
    rng = batch_generator(cfg, batch_index, "gaussian")
    points = rng.standard_normal((cfg.batch_size, cfg.dim))
    return SampleBatch(points=points, kind="gaussian", batch_index=batch_index)


def sample_unit_sphere(cfg: SamplerConfig, batch_index: int) -> SampleBatch:
    """
    Uniform points on the unit hypersphere by normalizing Gaussian vectors
    Near-zero Gaussian vectors are redrawn from the same substream
    """
    rng = batch_generator(cfg, batch_index, "sphere")
    points = rng.standard_normal((cfg.batch_size, cfg.dim))
    lengths = np.sqrt(np.sum(points * points, axis=1))

    tiny = lengths < MIN_GAUSSIAN_NORM
    while np.any(tiny):
        count = int(np.count_nonzero(tiny))
        logger.debug(f"🔄 Redrawing {count} near-zero Gaussian vectors in batch {batch_index}")
        points[tiny] = rng.standard_normal((count, cfg.dim))
        lengths[tiny] = np.sqrt(np.sum(points[tiny] * points[tiny], axis=1))
        tiny = lengths < MIN_GAUSSIAN_NORM

    points /= lengths[:, None]
    return SampleBatch(points=points, kind="sphere", batch_index=batch_index)


def iter_batches(cfg: SamplerConfig, start: int, stop: int,
                 kind: Literal["sphere", "gaussian"] = "sphere") -> Iterator[SampleBatch]:
    """Batches start..stop-1 in index order"""
    sample = sample_unit_sphere if kind == "sphere" else sample_gaussian
    for index in range(start, stop):
        yield sample(cfg, index)


def gaussian_sample(cfg: SamplerConfig, count: int) -> np.ndarray:
    """First `count` Gaussian vectors of the stream, concatenated across batches"""
    if count < 1:
        raise ValueError(f"Sample count must be >= 1, got {count}")
    n_batches = -(-count // cfg.batch_size)
    points = np.concatenate([b.points for b in iter_batches(cfg, 0, n_batches, "gaussian")])
    return points[:count]
