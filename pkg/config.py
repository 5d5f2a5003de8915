"""
normlab configuration - environment overrides and reproduction defaults
Features: .env loading, seed/worker/batch overrides, reproduction defaults
"""
import os
import logging

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

__version__ = "1.0.0"

# Environment configuration
DEFAULT_SEED = int(os.getenv("NORMLAB_SEED", "42"))
LOG_LEVEL = os.getenv("NORMLAB_LOG_LEVEL", "INFO").upper()
WORKERS = max(1, int(os.getenv("NORMLAB_WORKERS", "1")))
BATCH_SIZE = int(os.getenv("NORMLAB_BATCH_SIZE", str(2**16)))

# Error estimation defaults (doubling scheme starting at 2^20 points)
DEFAULT_EPSILON = 1e-5
INITIAL_SAMPLES = 2**20
SAMPLE_CAP = 2**28
DEFAULT_GRID_STEP = 1e-6
SEOL_CHEUN_SAMPLES = 100_000

# Fast mode for CI runs
FAST_EPSILON = 1e-4
FAST_INITIAL_SAMPLES = 2**16

DEFAULT_DIMS = tuple(range(2, 9))
MAX_TABLE_DIM = 64
FIGURE1_N_MAX = 100

# Literature values for the integer-grid columns of Table 2 (percent ARE, MRE_e)
LITERATURE_ZN = {
    2: (2.40, 7.61),
    3: (3.63, 11.35),
    4: (4.29, 13.75),
    5: (4.65, 15.46),
    6: (4.85, 16.79),
    7: (5.00, 17.86),
    8: (5.04, 18.75),
}


def log_settings():
    """Log the active configuration at DEBUG level"""
    logger.debug(
        f"⚙️  normlab {__version__} - seed={DEFAULT_SEED}, workers={WORKERS}, "
        f"batch_size={BATCH_SIZE}, log_level={LOG_LEVEL}"
    )
