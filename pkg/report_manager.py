"""
Report Manager - CSV output with embedded run manifests, vector-file input
Features: RFC-4180 CSV with '#' manifest header, JSON sidecar manifest, table row formatting
"""
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np

from config import LITERATURE_ZN
from models import (
    BenchResult, CalibrationResult, OpCount, RunManifest, Table2Row, Table3Row
)

logger = logging.getLogger(__name__)

TABLE2_COLUMNS = [
    "n", "dab_are", "dab_mre_e", "db_are", "db_mre_e", "db_mre_t",
    "dmhat_are", "dmhat_mre_e", "dm_are", "dm_mre_e", "dm_zn_are", "dm_zn_mre_e", "dm_mre_t",
]
TABLE3_COLUMNS = [
    "n", "dstar_are", "dstar_mre_e", "delta_star", "dhat_are", "dhat_mre_e", "delta_hat",
]
FIGURE1_COLUMNS = ["n", "mre_dm", "mre_db"]
FIGURE1_TCOST_COLUMNS = ["mre_t1", "mre_tn"]
SEOL_CHEUN_COLUMNS = ["n", "a", "b", "objective", "residual", "samples_used", "seed"]
DELTA_COLUMNS = ["n", "delta_star", "delta_hat", "mre_e", "are", "samples_used", "seed"]
BENCH_COLUMNS = [
    "norm", "n", "abs", "comp", "add", "mult", "sqrt",
    "evals_per_sec", "relative_to_d2", "trials", "batch",
]
EVAL_COLUMNS = ["norm", "value"]


class VectorFileError(ValueError):
    """Malformed vector text or vector file"""


# =============================================================================
# CELL FORMATTING
# =============================================================================

def pct(value: float) -> str:
    """Fraction to percent, 2 decimals"""
    return f"{100.0 * value:.2f}"


def fmt_delta(value: float) -> str:
    return f"{value:.6f}"


def fmt_float(value: float) -> str:
    return repr(float(value))


def table2_cells(row: Table2Row) -> List[str]:
    zn = LITERATURE_ZN.get(row.n)
    zn_cells = [f"{zn[0]:.2f}", f"{zn[1]:.2f}"] if zn else ["", ""]
    return [
        str(row.n),
        pct(row.seol_cheun.are), pct(row.seol_cheun.mre_empirical),
        pct(row.barni.are), pct(row.barni.mre_empirical), pct(row.barni.mre_theoretical),
        pct(row.normalized_mukherjee.are), pct(row.normalized_mukherjee.mre_empirical),
        pct(row.mukherjee.are), pct(row.mukherjee.mre_empirical),
        *zn_cells,
        pct(row.mukherjee.mre_theoretical),
    ]


def table3_cells(row: Table3Row) -> List[str]:
    return [
        str(row.n),
        pct(row.at_delta_star.are), pct(row.at_delta_star.mre_empirical), fmt_delta(row.delta_star),
        pct(row.are_hat), pct(row.mre_hat), fmt_delta(row.delta_hat),
    ]


def seol_cheun_cells(result: CalibrationResult) -> List[str]:
    return [
        str(result.n), fmt_float(result.a), fmt_float(result.b), fmt_float(result.objective),
        fmt_float(result.residual), str(result.samples_used), str(result.seed),
    ]


def delta_cells(result: CalibrationResult) -> List[str]:
    return [
        str(result.n), fmt_delta(result.delta_star), fmt_delta(result.delta_hat),
        pct(result.objective), pct(result.are), str(result.samples_used), str(result.seed),
    ]


def bench_cells(counts: OpCount, timing: BenchResult) -> List[str]:
    return [
        counts.norm, str(counts.n), str(counts.abs), str(counts.comp), str(counts.add),
        str(counts.mult), str(counts.sqrt), f"{timing.evals_per_sec:.0f}",
        f"{timing.relative_to_d2:.3f}", str(timing.trials), str(timing.batch),
    ]


# =============================================================================
# CSV OUTPUT
# =============================================================================

class ReportManager:
    """
    Writes result tables as CSV
    - '#'-prefixed manifest header (reproducibility fields only)
    - full manifest with timestamp as a JSON sidecar next to --out files
    """

    def render(self, manifest: RunManifest, columns: Sequence[str],
               rows: Iterable[Sequence[str]]) -> str:
        buffer = io.StringIO(newline="")
        self._write(buffer, manifest, columns, rows)
        return buffer.getvalue()

    def _write(self, stream: TextIO, manifest: RunManifest, columns: Sequence[str],
               rows: Iterable[Sequence[str]]):
        for key, value in manifest.header_items():
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            stream.write(f"# {key}: {value}\r\n")
        writer = csv.writer(stream)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(row)

    def write(self, manifest: RunManifest, columns: Sequence[str],
              rows: Iterable[Sequence[str]], out: Optional[Path] = None) -> Optional[Path]:
        """Write to `out` (plus sidecar manifest) or to stdout"""
        text = self.render(manifest, columns, rows)
        if out is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return None

        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="", encoding="utf-8") as f:
            f.write(text)

        sidecar = self.sidecar_path(out)
        with open(sidecar, "w", encoding="utf-8") as f:
            json.dump(json.loads(manifest.model_dump_json()), f, indent=2)

        logger.info(f"📦 Wrote {out} ({out.stat().st_size:,} bytes) and {sidecar.name}")
        return out

    @staticmethod
    def sidecar_path(out: Path) -> Path:
        return out.with_name(out.name + ".manifest.json")


# =============================================================================
# VECTOR INPUT
# =============================================================================

def parse_vector(text: str) -> np.ndarray:
    """'3,-1,2' -> array([3., -1., 2.])"""
    parts = [p.strip() for p in text.strip().split(",")]
    if not parts or any(p == "" for p in parts):
        raise VectorFileError(f"Malformed vector '{text}'")
    try:
        values = np.array([float(p) for p in parts], dtype=np.float64)
    except ValueError:
        raise VectorFileError(f"Non-numeric component in vector '{text}'")
    if not np.all(np.isfinite(values)):
        raise VectorFileError(f"Non-finite component in vector '{text}'")
    return values


def load_vector_file(path: Path) -> List[np.ndarray]:
    """
    One comma-separated vector per line, UTF-8
    Blank lines and '#' comments are skipped
    """
    path = Path(path)
    if not path.exists():
        raise VectorFileError(f"Vector file not found: {path}")

    vectors = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            content = line.split("#", 1)[0].strip()
            if not content:
                continue
            try:
                vectors.append(parse_vector(content))
            except VectorFileError as e:
                raise VectorFileError(f"{path}:{lineno}: {e}")

    if not vectors:
        raise VectorFileError(f"No vectors in {path}")
    return vectors
