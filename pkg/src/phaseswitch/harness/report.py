"""Report files: per-slot CSV series, JSON summary and VUF surface CSV.

For a report of scenario ``A`` run with the ``dynamic`` strategy the files are
``A_dynamic.csv`` (columns :data:`SERIES_COLUMNS`), ``A_dynamic.json`` (the
summary, keys :data:`SUMMARY_FIELDS`) and ``A_dynamic_vuf_surface.csv``
(columns :data:`SURFACE_COLUMNS`).
"""

import json
import logging
import re
from pathlib import Path
from typing import List, Union

import pandas as pd

from phaseswitch.config import OutputFormat
from phaseswitch.exceptions import ReportError
from phaseswitch.harness.compare import ComparisonTable
from phaseswitch.harness.metrics import (
    SERIES_COLUMNS,
    SUMMARY_FIELDS,
    SURFACE_COLUMNS,
    MetricsReport,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

__all__ = [
    "SERIES_COLUMNS",
    "SUMMARY_FIELDS",
    "SURFACE_COLUMNS",
    "emit_comparison",
    "emit_report",
    "report_stem",
]


def report_stem(report: MetricsReport) -> str:
    """File name stem ``<scenario>_<strategy>_<selection>_k<budget>``.

    Characters unsafe in file names are replaced by ``-``, so runs that differ
    only in selection heuristic or switch budget write to distinct files.
    """
    stem = f"{report.scenario}_{report.strategy}_{report.selection}_k{report.budget}"
    return re.sub(r"[^A-Za-z0-9._-]+", "-", stem)


def _prepare(directory: PathLike) -> Path:
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ReportError(f"cannot create output directory: {e.strerror}", str(out)) from e
    return out


def _write_csv(frame: pd.DataFrame, path: Path) -> None:
    try:
        frame.to_csv(path, index=False, float_format="%.10g")
    except OSError as e:
        raise ReportError(f"cannot write CSV: {e.strerror}", str(path)) from e


def emit_report(
    report: MetricsReport,
    fmt: Union[OutputFormat, str] = OutputFormat.BOTH,
    directory: PathLike = ".",
) -> List[Path]:
    """Write the report files and return their paths.

    Raises:
        ReportError: The directory or a file cannot be written.
    """
    fmt = OutputFormat(fmt)
    out = _prepare(directory)
    stem = report_stem(report)
    written: List[Path] = []

    if fmt in (OutputFormat.CSV, OutputFormat.BOTH):
        series = pd.DataFrame([r.row() for r in report.series], columns=list(SERIES_COLUMNS))
        path = out / f"{stem}.csv"
        _write_csv(series, path)
        written.append(path)
        surface = pd.DataFrame([r.row() for r in report.surface], columns=list(SURFACE_COLUMNS))
        path = out / f"{stem}_vuf_surface.csv"
        _write_csv(surface, path)
        written.append(path)

    if fmt in (OutputFormat.JSON, OutputFormat.BOTH):
        path = out / f"{stem}.json"
        try:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(report.summary(), fh, indent=2)
                fh.write("\n")
        except OSError as e:
            raise ReportError(f"cannot write JSON: {e.strerror}", str(path)) from e
        written.append(path)

    logger.info("wrote %s", ", ".join(str(p) for p in written))
    return written


def emit_comparison(table: ComparisonTable, path: PathLike) -> Path:
    """Write a comparison table as CSV."""
    target = Path(path)
    _prepare(target.parent)
    _write_csv(table.to_frame(), target)
    return target
