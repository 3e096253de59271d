"""Tabular diagnostics reports (CSV or JSON lines)."""
import logging
from typing import Iterable, Mapping, Optional

import pandas as pd

from ..config import REPORT_FORMATS
from ..exceptions import InvalidConfigurationError
from .convexity import ConvexityConstants
from .quality import PreconQuality

logger = logging.getLogger(__name__)


def diagnostics_row(
    quality: PreconQuality,
    constants: Optional[ConvexityConstants] = None,
    extra: Optional[Mapping[str, object]] = None,
) -> dict:
    """One report row: quality fields, then convexity fields prefixed by "convexity_"."""
    row = dict(extra or {})
    row.update(quality.to_dict())
    if constants is not None:
        row.update({f"convexity_{key}": value for key, value in constants.to_dict().items()})
    return row


def diagnostics_frame(rows: Iterable[Mapping[str, object]]) -> pd.DataFrame:
    return pd.DataFrame(list(rows))


def write_report(frame: pd.DataFrame, path: Optional[str] = None, fmt: str = "csv") -> str:
    """
    Serialize a report.

    Args:
        frame: Report rows
        path: Output file; when None the text is only returned
        fmt: "csv" or "jsonl"

    Returns:
        The serialized text
    """
    if fmt not in REPORT_FORMATS:
        raise InvalidConfigurationError(f"report format must be one of {REPORT_FORMATS}, got {fmt!r}")
    if fmt == "csv":
        text = frame.to_csv(index=False, float_format="%.12g")
    else:
        text = frame.to_json(orient="records", lines=True, double_precision=15)
        if text and not text.endswith("\n"):
            text += "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("Wrote %d diagnostics rows to %s", len(frame), path)
    return text
