import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

import pandas as pd
import structlog

from adff.schemas.report import ResultRow

logger = structlog.get_logger(__name__)

FLOAT_DECIMALS = 4
_TEXT_FIELDS = {"task", "variant", "mode", "fold"}


def _number(value: float) -> Union[int, float]:
    return int(value) if float(value).is_integer() else value


def _json_value(name: str, value: Any) -> Any:
    if value is None or name in _TEXT_FIELDS:
        return value
    if name in ("seg_len", "seg_num"):
        return _number(value)
    return round(float(value), FLOAT_DECIMALS)


def _csv_value(name: str, value: Any) -> str:
    if value is None:
        return ""
    if name in _TEXT_FIELDS:
        return str(value)
    if name in ("seg_len", "seg_num"):
        return str(_number(value))
    return f"{float(value):.{FLOAT_DECIMALS}f}"


def rows_to_records(rows: Sequence[ResultRow], include_reference: bool = False) -> List[Dict[str, Any]]:
    columns = ResultRow.columns(include_reference)
    return [{name: _json_value(name, getattr(row, name)) for name in columns} for row in rows]


def emit_report(
    rows: Sequence[ResultRow],
    out_dir: Union[str, Path],
    stem: str = "results",
    include_reference: bool = False,
) -> Tuple[Path, Path]:
    """Write ``<stem>.csv`` and ``<stem>.json`` with identical content.

    Columns follow ResultRow field order; floats carry four decimals and
    metrics a task does not produce are left empty.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    columns = ResultRow.columns(include_reference)

    frame = pd.DataFrame(
        [[_csv_value(name, getattr(row, name)) for name in columns] for row in rows],
        columns=columns,
    )
    csv_path = out_dir / f"{stem}.csv"
    frame.to_csv(csv_path, index=False, lineterminator="\n")

    json_path = out_dir / f"{stem}.json"
    json_path.write_text(
        json.dumps(rows_to_records(rows, include_reference), indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    logger.info("Report written", csv=str(csv_path), rows=len(rows))
    return csv_path, json_path


def write_table(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Plot-ready CSV for summaries (sweeps, ablations)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=f"%.{FLOAT_DECIMALS}f", lineterminator="\n")
    return path
