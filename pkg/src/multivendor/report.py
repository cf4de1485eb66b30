"""Deterministic CSV and JSON writers."""

from __future__ import annotations

import csv
import io
import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Sequence


def format_number(v: Any) -> str:
    """Shortest round-trip text; integral floats print without a fraction."""
    if v is None:
        return ""
    if isinstance(v, Enum):
        return str(v.value)
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if v.is_integer() and abs(v) < 2**53:
            return str(int(v))
        return repr(v)
    return str(v)


def csv_text(rows: Sequence[Mapping[str, Any]]) -> str:
    if not rows:
        raise ValueError("emit_csv needs at least one row")
    header = list(rows[0])
    if any(list(r) != header for r in rows):
        raise ValueError("rows must share the same columns in the same order")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(header)
    for r in rows:
        w.writerow([format_number(r[k]) for k in header])
    return buf.getvalue()


def emit_csv(rows: Sequence[Mapping[str, Any]], path: str | Path) -> None:
    """Write ``rows`` as CSV: header first, LF endings, RFC 4180 quoting."""
    Path(path).write_text(csv_text(rows), encoding="utf-8", newline="")


def _jsonable(v: Any) -> Any:
    if isinstance(v, Enum):
        return v.value
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item") and callable(v.item):  # numpy scalars
        return v.item()
    return v


def json_text(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"
