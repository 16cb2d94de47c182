"""
Deterministic CSV emission
"""

import csv
import io
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union


def format_value(value: Any) -> str:
    """%.12g for numbers, 0/1 for flags, empty for missing"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.12g" % value
    if hasattr(value, "value"):
        return str(value.value)
    try:
        return "%.12g" % float(value)
    except (TypeError, ValueError):
        return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in header])
    return buffer.getvalue()


def write_csv(path: Optional[Union[str, Path]], header: Sequence[str], rows: Iterable[Dict[str, Any]]) -> None:
    """Write to `path`, or to stdout when path is None or '-'"""
    text = render_csv(header, rows)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Rows keyed by lower-case column name"""
    with open(path, newline="", encoding="utf-8") as f:
        return [{k.strip().lower(): v.strip() for k, v in row.items() if k is not None} for row in csv.DictReader(f)]
