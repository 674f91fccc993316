import csv
import io
import json
from typing import Any

from pydantic import BaseModel


def format_float(value: float) -> str:
    """
    Shortest decimal text that parses back to the same double.

    Args:
        value: Number to format.

    Returns:
        `repr` of the float (e.g. "0.1", "1.0", "2.5e-07").

    """
    return repr(float(value))


def format_branch(value: float, precision: int = 6) -> str:
    """Branch length with `precision` significant digits ("1.5", "0.333333")."""
    return f"{float(value):.{precision}g}"


def dump_json(payload: BaseModel | dict[str, Any], *, indent: int | None = 2) -> str:
    """
    Serialize a report model (by alias) or a plain dict.

    json.dumps already writes floats with the shortest round-trip form.
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(by_alias=True, mode="json")
    return json.dumps(payload, indent=indent, ensure_ascii=False)


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, list):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def dump_csv(payload: BaseModel | dict[str, Any]) -> str:
    """
    Render a report as CSV text.

    Reports with per-root results become one row per root; any other report
    becomes a header row and a single value row of its scalar fields.
    """
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(by_alias=True, mode="json")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    roots = payload.get("roots")
    if roots:
        columns = list(roots[0])
        writer.writerow(columns)
        writer.writerows([_csv_cell(row[c]) for c in columns] for row in roots)
    else:
        columns = [key for key, value in payload.items() if not isinstance(value, dict | list) or key == "values"]
        writer.writerow(columns)
        writer.writerow([_csv_cell(payload[c]) for c in columns])
    return buffer.getvalue()
