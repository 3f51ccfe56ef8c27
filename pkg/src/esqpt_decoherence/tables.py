"""Flat-file output: CSV with ``#`` header comments, and JSON summaries.

Floats are written with 17 significant digits so ``read_csv`` gives back
bit-identical values.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    if v is None:
        return ""
    try:
        return format(float(v), ".17g")
    except (TypeError, ValueError):
        return str(v)


def render_csv(columns, rows, meta=None) -> str:
    buf = io.StringIO()
    for key, val in (meta or {}).items():
        buf.write(f"# {key}={format_value(val)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, columns, rows, meta=None) -> None:
    Path(path).write_text(render_csv(columns, rows, meta))


def _parse(cell: str):
    if cell == "":
        return None
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def parse_csv(text: str):
    """Returns ``(meta, columns, rows)`` with numeric cells converted."""
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key] = _parse(val)
        elif line:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[_parse(c) for c in row] for row in reader]
    return meta, columns, rows


def read_csv(path):
    return parse_csv(Path(path).read_text())


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def render_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"
