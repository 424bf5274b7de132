"""Deterministic CSV/JSON writers with a reproducibility header."""

from __future__ import annotations

import csv
import io
import json
import math

from . import __version__


def header(config: dict) -> str:
    return f"# treesearch {__version__}\n# config: {json.dumps(config, sort_keys=True)}\n"


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.15g}"
    return str(x)


def to_csv(columns: list[str], rows, config: dict) -> str:
    buf = io.StringIO()
    buf.write(header(config))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_json(payload: dict, config: dict) -> str:
    body = {"tool": "treesearch", "version": __version__, "config": config, **payload}
    return json.dumps(_clean(body), indent=1, sort_keys=True) + "\n"
