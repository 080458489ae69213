"""Deterministic JSON and CSV serialization.

Floats are written with 17 significant digits so that identical inputs give
byte-identical files.  JSON uses UTF-8 and LF; CSV uses RFC-4180 quoting with
metadata in leading ``#`` comment lines.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .nu_engine import ExpPowerProduct, LowPoly

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0.0"
    text = format(x, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def to_plain(obj):
    """Nested dicts, lists, str, bool, int, float and None only."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, LowPoly):
        return [float(c) for c in obj.coeffs]
    if isinstance(obj, ExpPowerProduct):
        return {"exp_poly": to_plain(obj.exp_poly), "factors": [[float(r), float(p)] for r, p in obj.factors]}
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json(obj, indent: int, level: int) -> str:
    """indent = 0 gives the compact single-line form."""
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    nl, colon, comma = ("\n", ": ", ", ") if indent else ("", ":", ",")
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}{colon}{_json(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{" + nl + ("," + nl).join(items) + nl + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if not indent or all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + comma.join(_json(v, indent, level) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _json(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        # JSON has no inf/nan; those travel as strings
        return format_float(obj) if math.isfinite(obj) else json.dumps(format_float(obj))
    return json.dumps(obj, ensure_ascii=False)


def dumps_json(obj, indent: int = 2) -> str:
    return _json(to_plain(obj), indent, 0) + "\n"


def compact_json(obj) -> str:
    return _json(to_plain(obj), 0, 0)


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return ""
    if isinstance(value, (dict, list, tuple)):
        return compact_json(value)
    return str(value)


def dumps_csv(header: list, rows: list, meta: dict | None = None) -> str:
    """``# key=value`` lines, then a header row and data rows."""
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}={_cell(to_plain(value))}\n")
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def flatten(record: dict, prefix: str = "") -> dict:
    """Nested dicts become dotted keys; lists stay as JSON cells."""
    out = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and value:
            out.update(flatten(value, name + "."))
        else:
            out[name] = value
    return out


def records_to_csv(records: list, meta: dict | None = None) -> str:
    flat = [flatten(to_plain(r)) for r in records]
    header = []
    for rec in flat:
        for key in rec:
            if key not in header:
                header.append(key)
    return dumps_csv(header, [[rec.get(k) for k in header] for rec in flat], meta)
