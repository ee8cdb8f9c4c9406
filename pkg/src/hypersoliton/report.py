"""Deterministic JSON and CSV serialization of reports.

Floats are written with 17 significant digits and dict insertion order is
kept, so equal inputs give byte-identical output.  Non-finite floats become
``null`` in JSON.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA = 1


def _fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _encode(obj, out):
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for k, (key, val) in enumerate(obj.items()):
            if k:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _encode(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for k, val in enumerate(obj):
            if k:
                out.append(", ")
            _encode(val, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def to_json(doc):
    """Serialize with ``"schema"`` first and a trailing newline."""
    body = {"schema": SCHEMA}
    body.update((k, v) for k, v in doc.items() if k != "schema")
    out = []
    _encode(body, out)
    return "".join(out) + "\n"


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return "" if not math.isfinite(float(v)) else format(float(v), ".17g")
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(r.get(h)) for h in header])
    return buf.getvalue()
