"""Deterministic JSON encoding for reports.

Floats are written with 17 significant digits so identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
import math

import numpy as np

SCHEMA = "harsanyi-attrib/1"


def _float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot encode non-finite value {x!r} in a report")
    text = "%.17g" % x
    if text in ("0", "-0"):
        return "0.0"
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _encode(obj, indent: int, level: int, out: list[str]):
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for k, (key, value) in enumerate(obj.items()):
            if k:
                out.append(",")
            out.append(pad)
            _encode(str(key), indent, level + 1, out)
            out.append(": ")
            _encode(value, indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            out.append("[]")
            return
        # short scalar arrays stay on one line
        if all(isinstance(x, (int, float, np.integer, np.floating)) for x in obj):
            out.append("[")
            for k, x in enumerate(obj):
                if k:
                    out.append(", ")
                _encode(x, indent, level + 1, out)
            out.append("]")
            return
        out.append("[")
        for k, x in enumerate(obj):
            if k:
                out.append(",")
            out.append(pad)
            _encode(x, indent, level + 1, out)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__} in a report")


def dumps(report: dict, indent: int = 2) -> str:
    out: list[str] = []
    _encode(report, indent, 0, out)
    return "".join(out) + "\n"


def new_report(command: str, config: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "config": config}
