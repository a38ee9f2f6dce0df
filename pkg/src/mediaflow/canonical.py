"""Canonical JSON serialization for wire responses and reports.

Byte-stable contract: keys sorted, UTF-8, floats rendered with exactly six
decimal places, ints kept as ints, no insignificant whitespace beyond a
single space after ``:`` and ``,``. Used for everything a golden-file test
might compare: HTTP bodies, metrics reports, index dumps, CLI ``--json``
output. Internal persistence uses plain ``json`` at full float precision.
"""

from __future__ import annotations

import json
import math
from typing import Any


def _format_float(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        raise ValueError("non-finite float in canonical document")
    if value == 0.0:
        value = 0.0  # normalize -0.0
    return format(value, ".6f")


def canonical_json(value: Any) -> str:
    """Render a JSON-compatible tree to its canonical string form."""
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, float):
        return _format_float(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(canonical_json(v) for v in value) + "]"
    if isinstance(value, dict):
        items = []
        for key in sorted(value):
            if not isinstance(key, str):
                raise TypeError(f"canonical JSON object keys must be strings, got {key!r}")
            items.append(json.dumps(key, ensure_ascii=False) + ": " + canonical_json(value[key]))
        return "{" + ", ".join(items) + "}"
    raise TypeError(f"not canonically serializable: {type(value).__name__}")


def canonical_bytes(value: Any) -> bytes:
    return canonical_json(value).encode("utf-8")
