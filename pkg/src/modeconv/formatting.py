"""Deterministic text formatting for the emitted CSV/JSON regression surface.

Every numeric value is written as lower-case scientific notation with a
12-decimal-place mantissa and a minimal exponent ("1.000000000000e0",
"8.000000000000e-1").  That is precise enough that parsing the text recovers the
computed double to better than 1e-12 relative, and stable enough that identical
runs produce byte-identical files.
"""

from __future__ import annotations

import json


def format_float(x: float) -> str:
    """Scientific notation, 12 decimal places, no '+' or leading zeros in the exponent."""
    x = float(x)
    mantissa, exponent = f"{x:.12e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def json_text(value, indent: int = 0) -> str:
    """Render a JSON document with :func:`format_float` numbers and dict key order kept.

    Floats use the fixed-width scientific form (valid JSON number syntax);
    ints, strings, booleans and None render the standard way.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {json_text(v, indent + 1)}" for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ",\n".join(f"{inner}{json_text(v, indent + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return json.dumps(value)


def csv_text(header: str, rows) -> str:
    """CSV document: a literal header line plus formatted numeric rows."""
    lines = [header]
    for row in rows:
        lines.append(",".join(format_float(x) for x in row))
    return "\n".join(lines) + "\n"
