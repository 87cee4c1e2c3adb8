"""Deterministic JSON and CSV output with lossless doubles.

Floats are rendered with 17 significant digits, which is always enough for
a bit-exact round trip through the shortest-parse rule. Emission is plain
and key order follows insertion order, so identical inputs yield
byte-identical files.
"""

import json
import math

from .errors import ValidationError


def format_double(x):
    """Render a finite float with 17 significant digits."""
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_double(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise ValidationError("JSON object keys must be strings")
            if i:
                out.append(", ")
            out.append(json.dumps(key))
            out.append(": ")
            _emit(value, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, value in enumerate(obj):
            if i:
                out.append(", ")
            _emit(value, out)
        out.append("]")
    else:
        # numpy scalars land here; reduce them to python numbers
        item = getattr(obj, "item", None)
        if item is None:
            raise ValidationError(f"cannot serialize {type(obj).__name__} to JSON")
        _emit(item(), out)


def dumps_json(obj):
    out = []
    _emit(obj, out)
    return "".join(out)


def dump_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(obj))
        fh.write("\n")


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_csv(path, header, rows):
    """Write numeric rows under a mandatory header, floats at 17 digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header))
        fh.write("\n")
        for row in rows:
            fh.write(",".join(format_double(x) for x in row))
            fh.write("\n")
