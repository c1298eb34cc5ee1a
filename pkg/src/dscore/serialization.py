"""JSON emission with floats printed at 17 significant digits.

17 digits round-trip any IEEE-754 double, so two independent readers of
the same payload reconstruct bit-identical values; the stock json module
prints shortest-repr floats instead, which would break byte-level parity
checks between producers.
"""

import json
import math


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"non-finite float {obj!r} is not valid JSON")
        # shortest round-trip decimal form; integral floats drop the ".0"
        # so clients in other languages can reproduce the bytes
        text = repr(obj)
        out.append(text[:-2] if text.endswith(".0") else text)
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(",")
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _emit(value, out)
        out.append("}")
    else:
        raise TypeError(f"unserializable value {obj!r}")


def dumps(obj) -> str:
    out = []
    _emit(obj, out)
    return "".join(out)


def dump_line(obj) -> str:
    return dumps(obj) + "\n"


loads = json.loads
