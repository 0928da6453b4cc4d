"""JSON helpers shared by the serializers and the CLI."""
from __future__ import annotations

import json
from fractions import Fraction

SAFE_INT = 1 << 53


def big(n: int):
    """Integers that a double can hold stay numbers; larger ones become strings."""
    n = int(n)
    return n if -SAFE_INT < n < SAFE_INT else str(n)


def _default(obj):
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj, indent=None) -> str:
    return json.dumps(obj, default=_default, indent=indent, sort_keys=False)
