"""Canonical JSON emission: sorted keys, floats at 9 significant digits.

Every payload the CLI or the query service writes goes through
``canonical_dumps`` so that repeated runs produce identical bytes and a
parse/re-emit cycle is the identity on emitted files.
"""

from __future__ import annotations

import json


def round9(obj):
    """Copy of a JSON tree with floats rounded to 9 significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.9g}")
    if isinstance(obj, dict):
        return {k: round9(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round9(v) for v in obj]
    return obj


def canonical_dumps(obj) -> str:
    return json.dumps(round9(obj), indent=2, sort_keys=True) + "\n"


def canonical_bytes(obj) -> bytes:
    return canonical_dumps(obj).encode("utf-8")
