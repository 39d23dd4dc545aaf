"""Shared report serialization: deterministic text/JSON output.

All floating values print with 12 significant digits and rationals as
p/q, so identical configurations produce byte-identical reports.
Wall-clock timings never enter serialized reports.
"""

from __future__ import annotations

import json
from fractions import Fraction

SCHEMA_VERSION = 1


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def fmt_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def to_json_bytes(payload: dict) -> bytes:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    body = dict(payload)
    body.setdefault("schema", SCHEMA_VERSION)
    return (
        json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
        + "\n"
    ).encode("ascii")


def write_json(path, payload: dict) -> None:
    with open(path, "wb") as fh:
        fh.write(to_json_bytes(payload))
