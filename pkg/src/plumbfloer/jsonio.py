"""JSON encoding helpers shared by the CLI, the cache and the reports."""
from __future__ import annotations

import json
from fractions import Fraction

SCHEMA_VERSION = "1.0"


def frac(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def unfrac(obj) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
