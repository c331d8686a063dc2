"""Canonical rendering: exact rationals as ``p/q`` strings, deterministic JSON
and CSV, gnuplot-style data files."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Iterable


def rat(x) -> str:
    """Lowest terms with a positive denominator; integers without ``/1``."""
    return str(Fraction(x))


def decimal_str(x, digits: int) -> str:
    """Display-only rounding of an exact rational to ``digits`` places."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = max(28, digits + len(str(abs(x.numerator) // x.denominator)) + 5)
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return str(value.quantize(Decimal(1).scaleb(-digits)))


def jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rat(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot render {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def csv_text(rows: Iterable[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([rat(v) if isinstance(v, Fraction) else v for v in (row[c] for c in columns)])
    return buf.getvalue()


def dat_text(rows: Iterable[dict], columns: list[str], digits: int) -> str:
    """Whitespace-separated decimals for plotting tools, header as a comment."""
    lines = ["# " + " ".join(columns)]
    for row in rows:
        lines.append(" ".join(decimal_str(row[c], digits) if isinstance(row[c], Fraction)
                              else str(row[c]) for c in columns))
    return "\n".join(lines) + "\n"
