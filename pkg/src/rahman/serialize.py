"""JSON/CSV encoding of exact results.

Rationals are always written as "num/den" strings in lowest terms with a
positive denominator.  JSON output is canonical: sorted keys, fixed indent.
"""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

import numpy as np

from .exact import ExactMatrix, as_scalar, format_scalar
from .statespace import StateSpace


def parse_rational(text: str) -> Fraction:
    try:
        return as_scalar(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def fraction_to_decimal(q: Fraction, digits: int) -> str:
    """Round half-even to exactly `digits` places after the point."""
    scaled = round(q * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def matrix_to_json(M: ExactMatrix, space: StateSpace | None = None) -> dict:
    out = {
        "shape": [M.nrows, M.ncols],
        "entries": [[format_scalar(v) for v in row] for row in M.rows],
    }
    if space is not None:
        out["ordering"] = {"N": space.N, "states": space.to_json()}
    return out


def matrix_from_json(obj) -> ExactMatrix:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return ExactMatrix([[parse_rational(v) for v in row] for row in obj["entries"]])


def matrix_to_csv(M: ExactMatrix, digits: int = 12, space: StateSpace | None = None) -> str:
    lines = []
    if space is not None:
        lines.append(",".join(["state"] + [f"({x};{y})" for x, y in space.states]))
    for i, row in enumerate(M.rows):
        cells = [fraction_to_decimal(v, digits) for v in row]
        if space is not None:
            x, y = space.states[i]
            cells.insert(0, f"({x};{y})")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, ExactMatrix):
        return matrix_to_json(obj)
    if isinstance(obj, StateSpace):
        return {"N": obj.N, "states": obj.to_json()}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"
