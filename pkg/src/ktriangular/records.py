"""Structured-text records: rationals as ``"p/q"``, sets as ``"{1,3}"``.

Records are plain JSON-compatible dicts.  ``dumps`` sorts keys so equal
inputs always give byte-identical output.
"""

from __future__ import annotations

import enum
import json
from fractions import Fraction
from typing import Any

from .lattice import Certificate, OSequence, Regulator, Vec

__all__ = [
    "frac_str",
    "parse_frac",
    "parse_value",
    "to_jsonable",
    "value_record",
    "regulator_record",
    "regulator_from_record",
    "certificate_record",
    "setfunction_record",
    "setfunction_from_record",
    "dumps",
]


def frac_str(x: Fraction | int) -> str:
    """Always ``p/q``, even for integers (``2`` renders as ``2/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: Any) -> Fraction:
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"floats are not accepted as exact rationals: {text!r}")
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"expected a 'p/q' string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


def parse_value(obj: Any):
    """``"p/q"`` gives a Fraction, a list of them gives a Vec."""
    if isinstance(obj, list):
        return Vec(parse_frac(x) for x in obj)
    return parse_frac(obj)


def value_record(v) -> Any:
    if isinstance(v, Vec):
        return [frac_str(c) for c in v]
    return frac_str(v)


def to_jsonable(obj: Any) -> Any:
    """Recursively convert rationals to ``p/q``; integers stay integers."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return frac_str(obj)
    if isinstance(obj, Vec):
        return value_record(obj)
    if isinstance(obj, Regulator):
        return regulator_record(obj)
    if isinstance(obj, OSequence):
        return [value_record(v) for v in obj.values]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_record"):
        return obj.to_record()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def regulator_record(reg: Regulator) -> dict:
    return {
        "kind": "regulator",
        "horizon": {"T": reg.T, "L": reg.L},
        "bound": value_record(reg.bound),
        "tolerance": frac_str(reg.tolerance),
        "entries": [[value_record(v) for v in row] for row in reg.entries],
    }


def regulator_from_record(rec: dict) -> Regulator:
    rows = tuple(tuple(parse_value(v) for v in row) for row in rec["entries"])
    bound = parse_value(rec["bound"]) if "bound" in rec else None
    return Regulator(rows, bound, parse_frac(rec.get("tolerance", "0/1")))


def certificate_record(cert: Certificate) -> dict:
    return {
        "kind": "certificate",
        "verdict": cert.verdict.value,
        "witness": None if cert.witness is None else to_jsonable(cert.witness),
        "horizon": to_jsonable(cert.horizon),
        "details": to_jsonable(cert.details),
        "regulator": None if cert.regulator is None else regulator_record(cert.regulator),
    }


def setfunction_record(m) -> dict:
    rec: dict[str, Any] = {"kind": "setfunction", "atoms": m.n, "backing": m.backing, "name": m.name}
    if m.weights is not None:
        rec["weights"] = [frac_str(w) for w in m.weights]
    else:
        rec["backing"] = "table"
        # sparse: absent masks are zero
        zero = m(0)
        rec["table"] = {str(mask): value_record(v) for mask, v in enumerate(m.table) if v != zero}
        if isinstance(zero, Vec):
            rec["dim"] = zero.dim
    if m.tail_description:
        rec["tail_bound"] = m.tail_description
    return rec


def setfunction_from_record(rec: dict):
    from .setfun import SetFunction

    n = int(rec["atoms"])
    if "weights" in rec:
        return SetFunction(n, weights=[parse_frac(w) for w in rec["weights"]], name=rec.get("name", ""),
                           tail_description=rec.get("tail_bound"))
    table = rec["table"]
    if isinstance(table, dict):
        vals = [Fraction(0)] * (1 << n) if "dim" not in rec else [Vec([0] * rec["dim"])] * (1 << n)
        for k, v in table.items():
            mask = int(k)
            if not 0 <= mask < len(vals):
                raise ValueError(f"table key {k} outside the algebra of {n} atoms")
            vals[mask] = parse_value(v)
        return SetFunction(n, vals, name=rec.get("name", ""))
    return SetFunction(n, [parse_value(v) for v in table], name=rec.get("name", ""))


def dumps(obj: Any, indent: int | None = 2) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=indent, ensure_ascii=False)
