"""Canonical JSON rendering: sorted keys, rationals as "p/q" strings, stable bytes."""

from __future__ import annotations

import json
from fractions import Fraction

from gmpy2 import mpq

from . import __version__
from .linalg import q_str

NORMALIZATION = {
    "monomial_order": "weight ascending, then exponent vectors lexicographically descending",
    "render_order": "non-B1 terms first, then B1 terms",
    "kernel_basis": "reduced echelon, one generator mu - p*(mu) per non-B1 monomial",
    "socle_generator": "normal form of the Hessian determinant",
    "tensor_convention": "component polynomial = T(t, ..., t) summed over ordered indices",
}


def to_jsonable(obj):
    if isinstance(obj, (mpq, Fraction)):
        return q_str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): to_jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    raise TypeError(f"cannot render {type(obj).__name__}")


def envelope(command: str, body: dict, seed: int | None = None) -> dict:
    out = {"tool": "cyschottky", "version": __version__, "command": command,
           "normalization": NORMALIZATION}
    if seed is not None:
        out["seed"] = seed
    out.update(body)
    return out


def render(report: dict) -> bytes:
    text = json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=True)
    return (text + "\n").encode("ascii")


def parse(data: bytes) -> dict:
    return json.loads(data.decode("ascii"))
