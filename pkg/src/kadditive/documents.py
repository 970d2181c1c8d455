"""JSON documents for capacities, acts and weight vectors.

A capacity document::

    {"n": 2, "repr": "capacity", "values": [0, 0.3, 0.5, 1]}
    {"n": 2, "repr": "mobius", "values": [{"subset": [1], "value": 0.3}, ...]}

Dense ``values`` are in bitmask order (bit ``i-1`` <-> element ``i``); sparse
entries list ascending 1-based elements, absent subsets are 0.  Reals are
written with 17 significant digits.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .setfun import MAX_N, MobiusRepresentation, SetFunction, subset_elements, subset_index

REPRS = ("capacity", "mobius")


class DocumentError(ValueError):
    """Malformed document; the message names the offending location."""


def format_real(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x}")
    text = format(x, ".17g")
    return "0" if text == "-0" else text


def _is_scalar_list(obj) -> bool:
    return isinstance(obj, (list, tuple)) and all(
        isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool) for x in obj
    )


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-digit reals; scalar lists stay on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if _is_scalar_list(obj):
            return "[" + ", ".join(dumps(x) for x in obj) + "]"
        if all(_is_flat_dict(x) for x in obj):
            return "[\n" + ",\n".join(inner + _inline(x) for x in obj) + "\n" + pad + "]"
        return "[\n" + ",\n".join(inner + dumps(x, indent + 1) for x in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _is_flat_dict(obj) -> bool:
    return isinstance(obj, dict) and all(
        _is_scalar_list(v) or not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj.values()
    )


def _inline(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_inline(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_inline(x) for x in obj) + "]"
    return dumps(obj)


def capacity_document(obj, fmt: str = "dense") -> dict:
    """Document for a :class:`SetFunction` or :class:`MobiusRepresentation`."""
    if isinstance(obj, MobiusRepresentation):
        repr_, n = "mobius", obj.n
        pairs = list(obj.items())
        dense = obj.dense()
    else:
        repr_, n = "capacity", obj.n
        dense = obj.values
        pairs = [(int(s), float(dense[s])) for s in np.flatnonzero(dense)]
    if fmt == "dense":
        values = [float(x) for x in dense]
    elif fmt == "sparse":
        values = [{"subset": list(subset_elements(s)), "value": v} for s, v in pairs]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return {"n": n, "repr": repr_, "values": values}


def _real(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {json.dumps(x)}")
    if not math.isfinite(x):
        raise DocumentError(f"{where}: value must be finite")
    return float(x)


def parse_capacity_document(doc) -> SetFunction | MobiusRepresentation:
    if isinstance(doc, dict) and "repr" not in doc and isinstance(doc.get("capacity"), dict):
        doc = doc["capacity"]
    if not isinstance(doc, dict):
        raise DocumentError("$: expected an object")
    for key in ("n", "repr", "values"):
        if key not in doc:
            raise DocumentError(f"$: missing key {key!r}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise DocumentError(f"$.n: expected an integer in 1..{MAX_N}")
    repr_ = doc["repr"]
    if repr_ not in REPRS:
        raise DocumentError(f"$.repr: expected one of {REPRS}")
    values = doc["values"]
    if not isinstance(values, list):
        raise DocumentError("$.values: expected an array")
    sparse = not values or isinstance(values[0], dict)
    if sparse:
        dense = np.zeros(1 << n)
        seen = set()
        for idx, entry in enumerate(values):
            where = f"$.values[{idx}]"
            if not isinstance(entry, dict) or set(entry) != {"subset", "value"}:
                raise DocumentError(f"{where}: expected {{subset, value}}")
            subset = entry["subset"]
            if not isinstance(subset, list) or any(
                isinstance(e, bool) or not isinstance(e, int) or not 1 <= e <= n for e in subset
            ):
                raise DocumentError(f"{where}.subset: expected elements in 1..{n}")
            if subset != sorted(set(subset)):
                raise DocumentError(f"{where}.subset: elements must be strictly ascending")
            bits = subset_index(subset)
            if bits in seen:
                raise DocumentError(f"{where}.subset: duplicate subset")
            seen.add(bits)
            dense[bits] = _real(entry["value"], f"{where}.value")
    else:
        if len(values) != 1 << n:
            raise DocumentError(f"$.values: expected {1 << n} dense values, got {len(values)}")
        dense = np.array([_real(x, f"$.values[{i}]") for i, x in enumerate(values)])
    if repr_ == "mobius":
        return MobiusRepresentation.from_dense(dense, n, eps=0.0)
    return SetFunction(dense, n)


def parse_vector(text: str, what: str = "vector") -> np.ndarray:
    """Comma-separated numbers, or a path to a JSON array / ``{"act"|"weights": [...]}``."""
    path = Path(text)
    if path.is_file():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{text}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
        if isinstance(data, dict):
            for key in ("act", "weights", "values"):
                if key in data:
                    data = data[key]
                    break
        if not isinstance(data, list) or not data:
            raise DocumentError(f"{text}: expected a non-empty array of numbers")
        return np.array([_real(x, f"{text}[{i}]") for i, x in enumerate(data)])
    try:
        parts = [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise DocumentError(f"{what}: cannot parse {text!r} as comma-separated numbers") from exc
    if not parts or not all(math.isfinite(p) for p in parts):
        raise DocumentError(f"{what}: expected finite comma-separated numbers")
    return np.array(parts)


def load_capacity(path: str) -> SetFunction | MobiusRepresentation:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    try:
        return parse_capacity_document(doc)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from exc
