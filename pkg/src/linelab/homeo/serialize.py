"""JSON encoding of expression trees.

Each node is an object with an ``"op"`` field.  Numbers are written as
decimal strings so that doubles round-trip exactly; readers also accept
plain JSON numbers and ``"p/q"`` fractions.

    {"op": "identity"}
    {"op": "translation", "c": "0.5"}
    {"op": "affine", "slope": "2", "offset": "1"}
    {"op": "expbump", "interval": ["-1", "1"]}
    {"op": "yoccoz", "from": ["0", "1"], "to": ["0", "1.5"]}
    {"op": "piecewise", "pieces": [{"interval": [lo, hi], "map": {...}}, ...]}
    {"op": "compose", "parts": [{...}, ...]}        # first part acts last
    {"op": "inverse", "child": {...}}
    {"op": "stage", "i": 2, "K": 4, "power": 1, "exponent": "1",
     "piece_cap": 10000000, "strict": false}
"""

from __future__ import annotations

import json

from ..errors import SpecError
from ..intervals import IntervalQ
from ..numfmt import format_number, parse_number
from .nodes import (
    Affine,
    Compose,
    ExpBump,
    HomeoExpr,
    Identity,
    Inverse,
    Piecewise,
    StageMap,
    Translation,
    YoccozChart,
)


def to_json(f: HomeoExpr) -> dict:
    if isinstance(f, Identity):
        return {"op": "identity"}
    if isinstance(f, Translation):
        return {"op": "translation", "c": format_number(f.c)}
    if isinstance(f, Affine):
        return {"op": "affine", "slope": format_number(f.slope), "offset": format_number(f.offset)}
    if isinstance(f, ExpBump):
        return {"op": "expbump", "interval": f.interval.to_json()}
    if isinstance(f, YoccozChart):
        return {"op": "yoccoz", "from": f.source.to_json(), "to": f.target.to_json()}
    if isinstance(f, Piecewise):
        return {
            "op": "piecewise",
            "pieces": [{"interval": iv.to_json(), "map": to_json(g)} for iv, g in f.pieces],
        }
    if isinstance(f, Compose):
        return {"op": "compose", "parts": [to_json(g) for g in f.parts]}
    if isinstance(f, Inverse):
        return {"op": "inverse", "child": to_json(f.child)}
    if isinstance(f, StageMap):
        return {
            "op": "stage",
            "i": f.i,
            "K": f.K,
            "power": f.power,
            "exponent": format_number(f.exponent),
            "piece_cap": f.piece_cap,
            "strict": f.strict,
        }
    raise TypeError(f"cannot serialise {type(f).__name__}")


def _field(obj, key, path):
    if not isinstance(obj, dict):
        raise SpecError(f"{path}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SpecError(f"{path}: missing field '{key}'")
    return obj[key]


def _num(obj, key, path):
    try:
        return parse_number(_field(obj, key, path))
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"{path}.{key}: {exc}") from None


def _interval(v, path):
    try:
        return IntervalQ.from_json(v)
    except Exception as exc:
        raise SpecError(f"{path}: bad interval {v!r} ({exc})") from None


def _int(obj, key, path, default=None):
    if key not in obj:
        if default is None:
            raise SpecError(f"{path}: missing field '{key}'")
        return default
    v = obj[key]
    try:
        out = int(parse_number(v))
    except (ValueError, OverflowError) as exc:
        raise SpecError(f"{path}.{key}: {exc}") from None
    if out != parse_number(v):
        raise SpecError(f"{path}.{key}: expected an integer, got {v!r}")
    return out


def from_json(obj, path: str = "$") -> HomeoExpr:
    op = _field(obj, "op", path)
    try:
        if op == "identity":
            return Identity()
        if op == "translation":
            return Translation(_num(obj, "c", path))
        if op == "affine":
            return Affine(_num(obj, "slope", path), _num(obj, "offset", path))
        if op == "expbump":
            return ExpBump(_interval(_field(obj, "interval", path), f"{path}.interval"))
        if op == "yoccoz":
            return YoccozChart(
                _interval(_field(obj, "from", path), f"{path}.from"),
                _interval(_field(obj, "to", path), f"{path}.to"),
            )
        if op == "piecewise":
            raw = _field(obj, "pieces", path)
            if not isinstance(raw, list):
                raise SpecError(f"{path}.pieces: expected a list")
            pieces = []
            for k, pc in enumerate(raw):
                p = f"{path}.pieces[{k}]"
                pieces.append((_interval(_field(pc, "interval", p), f"{p}.interval"), from_json(_field(pc, "map", p), f"{p}.map")))
            return Piecewise(tuple(pieces))
        if op == "compose":
            raw = _field(obj, "parts", path)
            if not isinstance(raw, list):
                raise SpecError(f"{path}.parts: expected a list")
            return Compose(tuple(from_json(g, f"{path}.parts[{k}]") for k, g in enumerate(raw)))
        if op == "inverse":
            return Inverse(from_json(_field(obj, "child", path), f"{path}.child"))
        if op == "stage":
            return StageMap(
                _int(obj, "i", path),
                _int(obj, "K", path),
                _int(obj, "power", path, 1),
                parse_number(obj.get("exponent", "1")),
                _int(obj, "piece_cap", path, 10_000_000),
                bool(obj.get("strict", False)),
            )
    except SpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise SpecError(f"{path}: {exc}") from None
    raise SpecError(f"{path}.op: unknown node kind {op!r}")


def dumps(f: HomeoExpr, **kw) -> str:
    return json.dumps(to_json(f), sort_keys=True, **kw)


def loads(text: str) -> HomeoExpr:
    return from_json(json.loads(text))
