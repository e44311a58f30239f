"""JSON encoding of rationals, regions and shadow packings.

Rationals are always strings ("p/q" or "p"), never JSON numbers.

A packing configuration looks like::

    {"container": {"type": "box", "a": "1", "b": "1"},
     "pieces": [{"vertices": [["0", "0"], ["1", "0"], ["0", "1"]],
                 "capacity": "1", "certificate": "triangle-NE"}]}
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .constructions import ShadowPacking, ShadowPiece, StackPacking, Trusted, parse_certificate
from .geometry import Box, Polygon, Region, Simplex, SkewSimplex, TruncatedSimplex, as_rational, format_rational


def rational_to_json(q: Fraction) -> str:
    return format_rational(q)


def rational_from_json(s: Any) -> Fraction:
    if not isinstance(s, (str, int)) or isinstance(s, bool):
        raise ValueError(f"rationals must be strings, got {s!r}")
    return as_rational(s)


def polygon_to_json(p: Polygon) -> list[list[str]]:
    return [[format_rational(x), format_rational(y)] for x, y in p.vertices]


def polygon_from_json(data: Any) -> Polygon:
    if not isinstance(data, list):
        raise ValueError("vertices must be a list of [x1, x2] pairs")
    pts = []
    for v in data:
        if not isinstance(v, list) or len(v) != 2:
            raise ValueError(f"bad vertex {v!r}")
        pts.append((rational_from_json(v[0]), rational_from_json(v[1])))
    return Polygon(pts)


def region_to_json(r: Region) -> dict:
    if isinstance(r, Box):
        return {"type": "box", "a": format_rational(r.a), "b": format_rational(r.b)}
    if isinstance(r, Simplex):
        return {"type": "simplex", "w": format_rational(r.w)}
    if isinstance(r, TruncatedSimplex):
        return {"type": "truncated-simplex", "w_inner": format_rational(r.w_inner),
                "w_outer": format_rational(r.w_outer)}
    if isinstance(r, SkewSimplex):
        return {"type": "skew-simplex", "a": format_rational(r.a), "b": format_rational(r.b)}
    raise TypeError(f"unknown region {r!r}")


_REGIONS = {
    "box": (Box, ("a", "b")),
    "simplex": (Simplex, ("w",)),
    "truncated-simplex": (TruncatedSimplex, ("w_inner", "w_outer")),
    "skew-simplex": (SkewSimplex, ("a", "b")),
}


def region_from_json(data: Any) -> Region:
    if not isinstance(data, dict) or data.get("type") not in _REGIONS:
        raise ValueError(f"unknown container {data!r}")
    cls, names = _REGIONS[data["type"]]
    try:
        return cls(*(rational_from_json(data[n]) for n in names))
    except KeyError as exc:
        raise ValueError(f"container is missing {exc.args[0]!r}") from None


def piece_to_json(p: ShadowPiece) -> dict:
    out = {"vertices": polygon_to_json(p.poly), "capacity": format_rational(p.capacity),
           "certificate": p.certificate.tag}
    if isinstance(p.certificate, Trusted) and p.certificate.note:
        out["note"] = p.certificate.note
    return out


def piece_from_json(data: Any) -> ShadowPiece:
    if not isinstance(data, dict):
        raise ValueError("each piece must be an object")
    cert = parse_certificate(data.get("certificate", "trusted"), data.get("note", ""))
    return ShadowPiece(polygon_from_json(data.get("vertices")), rational_from_json(data.get("capacity")), cert)


def packing_to_json(p: ShadowPacking) -> dict:
    out = {"container": region_to_json(p.container), "pieces": [piece_to_json(x) for x in p.pieces]}
    if p.meta:
        out["meta"] = dict(p.meta)
    return out


def packing_from_json(data: Any) -> ShadowPacking:
    if not isinstance(data, dict):
        raise ValueError("configuration must be a JSON object")
    pieces = data.get("pieces")
    if not isinstance(pieces, list):
        raise ValueError("configuration needs a list of pieces")
    return ShadowPacking(region_from_json(data.get("container")), [piece_from_json(x) for x in pieces],
                         {str(k): str(v) for k, v in data.get("meta", {}).items()})


def stack_to_json(s: StackPacking) -> dict:
    return {
        "x_widths": [format_rational(w) for w in s.x_widths],
        "y_box": [[format_rational(lo), format_rational(hi)] for lo, hi in s.y_box],
        "pieces": [
            {"capacity": format_rational(p.capacity), "scales": [format_rational(x) for x in p.scales],
             "y_offset": [format_rational(x) for x in p.y_offset]}
            for p in s.pieces
        ],
        "meta": dict(s.meta),
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def load_packing(path: str) -> ShadowPacking:
    with open(path, encoding="utf-8") as fh:
        return packing_from_json(json.load(fh))
