"""JSON encodings for points, subspaces, charts, curves and reports.

Output is deterministic: keys sorted, floats written by ``repr`` and non-finite numbers
replaced by null, so equal inputs give byte-identical files.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .frenet import Flag, FrenetCurve, Table, Transformed, Veronese
from .projlin import Chart, ProjPoint, ProjLinError, Subspace, normalize


class DecodeError(ValueError):
    pass


def point_to_json(p) -> dict:
    v = p.v if isinstance(p, ProjPoint) else np.asarray(p, float)
    return {"p": [float(t) for t in v]}


def point_from_json(obj) -> ProjPoint:
    """Accepts {"p": [...]} or a bare list of coordinates."""
    raw = obj.get("p") if isinstance(obj, dict) else obj
    v = _vector(raw, "point")
    try:
        return normalize(v)
    except ProjLinError as e:
        raise DecodeError(str(e)) from e


def subspace_to_json(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": s.basis.T.tolist()}


def subspace_from_json(obj) -> Subspace:
    try:
        rows = np.asarray(obj["basis"], dtype=float)
        dim = int(obj.get("dim", len(rows)))
    except (KeyError, TypeError, ValueError) as e:
        raise DecodeError(f"bad subspace: {e}") from e
    if rows.ndim != 2 or rows.shape[0] != dim:
        raise DecodeError("subspace basis must have dim rows")
    return Subspace(rows.T)


def chart_to_json(c: Chart) -> dict:
    return {"inf": c.covector.tolist(), "frame": c.frame.T.tolist()}


def chart_from_json(obj) -> Chart:
    if isinstance(obj, (list, tuple)):
        return Chart(_vector(obj, "chart covector"))
    try:
        frame = obj.get("frame")
        return Chart(_vector(obj["inf"], "chart covector"),
                     None if frame is None else np.asarray(frame, float).T)
    except (KeyError, TypeError, ProjLinError) as e:
        raise DecodeError(f"bad chart: {e}") from e


def flag_from_json(obj) -> Flag:
    try:
        return Flag(tuple(subspace_from_json(obj[k]) for k in ("v1", "v2", "v3")))
    except (KeyError, TypeError) as e:
        raise DecodeError(f"bad flag: {e}") from e


def flag_to_json(f: Flag) -> dict:
    return {k: subspace_to_json(s) for k, s in zip(("v1", "v2", "v3"), f.spaces)}


def curve_from_json(obj) -> FrenetCurve:
    if "g" in obj:
        try:
            return Transformed(np.asarray(obj["g"], float))
        except Exception as e:  # shape or singularity problems
            raise DecodeError(f"bad transform: {e}") from e
    if "samples" in obj:
        try:
            return Table([(float(s["theta"]), flag_from_json(s["flag"])) for s in obj["samples"]])
        except (KeyError, TypeError) as e:
            raise DecodeError(f"bad table: {e}") from e
    raise DecodeError("curve JSON needs either 'g' or 'samples'")


def curve_from_spec(spec: str) -> FrenetCurve:
    """veronese | transform:FILE | table:FILE"""
    if spec == "veronese":
        return Veronese()
    kind, _, path = spec.partition(":")
    if kind not in ("transform", "table") or not path:
        raise DecodeError(f"unknown curve spec {spec!r}")
    obj = load(path)
    if kind == "transform" and "g" not in obj:
        raise DecodeError("transform file needs 'g'")
    if kind == "table" and "samples" not in obj:
        raise DecodeError("table file needs 'samples'")
    return curve_from_json(obj)


def _vector(raw, what: str) -> np.ndarray:
    try:
        v = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as e:
        raise DecodeError(f"bad {what}: {e}") from e
    if v.ndim != 1 or v.size < 2 or not np.all(np.isfinite(v)):
        raise DecodeError(f"bad {what}: expected a finite coordinate list")
    return v


def clean(obj):
    """Plain JSON types only; numpy scalars and arrays unwrapped, NaN and inf to None."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(obj, indent: int | None = 1) -> str:
    return json.dumps(clean(obj), sort_keys=True, indent=indent, allow_nan=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DecodeError(str(e)) from e


def load(path) -> dict:
    try:
        return loads(Path(path).read_text())
    except OSError as e:
        raise DecodeError(str(e)) from e
