"""JSON emission: a versioned envelope around each command's result."""

from __future__ import annotations

import dataclasses
import json
import math
from fractions import Fraction

import numpy as np

SCHEMA = "degdyn/1"


def jsonable(obj):
    """Plain JSON data; complex numbers become ``[re, im]`` and non-finite floats strings."""
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return jsonable(float(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return x
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if dataclasses.is_dataclass(obj):
        return jsonable(dataclasses.asdict(obj))
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def envelope(command: str, version: str, config: dict, seed, wall_time: float, result,
             artifacts: list | None = None, status: str = "ok") -> dict:
    return {"schema": SCHEMA, "version": version, "command": command, "status": status,
            "config": jsonable(config), "seed": seed, "wall_time": wall_time,
            "artifacts": artifacts or [], "result": jsonable(result)}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False)
