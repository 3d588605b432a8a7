"""FOLD-style document IO.

Documents are UTF-8 JSON text.  Supported keys: ``vertices_coords``
(pairs [x, y]), ``edges_vertices``, ``edges_assignment`` ("M"/"V"/"B"/"U"),
optional ``edges_foldAngle`` (degrees, valley positive), optional
``faces_vertices`` (computed from the embedding when absent).  Unknown
top-level keys are preserved verbatim on round-trip.  Fold angles are
radians everywhere inside the package; degrees appear only in the file.
"""
from __future__ import annotations

import dataclasses
import json
import math
from typing import Any

import numpy as np

from .pattern import Crease, CreasePattern, PatternError

_CONSUMED_KEYS = {
    "file_spec",
    "file_creator",
    "file_classes",
    "frame_classes",
    "vertices_coords",
    "edges_vertices",
    "edges_assignment",
    "edges_foldAngle",
    "faces_vertices",
}

# Degrees are quantized on write so that write -> read -> write is stable
# despite the radian/degree conversion not being exactly invertible.
_DEG_DECIMALS = 12


def _canon_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def set_extra(pattern: CreasePattern, key: str, obj: Any) -> CreasePattern:
    """Return a copy of the pattern with one foreign document key attached."""
    extras = dict(pattern.extras)
    extras[key] = _canon_json(obj)
    return dataclasses.replace(pattern, extras=tuple(sorted(extras.items())))


def get_extra(pattern: CreasePattern, key: str) -> Any | None:
    for k, v in pattern.extras:
        if k == key:
            return json.loads(v)
    return None


def load_fold(data: bytes | str) -> CreasePattern:
    """Parse a FOLD document and validate it as a crease pattern."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise PatternError(f"not a valid JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise PatternError("top-level JSON value must be an object")

    coords = doc.get("vertices_coords", [])
    vertices = []
    for i, p in enumerate(coords):
        if len(p) == 3 and abs(p[2]) > 1e-12:
            raise PatternError(f"vertex {i} is not planar (z = {p[2]})")
        if len(p) not in (2, 3):
            raise PatternError(f"vertex {i} must have 2 coordinates")
        vertices.append((float(p[0]), float(p[1])))

    edges = doc.get("edges_vertices", [])
    assignments = doc.get("edges_assignment", ["U"] * len(edges))
    raw_angles = doc.get("edges_foldAngle", [None] * len(edges))
    if len(assignments) != len(edges) or len(raw_angles) != len(edges):
        raise PatternError("edge attribute arrays must match edges_vertices in length")

    creases = []
    for (v0, v1), a, ang in zip(edges, assignments, raw_angles):
        if a == "F":  # flat creases from external files load as unassigned
            a = "U"
        fold = None if ang is None else math.radians(float(ang))
        creases.append(Crease(int(v0), int(v1), a, fold))

    faces = doc.get("faces_vertices")
    extras = {k: _canon_json(v) for k, v in doc.items() if k not in _CONSUMED_KEYS}
    return CreasePattern.build(
        vertices,
        creases,
        faces=[tuple(int(v) for v in f) for f in faces] if faces is not None else None,
        extras=extras,
    )


def save_fold(pattern: CreasePattern, fold_angles: np.ndarray | None = None) -> bytes:
    """Serialize a pattern to a FOLD document (deterministic byte output).

    ``fold_angles``, when given, is a radian vector indexed by crease id and
    overrides the per-crease stored angles.
    """
    if fold_angles is not None and len(fold_angles) != len(pattern.creases):
        raise PatternError("fold_angles length must match the number of creases")

    def emit_angle(i: int, c: Crease) -> float | None:
        a = float(fold_angles[i]) if fold_angles is not None else c.fold_angle
        if a is None:
            return 0.0 if c.assignment == "B" else None
        return round(math.degrees(a), _DEG_DECIMALS)

    doc: dict[str, Any] = {
        "file_spec": 1.1,
        "file_creator": "doubleline",
        "frame_classes": ["creasePattern"],
        "vertices_coords": [[x, y] for x, y in pattern.vertices],
        "edges_vertices": [[c.v0, c.v1] for c in pattern.creases],
        "edges_assignment": [c.assignment for c in pattern.creases],
        "edges_foldAngle": [emit_angle(i, c) for i, c in enumerate(pattern.creases)],
        "faces_vertices": [list(f) for f in pattern.faces],
    }
    for k, v in pattern.extras:  # already sorted by key
        doc[k] = json.loads(v)
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
