import json
import math

import pytest

from doubleline.fold_io import get_extra, load_fold, save_fold, set_extra
from doubleline.pattern import PatternError
from doubleline.patterns import gen_dl_miura, gen_miura


def _doc(**overrides):
    doc = {
        "vertices_coords": [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]],
        "edges_vertices": [[0, 1], [0, 2], [0, 3], [0, 4], [1, 2], [2, 3], [3, 4], [4, 1]],
        "edges_assignment": ["V", "M", "V", "M", "B", "B", "B", "B"],
    }
    doc.update(overrides)
    return json.dumps(doc).encode()


def test_single_vertex_document():
    pattern = load_fold(_doc())
    assert pattern.interior_vertices == (0,)
    assert len(pattern.creases) == 8
    assert [c.assignment for c in pattern.creases[:4]] == ["V", "M", "V", "M"]


def test_round_trip_identity():
    data = save_fold(gen_dl_miura(3, 3, math.radians(60), math.pi / 2))
    assert save_fold(load_fold(data)) == data


def test_round_trip_plain_pattern():
    data = save_fold(gen_miura(3, 3, math.radians(60)).pattern)
    assert save_fold(load_fold(data)) == data


def test_crossing_creases_rejected():
    doc = _doc(
        vertices_coords=[[0, 0], [1, 1], [1, 0], [0, 1]],
        edges_vertices=[[0, 1], [2, 3]],
        edges_assignment=["U", "U"],
    )
    with pytest.raises(PatternError):
        load_fold(doc)


def test_parse_error():
    with pytest.raises(ValueError):
        load_fold(b"")
    with pytest.raises(ValueError):
        load_fold(b"[1, 2, 3]")


def test_fold_angles_round_trip():
    pattern = load_fold(_doc())
    angles = [0.5, -0.25, 0.5, -0.25, 0.0, 0.0, 0.0, 0.0]
    reloaded = load_fold(save_fold(pattern, angles))
    got = [c.fold_angle if c.fold_angle is not None else 0.0 for c in reloaded.creases]
    assert max(abs(a - b) for a, b in zip(got, angles)) < 1e-12


def test_unknown_keys_preserved():
    doc = json.loads(_doc())
    doc["file_author"] = "someone"
    doc["frame_unit"] = "unit"
    out = json.loads(save_fold(load_fold(json.dumps(doc).encode())))
    assert out["file_author"] == "someone"
    assert out["frame_unit"] == "unit"


def test_extras_round_trip():
    pattern = load_fold(_doc())
    pattern = set_extra(pattern, "doubleline:test", {"a": [1, 2], "b": "x"})
    reloaded = load_fold(save_fold(pattern))
    assert get_extra(reloaded, "doubleline:test") == {"a": [1, 2], "b": "x"}
    assert get_extra(reloaded, "doubleline:absent") is None
