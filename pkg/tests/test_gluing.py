import json
import math

import pytest

import flatfold as ff
from conftest import load_instance

TWO_PI = 2.0 * math.pi


def test_parse_square():
    spec = ff.parse_spec(load_instance("square_diagonal"))
    assert [p.id for p in spec.polygons] == ["sq"]
    assert spec.polygon("sq").perimeter == pytest.approx(4.0)
    assert len(spec.identifications) == 1


def test_parse_rejects_bad_documents():
    with pytest.raises(ff.InstanceError):
        ff.parse_spec(json.dumps({"polygons": []}))
    with pytest.raises(ff.InstanceError):
        ff.parse_spec(json.dumps({
            "polygons": [{"id": "p", "vertices": [[0, 0], [1, 0]]}],
            "gluings": [],
        }))
    with pytest.raises(ff.InstanceError):
        # clockwise polygon
        ff.parse_spec(json.dumps({
            "polygons": [{"id": "p", "vertices": [[0, 0], [0, 1], [1, 1], [1, 0]]}],
            "gluings": [],
        }))


def test_check_tiling_detects_gap_and_length_mismatch():
    base = {"polygons": [{"id": "p", "vertices": [[0, 0], [2, 0], [2, 1], [0, 1]]}]}
    gap = dict(base, gluings=[{"a": ["p", 0, 2], "b": ["p", 2, 4]}])
    ok, msgs = ff.check_tiling(ff.parse_spec(json.dumps(gap)))
    assert not ok and msgs
    bad_len = dict(base, gluings=[
        {"a": ["p", 0, 2], "b": ["p", 2, 3]},
        {"a": ["p", 3, 6], "b": ["p", 3, 6]},
    ])
    ok, _ = ff.check_tiling(ff.parse_spec(json.dumps(bad_len)))
    assert not ok


def test_refine_square_diagonal():
    r = ff.refine(ff.parse_spec(load_instance("square_diagonal")))
    sq = r.polys["sq"]
    # the fold midpoint (2.0 along the boundary) is already a corner, so no
    # new vertices are needed
    assert sq.params == [0.0, 1.0, 2.0, 3.0]
    assert len(r.classes) == 3
    angles = sorted(r.class_angle)
    assert angles == pytest.approx([math.pi / 2, math.pi / 2, math.pi], abs=1e-12)


def test_refine_inserts_breakpoints_for_offset_halving():
    # unit square glued to itself by perimeter halving with seam at 0.5
    inst = {
        "polygons": [{"id": "p", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        "gluings": [{"a": ["p", 0.5, 2.5], "b": ["p", 2.5, 0.5]}],
    }
    r = ff.refine(ff.parse_spec(json.dumps(inst)))
    assert 0.5 in r.polys["p"].params and 2.5 in r.polys["p"].params
    # every refined edge is glued to exactly one partner of equal length
    for (pid, i), (qid, j) in r.edge_pairs.items():
        assert r.edge_pairs[(qid, j)] == (pid, i)
        assert r.polys[pid].edge_length(i) == pytest.approx(
            r.polys[qid].edge_length(j), rel=1e-12)


def test_refine_wrapped_arc():
    # gluing arcs may wrap past parameter 0
    inst = {
        "polygons": [{"id": "p", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        "gluings": [{"a": ["p", 3.5, 1.5], "b": ["p", 1.5, 3.5]}],
    }
    r = ff.refine(ff.parse_spec(json.dumps(inst)))
    assert 1.5 in r.polys["p"].params and 3.5 in r.polys["p"].params
    assert ff.check_alexandrov(r).all_passed


def test_check_alexandrov_passes_goldens():
    for name in ("square_diagonal", "hexagon", "latin_cross", "tetrahedron"):
        r = ff.refine(ff.parse_spec(load_instance(name)))
        report = ff.check_alexandrov(r)
        assert report.all_passed, f"{name}: {report.render()}"
        assert abs(ff.gauss_bonnet_residual(r)) < len(r.classes) * 1e-9


def test_check_alexandrov_rejects_angle_excess():
    # glue two opposite edges of a square into a cylinder-like strip:
    # the two seam corner classes each get total angle pi, but the free
    # boundary edges are unmatched -> tiling fails before anything else
    inst = {
        "polygons": [{"id": "p", "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}],
        "gluings": [{"a": ["p", 0, 1], "b": ["p", 3, 2]}],
    }
    with pytest.raises(ff.InstanceError):
        ff.refine(ff.parse_spec(json.dumps(inst)))


def test_cone_points_labels_and_strictness():
    r = ff.refine(ff.parse_spec(load_instance("hexagon")))
    cones = ff.cone_points(r)
    assert [c.label for c in cones] == ["a", "b", "c"]
    assert all(c.angle == pytest.approx(2 * math.pi / 3, abs=1e-12) for c in cones)


def test_render_report_mentions_all_conditions():
    r = ff.refine(ff.parse_spec(load_instance("square_diagonal"))); 
    text = ff.check_alexandrov(r).render()
    assert "perimeters matched" in text
    assert "angle at most 2*pi" in text
    assert "sphere topology" in text
