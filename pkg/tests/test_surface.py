import math

import pytest

import flatfold as ff
from conftest import load_instance


def build(name: str) -> ff.Surface:
    return ff.build_surface(ff.refine(ff.parse_spec(load_instance(name))))


@pytest.mark.parametrize("name,expected_area", [
    ("square_diagonal", 1.0),
    ("hexagon", 3 * math.sqrt(3) / 2),
    ("latin_cross", 6.0),
    ("tetrahedron", math.sqrt(3)),
])
def test_total_area_matches_input_polygons(name, expected_area):
    surf = build(name)
    assert surf.total_area() == pytest.approx(expected_area, rel=1e-12)


@pytest.mark.parametrize("name", [
    "square_diagonal", "hexagon", "latin_cross", "tetrahedron",
])
def test_halfedge_structure_is_consistent(name):
    surf = build(name)
    n_h = 3 * surf.n_faces()
    for h in range(n_h):
        assert surf.twin[surf.twin[h]] == h
        assert surf.twin[h] != h
        # twins carry the same metric length
        assert surf.he_length(h) == pytest.approx(
            surf.he_length(surf.twin[h]), rel=1e-12)
        # twins connect the same vertex classes, opposite orientation
        assert surf.he_origin(h) == surf.he_origin(surf.next_he(surf.twin[h]))


@pytest.mark.parametrize("name", [
    "square_diagonal", "hexagon", "latin_cross", "tetrahedron",
])
def test_vertex_angles_match_refined_classes(name):
    r = ff.refine(ff.parse_spec(load_instance(name)))
    surf = ff.build_surface(r)
    for v in range(len(surf.theta)):
        assert surf.vertex_angle(v) == pytest.approx(surf.theta[v], abs=1e-9)
        assert surf.theta[v] == pytest.approx(r.class_angle[v], abs=1e-9)


def test_transition_is_isometry():
    surf = build("hexagon")
    for h in range(3 * surf.n_faces()):
        # transition maps the twin face's chart into this face's chart,
        # carrying the shared edge onto itself with reversed orientation
        xform = surf.transition(h)
        qa, qb = surf.he_points(surf.twin[h])
        ta, tb = _apply(xform, qa), _apply(xform, qb)
        pa, pb = surf.he_points(h)
        assert _close(ta, pb) and _close(tb, pa)


def _apply(xf, p):
    c, s, tx, ty = xf
    return (c * p[0] - s * p[1] + tx, s * p[0] + c * p[1] + ty)


def _close(p, q, tol=1e-9):
    return math.hypot(p[0] - q[0], p[1] - q[1]) <= tol


def test_fan_cumulative_angles():
    surf = build("square_diagonal")
    for v, fan in surf.fans.items():
        total = surf.theta[v]
        angles = [ang for _, ang in fan]
        assert angles[0] == pytest.approx(0.0, abs=1e-12)
        assert all(0.0 <= a < total + 1e-9 for a in angles)
        assert angles == sorted(angles)


def test_cone_ids_square():
    surf = build("square_diagonal")
    cones = surf.cone_ids()
    assert len(cones) == 3
    assert sorted(surf.theta[v] for v in cones) == pytest.approx(
        [math.pi / 2, math.pi / 2, math.pi], abs=1e-12)


def test_vertex_count_bound():
    # quotient vertex classes never exceed original corner count + 4
    for name in ("square_diagonal", "hexagon", "latin_cross", "tetrahedron"):
        r = ff.refine(ff.parse_spec(load_instance(name)))
        n_original = sum(len(p.spec.vertices) for p in r.polys.values())
        assert len(r.classes) <= n_original + 4
