import json
import math
import random

import pytest

import flatfold as ff
import instgen
from conftest import load_instance  # noqa: F401


def build(name: str) -> ff.Surface:
    return ff.build_surface(ff.refine(ff.parse_spec(load_instance(name))))


def test_square_known_distances():
    surf = build("square_diagonal")
    sigma = ff.all_pairs(surf)
    # the doubled surface is the doubly covered right triangle with legs 1:
    # cone separations are the triangle's edge lengths
    lengths = sorted(
        sigma.min_length(i, j)
        for i in sigma.sources for j in sigma.sources if i < j
    )
    assert lengths == pytest.approx([1.0, 1.0, math.sqrt(2.0)], abs=1e-9)


def test_hexagon_known_distances():
    surf = build("hexagon")
    sigma = ff.all_pairs(surf)
    lengths = [
        sigma.min_length(i, j)
        for i in sigma.sources for j in sigma.sources if i < j
    ]
    assert lengths == pytest.approx([math.sqrt(3.0)] * 3, abs=1e-9)


def test_symmetry_and_triangle_inequality():
    for name in ("square_diagonal", "hexagon", "latin_cross", "tetrahedron"):
        surf = build(name)
        sigma = ff.all_pairs(surf)
        src = sigma.sources
        for i in src:
            for j in src:
                if i == j:
                    continue
                dij = sigma.min_length(i, j)
                assert dij == pytest.approx(sigma.min_length(j, i), rel=1e-9)
                for k in src:
                    if k in (i, j):
                        continue
                    assert dij <= sigma.min_length(i, k) + sigma.min_length(k, j) + 1e-9


def test_fold_line_geodesics_are_unique():
    # geodesics along the fold line of a doubly covered polygon are single
    # paths, not mirror-image ties
    surf = build("square_diagonal")
    sigma = ff.all_pairs(surf)
    assert all(len(ps) == 1 for ps in sigma.pairs.values())


def test_tie_detection_on_latin_cross(cross_solution):
    surf, sigma, _, flat = cross_solution
    label_to_class = {c.label: c.class_index for c in surf.cones}
    a, c = label_to_class["a"], label_to_class["c"]
    # the two interior diagonals between the opposite cone pair are tied
    paths = sigma.pairs[(a, c)]
    assert len(paths) == 2
    assert all(p.length == pytest.approx(2.0, abs=1e-9) for p in paths)
    # the tied pair must have distinct departure directions at the source
    assert abs(paths[0].departure - paths[1].departure) > 1e-6


def test_departure_angles_within_cone_angle():
    surf = build("latin_cross")
    sigma = ff.all_pairs(surf)
    for v, paths in sigma.outgoing.items():
        theta = surf.theta[v]
        deps = [p.departure for p in paths]
        assert deps == sorted(deps)
        assert all(0.0 <= d < theta + 1e-9 for d in deps)


def test_oracle_agrees_on_goldens():
    for name in ("square_diagonal", "hexagon", "latin_cross", "tetrahedron"):
        surf = build(name)
        main = ff.all_pairs(surf)
        # the depth cap is the caller's choice; the highly symmetric unit-grid
        # goldens make exhaustive unfolding exponential in the cap, and 24
        # crossings already covers every shortest geodesic here
        orc = ff.all_pairs(surf, use_oracle=True,
                           oracle_depth_cap=min(8 * surf.n_faces(), 24))
        for key, paths in main.pairs.items():
            opaths = orc.pairs[key]
            a, b = paths[0].length, opaths[0].length
            assert abs(a - b) <= 1e-9 * max(a, b), (name, key)
            assert len(paths) == len(opaths), (name, key)
            got = sorted(p.length for p in paths)
            want = sorted(p.length for p in opaths)
            assert got == pytest.approx(want, rel=1e-9)


def test_oracle_cap_monotone():
    # a small crossing cap can only miss geodesics, never invent shorter ones
    surf = build("latin_cross")
    vi, vj = surf.cone_ids()[0], surf.cone_ids()[2]
    converged, _ = ff.oracle_shortest_path(surf, vi, vj, depth_cap=24)
    for cap in (1, 2, 4, 8):
        m, paths = ff.oracle_shortest_path(surf, vi, vj, depth_cap=cap)
        assert m >= converged - 1e-12
        assert paths


def test_oracle_agrees_on_fuzzed_double_covers():
    rng = random.Random(20260826)
    for _ in range(5):
        pts = instgen.random_convex_polygon(rng, rng.randint(3, 8))
        inst = instgen.double_cover(pts, rng)
        surf = ff.build_surface(ff.refine(ff.parse_spec(json.dumps(inst))))
        main = ff.all_pairs(surf)
        orc = ff.all_pairs(surf, use_oracle=True,
                           oracle_depth_cap=8 * surf.n_faces())
        for key, paths in main.pairs.items():
            assert abs(paths[0].length - orc.pairs[key][0].length) <= \
                1e-9 * paths[0].length


def test_geodesic_trace_endpoints():
    surf = build("square_diagonal")
    sigma = ff.all_pairs(surf)
    for (i, j), paths in sigma.pairs.items():
        for p in paths:
            pts = p.trace(surf)
            assert len(pts) >= 2
            # consecutive trace chords sum to the path length
            total = 0.0
            chords = p.face_chords(surf)
            for _, a, b, *_ in chords:
                total += math.hypot(b[0] - a[0], b[1] - a[1])
            assert total == pytest.approx(p.length, rel=1e-9)
