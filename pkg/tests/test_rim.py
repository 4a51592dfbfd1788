import math

import pytest

import flatfold as ff
from conftest import cyclic_variants


def pipeline(solution):
    return solution


def test_bisects_basic():
    # at a cone of angle theta, arrival/departure must split it into two
    # equal halves (theta/2 on each side)
    assert ff.bisects(math.pi, 0.0, math.pi / 2)
    assert ff.bisects(math.pi, 0.25, 0.25 + math.pi / 2)
    assert not ff.bisects(math.pi, 0.0, math.pi / 3)
    # wrap-around: the gap may be measured through zero
    assert ff.bisects(2.0, 1.9, 0.9)


def test_square_rim(square_solution):
    surf, sigma, rim, flat = square_solution
    assert rim is not None
    assert len(rim.vertices) == 3
    assert sorted(rim.lengths()) == pytest.approx(
        [1.0, 1.0, math.sqrt(2.0)], abs=1e-9)
    assert set(rim.vertices) == set(surf.cone_ids())


def test_hexagon_rim(hexagon_solution):
    surf, sigma, rim, flat = hexagon_solution
    assert rim is not None
    assert rim.lengths() == pytest.approx([math.sqrt(3.0)] * 3, abs=1e-9)


def test_cross_rim_order(cross_solution):
    surf, sigma, rim, flat = cross_solution
    assert rim is not None
    labels = [dict((c.class_index, c.label) for c in surf.cones)[v]
              for v in rim.vertices]
    assert labels in cyclic_variants(["a", "b", "c", "d"])


def test_rim_is_simple_and_bisecting(cross_solution):
    surf, sigma, rim, flat = cross_solution
    assert ff.is_simple(rim, surf)
    n = len(rim.segments)
    for i, seg in enumerate(rim.segments):
        nxt = rim.segments[(i + 1) % n]
        assert seg.target == nxt.source
        assert ff.bisects(surf.theta[seg.target], seg.arrival, nxt.departure)


def test_tetrahedron_has_no_rim():
    surf = ff.build_surface(ff.refine(ff.parse_spec(
        open("tests/data/tetrahedron.json").read())))
    sigma = ff.all_pairs(surf)
    log = ff.SearchLog()
    rim = ff.find_rim(surf, sigma, log=log)
    assert rim is None
    assert log.starts_explored > 0
    assert log.lines  # every explored start has a logged rejection


def test_cross_diagonal_start_premature_loop(cross_solution):
    surf, sigma, _, _ = cross_solution
    label_to_class = {c.label: c.class_index for c in surf.cones}
    log = ff.SearchLog()
    rim = ff.find_rim(surf, sigma, start=label_to_class["c"], log=log)
    assert rim is not None
    a, c = label_to_class["a"], label_to_class["c"]
    assert any(
        f"start=({c},{a})" in line and "premature-loop" in line
        for line in log.lines
    ), log.render()


@pytest.mark.parametrize("name", ["square_solution", "hexagon_solution",
                                  "cross_solution"])
def test_start_independence(name, request):
    surf, sigma, rim, flat = request.getfixturevalue(name)
    base = rim.vertices
    for v in surf.cone_ids():
        other = ff.find_rim(surf, sigma, start=v)
        assert other is not None
        assert other.vertices in cyclic_variants(base)
