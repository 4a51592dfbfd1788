import json
import math
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

import flatfold as ff

DATA = pathlib.Path(__file__).parent / "data"


def load_instance(name: str) -> str:
    return (DATA / f"{name}.json").read_text()


def solve(text: str):
    """Run the full pipeline on an instance; returns (surf, sigma, rim, flat)."""
    spec = ff.parse_spec(text)
    refined = ff.refine(spec)
    report = ff.check_alexandrov(refined)
    if not report.all_passed:
        raise ff.InstanceError(report.render())
    surf = ff.build_surface(refined)
    sigma = ff.all_pairs(surf)
    rim = ff.find_rim(surf, sigma)
    flat = ff.reconstruct(surf, rim) if rim is not None else None
    return surf, sigma, rim, flat


@pytest.fixture(scope="session")
def square_solution():
    return solve(load_instance("square_diagonal"))


@pytest.fixture(scope="session")
def hexagon_solution():
    return solve(load_instance("hexagon"))


@pytest.fixture(scope="session")
def cross_solution():
    return solve(load_instance("latin_cross"))


def cyclic_variants(seq):
    """All rotations of seq and of its reversal."""
    seq = list(seq)
    n = len(seq)
    out = []
    for s in (seq, seq[::-1]):
        for k in range(n):
            out.append(s[k:] + s[:k])
    return out


def congruence_error(got, want):
    """Max vertex distance between two polygons over rigid motions that map
    vertex cycles onto each other (all rotations and the reflection)."""
    best = math.inf
    for cand in cyclic_variants(got):
        err = _aligned_error(cand, want)
        if err < best:
            best = err
    return best


def _aligned_error(got, want):
    if len(got) != len(want):
        return math.inf
    # Align got onto want with the rigid motion fitting the first edge,
    # trying both orientations.
    best = math.inf
    for mirror in (False, True):
        pts = [(x, -y) for x, y in got] if mirror else list(got)
        gx, gy = pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]
        wx, wy = want[1][0] - want[0][0], want[1][1] - want[0][1]
        gl = math.hypot(gx, gy)
        wl = math.hypot(wx, wy)
        if gl == 0 or wl == 0:
            continue
        # rotation taking (gx,gy)/gl to (wx,wy)/wl
        c = (gx * wx + gy * wy) / (gl * wl)
        s = (gx * wy - gy * wx) / (gl * wl)
        err = 0.0
        for (px, py), (qx, qy) in zip(pts, want):
            rx = c * (px - pts[0][0]) - s * (py - pts[0][1]) + want[0][0]
            ry = s * (px - pts[0][0]) + c * (py - pts[0][1]) + want[0][1]
            err = max(err, math.hypot(rx - qx, ry - qy))
        best = min(best, err)
    return best
