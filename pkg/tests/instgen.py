"""Random instance generators used by the test suite.

All generators take an explicit random.Random so every test is seeded.
"""

from __future__ import annotations

import json
import math
import random


def random_convex_polygon(rng: random.Random, n: int, scale: float = 1.0):
    """Convex polygon, ccw, with n distinct vertices on a random ellipse."""
    while True:
        angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
        ok = True
        for i in range(n):
            gap = (angles[(i + 1) % n] - angles[i]) % (2.0 * math.pi)
            if gap < 0.05:
                ok = False
                break
        if not ok:
            continue
        rx = scale * rng.uniform(0.5, 1.5)
        ry = scale * rng.uniform(0.5, 1.5)
        return [(rx * math.cos(a), ry * math.sin(a)) for a in angles]


def _perimeter(pts):
    n = len(pts)
    return sum(math.dist(pts[i], pts[(i + 1) % n]) for i in range(n))


def double_cover(pts, rng: random.Random):
    """Glue a convex polygon to its mirror image along the whole boundary.

    The boundary is split at two random points, so the instance exercises
    arcs that start and end away from polygon corners. Folds flat to the
    polygon itself, doubly covered.
    """
    n = len(pts)
    per = _perimeter(pts)
    back = [(x, -y) for (x, y) in reversed(pts)]
    # front param t maps to back param (per - e_last - t) mod per
    e_last = math.dist(pts[-1], pts[0])

    def s_of(t: float) -> float:
        return (per - e_last - t) % per

    ta = rng.uniform(0.0, per)
    tb = (ta + rng.uniform(0.3, 0.7) * per) % per
    gluings = []
    for t0, t1 in ((ta, tb), (tb, ta)):
        gluings.append(
            {"a": ["front", t0, t1], "b": ["back", s_of(t1), s_of(t0)]}
        )
    return {
        "polygons": [
            {"id": "front", "vertices": [list(p) for p in pts]},
            {"id": "back", "vertices": [list(p) for p in back]},
        ],
        "gluings": gluings,
    }


def perimeter_halving(pts, rng: random.Random):
    """Fold a convex polygon's boundary onto itself about a random point.

    Always satisfies the gluing conditions; the folded shape is generally
    a non-degenerate convex polyhedron.
    """
    per = _perimeter(pts)
    x = rng.uniform(0.0, per)
    half = 0.5 * per
    y = (x + half) % per
    return {
        "polygons": [{"id": "p", "vertices": [list(p) for p in pts]}],
        "gluings": [
            {"a": ["p", x, y], "b": ["p", y, x]},
        ],
    }


def dumps(instance) -> str:
    return json.dumps(instance, indent=2, sort_keys=True)
