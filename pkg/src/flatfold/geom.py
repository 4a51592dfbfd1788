"""Planar geometry helpers: vectors, rigid motions, polygons, ear clipping.

Everything works on plain (x, y) float tuples. Rigid motions are stored as
(c, s, tx, ty) meaning p -> (c*x - s*y + tx, s*x + c*y + ty).
"""

from __future__ import annotations

import math

Vec = tuple[float, float]

TWO_PI = 2.0 * math.pi


def sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def scale(a: Vec, k: float) -> Vec:
    return (a[0] * k, a[1] * k)


def lerp(a: Vec, b: Vec, t: float) -> Vec:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec, b: Vec) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Vec) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Vec, b: Vec) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def angle_ccw(u: Vec, v: Vec) -> float:
    """Counterclockwise angle from u to v, in [0, 2*pi)."""
    a = math.atan2(cross(u, v), dot(u, v))
    if a < 0.0:
        a += TWO_PI
    return a


def signed_area(pts) -> float:
    s = 0.0
    n = len(pts)
    for i in range(n):
        x0, y0 = pts[i]
        x1, y1 = pts[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def interior_angle(prev: Vec, v: Vec, nxt: Vec) -> float:
    """Interior angle at v of a counterclockwise polygon, in (0, 2*pi)."""
    a = angle_ccw(sub(nxt, v), sub(prev, v))
    return a if a > 0.0 else TWO_PI


def point_segment_distance(p: Vec, a: Vec, b: Vec) -> float:
    ab = sub(b, a)
    l2 = dot(ab, ab)
    if l2 <= 0.0:
        return dist(p, a)
    t = dot(sub(p, a), ab) / l2
    t = min(1.0, max(0.0, t))
    return dist(p, lerp(a, b, t))


def segments_intersect(p1: Vec, p2: Vec, q1: Vec, q2: Vec, eps: float) -> bool:
    """True if the closed segments meet anywhere (crossing, touch or overlap).

    eps is an absolute distance tolerance.
    """
    d1 = sub(p2, p1)
    d2 = sub(q2, q1)
    denom = cross(d1, d2)
    r = sub(q1, p1)
    sc = max(norm(d1), norm(d2), 1e-300)
    if abs(denom) > eps * sc:
        t = cross(r, d2) / denom
        u = cross(r, d1) / denom
        slack_t = eps / max(norm(d1), 1e-300)
        slack_u = eps / max(norm(d2), 1e-300)
        return -slack_t <= t <= 1.0 + slack_t and -slack_u <= u <= 1.0 + slack_u
    # near-parallel: report contact when an endpoint sits on the other segment
    return (
        point_segment_distance(q1, p1, p2) <= eps
        or point_segment_distance(q2, p1, p2) <= eps
        or point_segment_distance(p1, q1, q2) <= eps
        or point_segment_distance(p2, q1, q2) <= eps
    )


def is_simple_polygon(pts, eps: float) -> bool:
    """Brute-force simplicity test for a closed polygon given as vertex list."""
    n = len(pts)
    for i in range(n):
        a1, a2 = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shares an endpoint
            b1, b2 = pts[j], pts[(j + 1) % n]
            if segments_intersect(a1, a2, b1, b2, eps):
                return False
    return True


# ---------------------------------------------------------------------------
# rigid motions


IDENTITY = (1.0, 0.0, 0.0, 0.0)


def xform_apply(t, p: Vec) -> Vec:
    c, s, tx, ty = t
    x, y = p
    return (c * x - s * y + tx, s * x + c * y + ty)


def xform_compose(t1, t2):
    """Motion equal to applying t2 first, then t1."""
    c1, s1, x1, y1 = t1
    c2, s2, x2, y2 = t2
    return (
        c1 * c2 - s1 * s2,
        s1 * c2 + c1 * s2,
        c1 * x2 - s1 * y2 + x1,
        s1 * x2 + c1 * y2 + y1,
    )


def xform_invert(t):
    c, s, tx, ty = t
    return (c, -s, -(c * tx + s * ty), -(-s * tx + c * ty))


def xform_align(src_a: Vec, src_b: Vec, dst_a: Vec, dst_b: Vec):
    """Rigid motion taking src_a -> dst_a and direction src_b-src_a -> dst_b-dst_a."""
    u = sub(src_b, src_a)
    v = sub(dst_b, dst_a)
    nu = norm(u)
    nv = norm(v)
    if nu <= 0.0 or nv <= 0.0:
        raise ValueError("degenerate segment in alignment")
    c = (u[0] * v[0] + u[1] * v[1]) / (nu * nv)
    s = (u[0] * v[1] - u[1] * v[0]) / (nu * nv)
    h = math.hypot(c, s)
    c, s = c / h, s / h
    tx = dst_a[0] - (c * src_a[0] - s * src_a[1])
    ty = dst_a[1] - (s * src_a[0] + c * src_a[1])
    return (c, s, tx, ty)


# ---------------------------------------------------------------------------
# triangulation


class TriangulationError(Exception):
    pass


def ear_clip(pts) -> list[tuple[int, int, int]]:
    """Triangulate a simple ccw polygon by ear clipping.

    Returns index triples into pts. No new points are introduced; collinear
    boundary vertices are tolerated (they simply never form the clipped ear).
    """
    n = len(pts)
    if n < 3:
        raise TriangulationError("polygon with fewer than 3 vertices")
    idx = list(range(n))
    tris: list[tuple[int, int, int]] = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * n * n:
            raise TriangulationError("no ear found (degenerate polygon?)")
        m = len(idx)
        clipped = False
        for k in range(m):
            i0, i1, i2 = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
            a, b, c = pts[i0], pts[i1], pts[i2]
            area2 = cross(sub(b, a), sub(c, a))
            longest = max(dist(a, b), dist(b, c), dist(c, a))
            if area2 <= 1e-12 * longest * longest:
                continue  # reflex or flat corner
            ok = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                p = pts[j]
                # blocked when another vertex is inside or on the ear
                s0 = cross(sub(b, a), sub(p, a))
                s1 = cross(sub(c, b), sub(p, b))
                s2 = cross(sub(a, c), sub(p, c))
                margin = -1e-12 * longest * longest
                if s0 >= margin and s1 >= margin and s2 >= margin:
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                del idx[k]
                clipped = True
                break
        if not clipped:
            raise TriangulationError("no ear found (degenerate polygon?)")
    tris.append((idx[0], idx[1], idx[2]))
    a, b, c = (pts[i] for i in tris[-1])
    if cross(sub(b, a), sub(c, a)) <= 0.0:
        raise TriangulationError("final triangle is degenerate or flipped")
    return tris


class UnionFind:
    """Minimal union-find over integer keys with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra
