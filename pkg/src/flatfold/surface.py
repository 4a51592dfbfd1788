"""The abstract polyhedral surface: triangles, twins, charts and cone data.

The surface never has 3D coordinates. Each triangle carries a private 2D
chart (the coordinates of its corners inside the source polygon); crossing
a twin edge applies a rigid motion between the two charts. Halfedge k of
face f has index 3*f + k and runs from corner k to corner (k+1) % 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geom import (
    TWO_PI,
    UnionFind,
    Vec,
    angle_ccw,
    cross,
    dist,
    ear_clip,
    sub,
    xform_align,
)
from .gluing import ConePoint, RefinedGluing, cone_points

CHART_TOL = 1e-12  # relative, chart lengths vs intrinsic lengths
ANGLE_AGREE_TOL = 1e-9  # relative, triangle angle sums vs gluing class angles


class BuildError(Exception):
    """The refined gluing could not be realized as a valid surface."""


@dataclass
class Surface:
    face_vertex: list[tuple[int, int, int]]  # quotient class id per corner
    chart: list[tuple[Vec, Vec, Vec]]
    twin: list[int]
    face_polygon: list[str]
    theta: list[float]  # total angle per quotient class
    cones: list[ConePoint]
    refined: RefinedGluing
    fans: dict[int, list[tuple[int, float]]] = field(default_factory=dict)
    # fans[v]: outgoing halfedges around v, counterclockwise, with the
    # cumulative angle of each measured from the reference halfedge

    # -- halfedge bookkeeping ------------------------------------------------

    def n_faces(self) -> int:
        return len(self.face_vertex)

    @staticmethod
    def face_of(h: int) -> int:
        return h // 3

    @staticmethod
    def next_he(h: int) -> int:
        return h - h % 3 + (h + 1) % 3

    @staticmethod
    def prev_he(h: int) -> int:
        return h - h % 3 + (h + 2) % 3

    def he_origin(self, h: int) -> int:
        return self.face_vertex[h // 3][h % 3]

    def he_points(self, h: int) -> tuple[Vec, Vec]:
        f, k = divmod(h, 3)
        return self.chart[f][k], self.chart[f][(k + 1) % 3]

    def he_length(self, h: int) -> float:
        a, b = self.he_points(h)
        return dist(a, b)

    def corner_angle(self, f: int, k: int) -> float:
        a, b, c = self.chart[f]
        pts = (a, b, c)
        v = pts[k]
        return angle_ccw(sub(pts[(k + 1) % 3], v), sub(pts[(k + 2) % 3], v))

    def face_area(self, f: int) -> float:
        a, b, c = self.chart[f]
        return 0.5 * cross(sub(b, a), sub(c, a))

    def total_area(self) -> float:
        return sum(self.face_area(f) for f in range(self.n_faces()))

    def transition(self, h: int):
        """Rigid motion mapping the twin face's chart into face(h)'s chart."""
        t = self.twin[h]
        p0, p1 = self.he_points(h)
        q0, q1 = self.he_points(t)
        return xform_align(q0, q1, p1, p0)

    # -- angular coordinates around a vertex ----------------------------------

    def vertex_angle(self, v: int) -> float:
        if not 0 <= v < len(self.theta):
            raise BuildError(f"unknown vertex {v}")
        return self.theta[v]

    def angle_of_halfedge(self, v: int, h: int) -> float:
        for he, ang in self.fans[v]:
            if he == h:
                return ang
        raise BuildError(f"halfedge {h} does not emanate from vertex {v}")

    def angle_of_direction(self, v: int, f: int, k: int, direction: Vec) -> float:
        """Angle of a ray leaving v, measured from v's reference halfedge.

        The ray lives in face f's chart and leaves the corner k of f, which
        must be an occurrence of v. Result is in [0, theta(v)).
        """
        if self.face_vertex[f][k] != v:
            raise BuildError(f"corner {k} of face {f} is not vertex {v}")
        h = 3 * f + k
        base = self.angle_of_halfedge(v, h)
        a, b = self.he_points(h)
        delta = angle_ccw(sub(b, a), direction)
        corner = self.corner_angle(f, k)
        if delta > corner:  # clamp tiny overshoot at the fan boundaries
            delta = corner if delta - corner < TWO_PI - corner else 0.0
        ang = base + delta
        theta = self.theta[v]
        if ang >= theta - 1e-12 * max(theta, 1.0):
            ang -= theta
        return max(0.0, ang)

    def cone_ids(self) -> list[int]:
        return [c.class_index for c in self.cones]


def build_surface(r: RefinedGluing, angle_tol: float | None = None) -> Surface:
    """Triangulate every refined polygon and stitch faces along the gluing."""
    cones = cone_points(r)

    face_vertex: list[tuple[int, int, int]] = []
    chart: list[tuple[Vec, Vec, Vec]] = []
    face_polygon: list[str] = []
    he_by_pair: dict[tuple[str, int, int], int] = {}  # (pid, local i, local j)

    for pid in sorted(r.polys):
        rp = r.polys[pid]
        pts = rp.coords
        try:
            tris = ear_clip(pts)
        except Exception as e:
            raise BuildError(f"triangulation failed for polygon {pid!r}: {e}") from e
        for (i, j, k) in tris:
            f = len(face_vertex)
            face_vertex.append(
                (r.vertex_class[(pid, i)], r.vertex_class[(pid, j)], r.vertex_class[(pid, k)])
            )
            chart.append((pts[i], pts[j], pts[k]))
            face_polygon.append(pid)
            a, b, c = pts[i], pts[j], pts[k]
            area2 = cross(sub(b, a), sub(c, a))
            longest = max(dist(a, b), dist(b, c), dist(c, a))
            if area2 <= 2e-12 * longest * longest:
                raise BuildError(f"degenerate triangle in polygon {pid!r}")
            for s, (u, v) in enumerate(((i, j), (j, k), (k, i))):
                he_by_pair[(pid, u, v)] = 3 * f + s

    twin = [-1] * (3 * len(face_vertex))
    for (pid, u, v), h in he_by_pair.items():
        if twin[h] != -1:
            continue
        m = len(r.polys[pid].params)
        if (u + 1) % m == v:  # polygon boundary edge u -> v is edge index u
            qid, j = r.edge_pairs[(pid, u)]
            mq = len(r.polys[qid].params)
            other = he_by_pair.get((qid, j, (j + 1) % mq))
        else:  # interior diagonal, twinned inside the polygon
            other = he_by_pair.get((pid, v, u))
        if other is None:
            raise BuildError(f"unmatched halfedge in polygon {pid!r} ({u}->{v})")
        twin[h], twin[other] = other, h

    theta = [0.0] * len(r.classes)
    surf = Surface(
        face_vertex=face_vertex,
        chart=chart,
        twin=twin,
        face_polygon=face_polygon,
        theta=theta,
        cones=cones,
        refined=r,
    )

    # twin edge lengths must agree
    for h, t in enumerate(twin):
        la, lb = surf.he_length(h), surf.he_length(t)
        if abs(la - lb) > 1e-9 * max(la, lb, 1.0):
            raise BuildError(f"twin edges {h}/{t} differ in length: {la} vs {lb}")

    # corner fans: walk twin(prev(.)) counterclockwise around each vertex
    seen = [False] * len(twin)
    for h0 in range(len(twin)):
        if seen[h0]:
            continue
        v = surf.he_origin(h0)
        fan = []
        h = h0
        while True:
            seen[h] = True
            fan.append(h)
            h = twin[Surface.prev_he(h)]
            if h == h0:
                break
        # deterministic datum: smallest halfedge index
        start = fan.index(min(fan))
        fan = fan[start:] + fan[:start]
        if v in surf.fans:
            raise BuildError(f"vertex {v} has a disconnected corner fan")
        cum = 0.0
        entries = []
        for h in fan:
            entries.append((h, cum))
            cum += surf.corner_angle(h // 3, h % 3)
        surf.fans[v] = entries
        theta[v] = cum

    # recomputed angles must match the gluing-derived class angles
    for vid, ang in enumerate(theta):
        want = r.class_angle[vid]
        if abs(ang - want) > ANGLE_AGREE_TOL * max(1.0, want):
            raise BuildError(
                f"class {vid}: triangle angles sum to {ang}, gluing says {want}"
            )

    # Euler characteristic and connectivity
    v_count = len(r.classes)
    e_count = len(twin) // 2
    f_count = len(face_vertex)
    if v_count - e_count + f_count != 2:
        raise BuildError(
            f"Euler characteristic {v_count - e_count + f_count} != 2"
        )
    uf = UnionFind(f_count)
    for h, t in enumerate(twin):
        uf.union(h // 3, t // 3)
    if len({uf.find(f) for f in range(f_count)}) != 1:
        raise BuildError("surface is disconnected")

    return surf


def dump(surf: Surface) -> str:
    """Stable plain-text listing of faces, twins and cone data."""
    lines = [f"faces {surf.n_faces()}  classes {len(surf.theta)}"]
    for f in range(surf.n_faces()):
        vs = surf.face_vertex[f]
        tw = tuple(surf.twin[3 * f + k] for k in range(3))
        pts = " ".join(f"({x:.9g},{y:.9g})" for x, y in surf.chart[f])
        lines.append(f"face {f} [{surf.face_polygon[f]}] v={vs} twin={tw} chart={pts}")
    for c in surf.cones:
        lines.append(f"cone {c.label} class={c.class_index} angle={c.angle:.12g}")
    flat = [v for v in range(len(surf.theta)) if v not in {c.class_index for c in surf.cones}]
    for v in flat:
        lines.append(f"flat class={v} angle={surf.theta[v]:.12g}")
    return "\n".join(lines)
