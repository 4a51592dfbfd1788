"""Problem instances: polygons plus boundary identifications.

An instance is a set of simple counterclockwise polygons together with
pairs of boundary arcs that are glued to each other with mutually reversed
orientation (arc `a` forward against arc `b` backward). This module parses
instance documents, refines a gluing until it is edge-to-edge, and checks
the three conditions that make it the boundary data of a convex
polyhedron: the arcs tile all perimeters, no point collects more than
2*pi of angle, and the quotient is a topological sphere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .geom import (
    TWO_PI,
    UnionFind,
    Vec,
    dist,
    interior_angle,
    is_simple_polygon,
    lerp,
    signed_area,
)

LENGTH_TOL = 1e-9  # relative, on arc-length comparisons
ANGLE_TOL = 1e-7  # radians, on comparisons against 2*pi


class InstanceError(Exception):
    """Malformed or inconsistent problem instance."""


@dataclass
class PolygonSpec:
    id: str
    vertices: tuple[Vec, ...]
    perimeter: float = field(init=False)
    vertex_params: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        n = len(self.vertices)
        if n < 3:
            raise InstanceError(f"polygon {self.id!r}: fewer than 3 vertices")
        for x, y in self.vertices:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise InstanceError(f"polygon {self.id!r}: non-finite coordinate")
        params = [0.0]
        for i in range(n):
            a = self.vertices[i]
            b = self.vertices[(i + 1) % n]
            d = dist(a, b)
            if d <= 0.0:
                raise InstanceError(f"polygon {self.id!r}: repeated consecutive vertex {i}")
            params.append(params[-1] + d)
        self.perimeter = params[-1]
        self.vertex_params = tuple(params[:-1])
        if signed_area(self.vertices) <= 0.0:
            raise InstanceError(f"polygon {self.id!r}: clockwise or zero-area boundary")
        if not is_simple_polygon(self.vertices, 1e-12 * self.perimeter):
            raise InstanceError(f"polygon {self.id!r}: self-intersecting boundary")

    def point_at(self, param: float) -> Vec:
        s = param % self.perimeter
        n = len(self.vertices)
        for i in range(n):
            p0 = self.vertex_params[i]
            p1 = self.vertex_params[i + 1] if i + 1 < n else self.perimeter
            if s <= p1 + 1e-15 * self.perimeter:
                a = self.vertices[i]
                b = self.vertices[(i + 1) % n]
                t = 0.0 if p1 == p0 else (s - p0) / (p1 - p0)
                return lerp(a, b, t)
        return self.vertices[0]

    def corner_angle(self, i: int) -> float:
        n = len(self.vertices)
        return interior_angle(
            self.vertices[(i - 1) % n], self.vertices[i], self.vertices[(i + 1) % n]
        )


@dataclass(frozen=True)
class BoundaryArc:
    polygon: str
    start: float
    end: float  # end == start denotes a zip point; end may equal the perimeter

    def length(self, perimeter: float) -> float:
        if self.end == self.start:
            return 0.0
        d = (self.end - self.start) % perimeter
        return perimeter if d == 0.0 else d


@dataclass
class GluingSpec:
    polygons: list[PolygonSpec]
    identifications: list[tuple[BoundaryArc, BoundaryArc]]

    def polygon(self, pid: str) -> PolygonSpec:
        for p in self.polygons:
            if p.id == pid:
                return p
        raise InstanceError(f"unknown polygon id {pid!r}")


def parse_spec(text: str) -> GluingSpec:
    """Parse an instance document (JSON, see the input format docs)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceError(f"malformed document: {e}") from e
    if not isinstance(doc, dict) or "polygons" not in doc or "gluings" not in doc:
        raise InstanceError("document must be an object with 'polygons' and 'gluings'")
    polygons: list[PolygonSpec] = []
    seen = set()
    for entry in doc["polygons"]:
        pid = entry.get("id")
        verts = entry.get("vertices")
        if not isinstance(pid, str) or not isinstance(verts, list):
            raise InstanceError("polygon entries need an 'id' and a 'vertices' list")
        if pid in seen:
            raise InstanceError(f"duplicate polygon id {pid!r}")
        seen.add(pid)
        polygons.append(PolygonSpec(pid, tuple((float(x), float(y)) for x, y in verts)))
    if not polygons:
        raise InstanceError("empty polygon list")
    spec = GluingSpec(polygons, [])
    for entry in doc["gluings"]:
        arcs = []
        for key in ("a", "b"):
            if key not in entry:
                raise InstanceError("each gluing needs arcs 'a' and 'b'")
            pid, start, end = entry[key]
            poly = spec.polygon(pid)
            start, end = float(start), float(end)
            if not (0.0 <= start < poly.perimeter) or not (0.0 <= end <= poly.perimeter):
                raise InstanceError(
                    f"arc ({pid!r}, {start}, {end}) out of range [0, {poly.perimeter})"
                )
            arcs.append(BoundaryArc(pid, start, end))
        spec.identifications.append((arcs[0], arcs[1]))
    return spec


def check_tiling(spec: GluingSpec, tol_rel: float = LENGTH_TOL):
    """Do the arcs cover every perimeter exactly once? Returns (ok, messages)."""
    msgs: list[str] = []
    per_poly: dict[str, list[tuple[float, float]]] = {p.id: [] for p in spec.polygons}
    for a, b in spec.identifications:
        pa, pb = spec.polygon(a.polygon), spec.polygon(b.polygon)
        la, lb = a.length(pa.perimeter), b.length(pb.perimeter)
        tol = tol_rel * max(pa.perimeter, pb.perimeter)
        if abs(la - lb) > tol:
            msgs.append(f"arc lengths differ: {a} ({la}) vs {b} ({lb})")
        for arc, poly, l in ((a, pa, la), (b, pb, lb)):
            if l > 0.0:
                per_poly[poly.id].append((arc.start % poly.perimeter, l))
    for p in spec.polygons:
        tol = tol_rel * p.perimeter
        arcs = sorted(per_poly[p.id])
        total = sum(l for _, l in arcs)
        if abs(total - p.perimeter) > len(arcs) * tol + tol:
            msgs.append(f"polygon {p.id!r}: arcs cover {total} of perimeter {p.perimeter}")
            continue
        if not arcs:
            msgs.append(f"polygon {p.id!r}: boundary not covered by any arc")
            continue
        cursor = arcs[0][0]
        for start, l in arcs:
            if abs((start - cursor) % p.perimeter) > tol and abs(
                (cursor - start) % p.perimeter
            ) > tol:
                msgs.append(f"polygon {p.id!r}: gap or overlap near parameter {start}")
            cursor = (start + l) % p.perimeter
    return (not msgs, msgs)


# ---------------------------------------------------------------------------
# refinement


@dataclass
class RefinedPolygon:
    spec: PolygonSpec
    params: list[float]  # sorted breakpoint parameters, the refined vertices
    coords: list[Vec]
    angles: list[float]  # interior corner angle at each refined vertex

    def edge_length(self, i: int) -> float:
        nxt = self.params[i + 1] if i + 1 < len(self.params) else self.spec.perimeter
        return nxt - self.params[i]


@dataclass
class RefinedGluing:
    spec: GluingSpec
    polys: dict[str, RefinedPolygon]
    edge_pairs: dict[tuple[str, int], tuple[str, int]]  # involution on (pid, edge idx)
    classes: list[list[tuple[str, int]]]  # quotient classes of (pid, vertex idx)
    class_angle: list[float]
    vertex_class: dict[tuple[str, int], int]
    tiling_ok: bool
    tiling_msgs: list[str]

    def total_vertices(self) -> int:
        return sum(len(p.spec.vertices) for p in self.polys.values())


def _arc_map(arc_a: BoundaryArc, arc_b: BoundaryArc, pa: PolygonSpec, pb: PolygonSpec):
    """Forward-on-a to backward-on-b parameter map over arc a."""
    la = arc_a.length(pa.perimeter)

    def fwd(p: float) -> float:
        s = (p - arc_a.start) % pa.perimeter
        if s > la:
            s = la if s - la < pa.perimeter - la else 0.0
        return (arc_b.end - s) % pb.perimeter

    return la, fwd


def refine(spec: GluingSpec, tol_rel: float = LENGTH_TOL) -> RefinedGluing:
    """Insert boundary vertices until the gluing maps whole edges to whole edges."""
    tiling_ok, tiling_msgs = check_tiling(spec, tol_rel)
    if not tiling_ok:
        raise InstanceError("arcs do not tile the perimeters: " + "; ".join(tiling_msgs))

    polys = {p.id: p for p in spec.polygons}
    tol = {pid: tol_rel * p.perimeter for pid, p in polys.items()}
    points: dict[str, list[float]] = {pid: [] for pid in polys}

    def arc_offset(param: float, start: float, pid: str) -> float:
        """Offset of param past start along the boundary, snapping the wrap."""
        s = (param - start) % polys[pid].perimeter
        if s >= polys[pid].perimeter - tol[pid]:
            s = 0.0
        return s

    def insert(pid: str, param: float) -> bool:
        p = polys[pid]
        param = param % p.perimeter
        lst = points[pid]
        for q in lst:
            d = abs(param - q)
            if min(d, p.perimeter - d) <= tol[pid]:
                return False
        lst.append(param)
        return True

    for p in spec.polygons:
        for param in p.vertex_params:
            insert(p.id, param)
    for a, b in spec.identifications:
        insert(a.polygon, a.start)
        insert(a.polygon, a.end)
        insert(b.polygon, b.start)
        insert(b.polygon, b.end)

    n_total = sum(len(p.vertices) for p in spec.polygons)
    budget = max(16, n_total * n_total)
    inserted = 0
    changed = True
    while changed:
        changed = False
        for a, b in spec.identifications:
            pa, pb = polys[a.polygon], polys[b.polygon]
            for src, dst, arc_src, arc_dst in ((a, b, a, b), (b, a, b, a)):
                la = arc_src.length(polys[src.polygon].perimeter)
                if la == 0.0:
                    continue
                _, fwd = _arc_map(arc_src, arc_dst, polys[src.polygon], polys[dst.polygon])
                for param in list(points[src.polygon]):
                    s = arc_offset(param, arc_src.start, src.polygon)
                    if s > la + tol[src.polygon]:
                        continue
                    if insert(dst.polygon, fwd(param)):
                        inserted += 1
                        changed = True
                        if inserted > budget:
                            raise InstanceError(
                                "refinement does not terminate (incommensurable arcs?)"
                            )

    refined: dict[str, RefinedPolygon] = {}
    for pid, p in polys.items():
        params = sorted(points[pid])
        coords = [p.point_at(t) for t in params]
        angles = []
        for t in params:
            ang = math.pi
            for i, vp in enumerate(p.vertex_params):
                if abs(t - vp) <= tol[pid]:
                    ang = p.corner_angle(i)
                    break
            angles.append(ang)
        refined[pid] = RefinedPolygon(p, params, coords, angles)

    def vertex_index(pid: str, param: float) -> int:
        p = polys[pid]
        param = param % p.perimeter
        best, best_d = -1, math.inf
        for i, q in enumerate(refined[pid].params):
            d = abs(param - q)
            d = min(d, p.perimeter - d)
            if d < best_d:
                best, best_d = i, d
        if best_d > 2 * tol[pid]:
            raise InstanceError(f"internal: no refined vertex near {pid}:{param}")
        return best

    # edge pairing: each refined edge sits inside exactly one arc
    edge_pairs: dict[tuple[str, int], tuple[str, int]] = {}
    for a, b in spec.identifications:
        pa, pb = polys[a.polygon], polys[b.polygon]
        la = a.length(pa.perimeter)
        if la == 0.0:
            continue
        _, fwd = _arc_map(a, b, pa, pb)
        ra = refined[a.polygon]
        m = len(ra.params)
        for i in range(m):
            p0 = ra.params[i]
            p1 = ra.params[(i + 1) % m] if i + 1 < m else ra.params[0] + pa.perimeter
            mid = 0.5 * (p0 + p1)
            s = (mid - a.start) % pa.perimeter
            if s >= la:
                continue
            j0 = vertex_index(b.polygon, fwd(p0))
            j1 = vertex_index(b.polygon, fwd(p1 % pa.perimeter))
            mb = len(refined[b.polygon].params)
            # image edge runs backward on b: from j1 forward to j0
            if (j1 + 1) % mb != j0:
                raise InstanceError(
                    f"gluing does not map edge {a.polygon}:{i} onto a whole edge of {b.polygon}"
                )
            key_a, key_b = (a.polygon, i), (b.polygon, j1)
            for k1, k2 in ((key_a, key_b), (key_b, key_a)):
                if k1 in edge_pairs and edge_pairs[k1] != k2:
                    raise InstanceError(f"edge {k1} glued twice")
                edge_pairs[k1] = k2
    for pid, rp in refined.items():
        for i in range(len(rp.params)):
            if (pid, i) not in edge_pairs:
                raise InstanceError(f"edge {pid}:{i} not covered by any identification")
            if edge_pairs[(pid, i)] == (pid, i):
                raise InstanceError(f"edge {pid}:{i} glued to itself")
            la = rp.edge_length(i)
            qid, j = edge_pairs[(pid, i)]
            lb = refined[qid].edge_length(j)
            if abs(la - lb) > tol[pid] + tol[qid]:
                raise InstanceError(f"paired edges differ in length: {pid}:{i} vs {qid}:{j}")

    # quotient classes of refined vertices
    keys = [(pid, i) for pid, rp in refined.items() for i in range(len(rp.params))]
    index = {k: n for n, k in enumerate(keys)}
    uf = UnionFind(len(keys))
    for a, b in spec.identifications:
        pa, pb = polys[a.polygon], polys[b.polygon]
        la = a.length(pa.perimeter)
        if la == 0.0:
            continue  # a zip point identifies a vertex with itself
        _, fwd = _arc_map(a, b, pa, pb)
        ra = refined[a.polygon]
        for i, param in enumerate(ra.params):
            s = arc_offset(param, a.start, a.polygon)
            if s <= la + tol[a.polygon]:
                j = vertex_index(b.polygon, fwd(param))
                uf.union(index[(a.polygon, i)], index[(b.polygon, j)])
    groups: dict[int, list[tuple[str, int]]] = {}
    for k in keys:
        groups.setdefault(uf.find(index[k]), []).append(k)
    classes = sorted(
        (sorted(g) for g in groups.values()),
        key=lambda g: (g[0][0], refined[g[0][0]].params[g[0][1]]),
    )
    vertex_class = {k: ci for ci, g in enumerate(classes) for k in g}
    class_angle = [sum(refined[pid].angles[i] for pid, i in g) for g in classes]

    return RefinedGluing(
        spec=spec,
        polys=refined,
        edge_pairs=edge_pairs,
        classes=classes,
        class_angle=class_angle,
        vertex_class=vertex_class,
        tiling_ok=tiling_ok,
        tiling_msgs=tiling_msgs,
    )


# ---------------------------------------------------------------------------
# the three gluing conditions


@dataclass
class ConditionVerdict:
    passed: bool
    details: list[str]


@dataclass
class AlexandrovReport:
    perimeters_matched: ConditionVerdict
    angle_bound: ConditionVerdict
    sphere_topology: ConditionVerdict

    @property
    def all_passed(self) -> bool:
        return (
            self.perimeters_matched.passed
            and self.angle_bound.passed
            and self.sphere_topology.passed
        )

    def render(self) -> str:
        lines = []
        for name, v in (
            ("perimeters matched", self.perimeters_matched),
            ("angle at most 2*pi", self.angle_bound),
            ("sphere topology", self.sphere_topology),
        ):
            lines.append(f"{'PASS' if v.passed else 'FAIL'}  {name}")
            lines.extend(f"      {d}" for d in v.details)
        return "\n".join(lines)


def check_alexandrov(r: RefinedGluing, angle_tol: float = ANGLE_TOL) -> AlexandrovReport:
    cond1 = ConditionVerdict(r.tiling_ok, list(r.tiling_msgs))

    bad = [
        f"class {ci} angle {ang:.12g} exceeds 2*pi (members {r.classes[ci]})"
        for ci, ang in enumerate(r.class_angle)
        if ang > TWO_PI + angle_tol
    ]
    cond2 = ConditionVerdict(not bad, bad)

    # quotient complex: V = classes, E = edge pairs, F = polygons
    v = len(r.classes)
    e = len(r.edge_pairs) // 2
    f = len(r.polys)
    euler = v - e + f
    msgs = []
    if euler != 2:
        msgs.append(f"Euler characteristic {euler} != 2 (V={v}, E={e}, F={f})")
    pids = sorted(r.polys)
    uf = UnionFind(len(pids))
    pidx = {pid: i for i, pid in enumerate(pids)}
    for (pa, _), (pb, _) in r.edge_pairs.items():
        uf.union(pidx[pa], pidx[pb])
    roots = {uf.find(i) for i in range(len(pids))}
    if len(roots) > 1:
        msgs.append(f"quotient surface is disconnected ({len(roots)} components)")
    cond3 = ConditionVerdict(not msgs, msgs)
    return AlexandrovReport(cond1, cond2, cond3)


@dataclass(frozen=True)
class ConePoint:
    label: str
    class_index: int
    angle: float
    members: tuple[tuple[str, int], ...]


def _label(i: int) -> str:
    return chr(ord("a") + i) if i < 26 else f"v{i + 1}"


def cone_points(
    r: RefinedGluing, angle_tol: float = ANGLE_TOL, strict: bool = True
) -> list[ConePoint]:
    """Quotient classes with total angle strictly below 2*pi, in stable order."""
    flagged = [
        (ci, ang, tuple(g))
        for ci, (g, ang) in enumerate(zip(r.classes, r.class_angle))
        if ang < TWO_PI - angle_tol
    ]
    cones = [ConePoint(_label(i), ci, ang, g) for i, (ci, ang, g) in enumerate(flagged)]
    if strict and len(cones) < 3:
        raise InstanceError(
            f"only {len(cones)} cone points: a doubly covered polygon needs at least 3"
        )
    return cones


def gauss_bonnet_residual(r: RefinedGluing) -> float:
    return sum(TWO_PI - a for a in r.class_angle) - 2.0 * TWO_PI
