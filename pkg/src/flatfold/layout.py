"""Cut the surface along the rim, develop both halves into the plane and
assemble the doubly covered convex polygon.

Cutting subdivides every triangle crossed by a rim trace, so the two
halves become triangulated disks; each half is then developed by
breadth-first placement with rigid transitions, which doubles as a
curvature check (a face reached along two tree paths must land in the
same place).
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field

from .geom import (
    IDENTITY,
    UnionFind,
    Vec,
    cross,
    dist,
    ear_clip,
    lerp,
    signed_area,
    sub,
    xform_align,
    xform_apply,
    xform_compose,
    xform_invert,
)
from .rim import RimCandidate
from .surface import Surface

ANGLE_EPS = 1e-7


class LayoutError(Exception):
    pass


# ---------------------------------------------------------------------------
# cutting


@dataclass
class CutFace:
    parent: int
    refs: tuple  # three node refs: ('c', corner) or ('p', point id)
    coords: tuple[Vec, Vec, Vec]  # in the parent face's chart


@dataclass
class CutMesh:
    surf: Surface
    faces: list[CutFace]
    adjacency: list[list[tuple[int, object]]]  # per face: (neighbor, xform b->a chart)
    halves: tuple[list[int], list[int]]


def split_surface(surf: Surface, rim: RimCandidate) -> CutMesh:
    """Partition the faces into the two components bounded by the rim."""
    # 1. register crossing points, shared across twins
    edge_points: dict[int, list[tuple[float, int]]] = {}
    next_pid = [0]

    def register(h: int, t: float) -> int:
        lst = edge_points.setdefault(h, [])
        for tt, pid in lst:
            if abs(tt - t) <= 1e-9:
                return pid
        pid = next_pid[0]
        next_pid[0] += 1
        lst.append((t, pid))
        lst.sort()
        tw = surf.twin[h]
        twl = edge_points.setdefault(tw, [])
        twl.append((1.0 - t, pid))
        twl.sort()
        return pid

    def noderef(face: int, desc):
        if desc[0] == "v":
            return ("c", desc[1])
        _, h, t = desc
        return ("p", register(h, t))

    chords_by_face: dict[int, list[tuple]] = {}
    cut_intervals: dict[int, list[tuple[float, float]]] = {}

    def ref_on_halfedge(f: int, ref, k: int) -> float | None:
        if ref[0] == "c":
            if ref[1] == k:
                return 0.0
            if ref[1] == (k + 1) % 3:
                return 1.0
            return None
        for t, p in edge_points.get(3 * f + k, ()):
            if p == ref[1]:
                return t
        return None

    pending: list[tuple[int, tuple, tuple]] = []
    for seg in rim.segments:
        for f, p, q, dp, dq in seg.face_chords(surf):
            if dist(p, q) <= 1e-12 * max(seg.length, 1.0):
                continue
            pending.append((f, dp, dq))
    for f, dp, dq in pending:
        ra, rb = noderef(f, dp), noderef(f, dq)
        along = None
        for k in range(3):
            ta = ref_on_halfedge(f, ra, k)
            tb = ref_on_halfedge(f, rb, k)
            if ta is not None and tb is not None:
                along = (3 * f + k, min(ta, tb), max(ta, tb))
                break
        if along is not None:
            h, t0, t1 = along
            cut_intervals.setdefault(h, []).append((t0, t1))
            tw = surf.twin[h]
            cut_intervals.setdefault(tw, []).append((1.0 - t1, 1.0 - t0))
        else:
            ch = chords_by_face.setdefault(f, [])
            key = frozenset((ra, rb))
            if all(frozenset(c) != key for c in ch):
                ch.append((ra, rb))

    # 2. subdivide each face into triangles bounded by its chords
    cut_faces: list[CutFace] = []

    def split_loop(f: int, loop: list, chords: list):
        if not chords:
            _triangulate_loop(f, loop)
            return
        (ra, rb), rest = chords[0], chords[1:]
        refs = [r for r, _ in loop]
        try:
            ia, ib = refs.index(ra), refs.index(rb)
        except ValueError as e:
            raise LayoutError(f"chord endpoint missing from face {f} loop") from e
        if ia == ib:
            raise LayoutError(f"degenerate chord on face {f}")
        if ia > ib:
            ia, ib = ib, ia
        loop1 = loop[ia : ib + 1]
        loop2 = loop[ib:] + loop[: ia + 1]
        set1 = {r for r, _ in loop1} - {ra, rb}
        set2 = {r for r, _ in loop2} - {ra, rb}
        c1, c2 = [], []
        for c in rest:
            x, y = c
            if x in set1 or y in set1:
                c1.append(c)
            elif x in set2 or y in set2:
                c2.append(c)
            # else: both endpoints coincide with the split chord; drop it
        split_loop(f, loop1, c1)
        split_loop(f, loop2, c2)

    def _triangulate_loop(f: int, loop: list):
        pts = [xy for _, xy in loop]
        if len(pts) < 3:
            raise LayoutError(f"degenerate piece on face {f}")
        for i, j, k in ear_clip(pts):
            cut_faces.append(
                CutFace(
                    parent=f,
                    refs=(loop[i][0], loop[j][0], loop[k][0]),
                    coords=(pts[i], pts[j], pts[k]),
                )
            )

    for f in range(surf.n_faces()):
        loop = []
        for k in range(3):
            loop.append((("c", k), surf.chart[f][k]))
            for t, pid in edge_points.get(3 * f + k, ()):
                loop.append((("p", pid), lerp(*surf.he_points(3 * f + k), t)))
        split_loop(f, loop, chords_by_face.get(f, []))

    # 3. adjacency with cut marks
    chord_sets = {
        f: [frozenset(c) for c in chords] for f, chords in chords_by_face.items()
    }

    def subedge_key_and_cut(f: int, ra, rb):
        """Key identifying this cut-face edge globally, plus whether it is cut."""
        for k in range(3):
            ta = ref_on_halfedge(f, ra, k)
            tb = ref_on_halfedge(f, rb, k)
            if ta is None or tb is None:
                continue
            h = 3 * f + k
            t0, t1 = min(ta, tb), max(ta, tb)
            mid = 0.5 * (t0 + t1)
            tw = surf.twin[h]
            hc = min(h, tw)
            mid_c = mid if h == hc else 1.0 - mid
            boundaries = sorted(t for t, _ in edge_points.get(hc, ()))
            idx = bisect.bisect_left(boundaries, mid_c)
            cut = any(
                a - 1e-9 <= mid <= b + 1e-9 for a, b in cut_intervals.get(h, ())
            )
            return ("b", hc, idx), cut
        key = ("i", f, frozenset((ra, rb)))
        cut = frozenset((ra, rb)) in chord_sets.get(f, ())
        return key, cut

    edge_map: dict[tuple, list[tuple[int, int]]] = {}
    edge_cut: dict[tuple, bool] = {}
    for fi, cf in enumerate(cut_faces):
        for s in range(3):
            ra, rb = cf.refs[s], cf.refs[(s + 1) % 3]
            key, cut = subedge_key_and_cut(cf.parent, ra, rb)
            edge_map.setdefault(key, []).append((fi, s))
            edge_cut[key] = edge_cut.get(key, False) or cut

    adjacency: list[list[tuple[int, object]]] = [[] for _ in cut_faces]
    uf = UnionFind(len(cut_faces))
    for key, entries in edge_map.items():
        if len(entries) != 2:
            raise LayoutError(f"edge {key} shared by {len(entries)} cut faces")
        (fa, _), (fb, _) = entries
        pa, pb = cut_faces[fa].parent, cut_faces[fb].parent
        if pa == pb:
            x_ab: object = IDENTITY
            x_ba: object = IDENTITY
        else:
            h = key[1]
            # transition maps twin(h)'s face chart into face(h)'s chart
            if surf.face_of(h) == pa:
                x_ab = surf.transition(h)
            else:
                x_ab = surf.transition(surf.twin[h])
            x_ba = xform_invert(x_ab)
        if not edge_cut[key]:
            adjacency[fa].append((fb, x_ab))
            adjacency[fb].append((fa, x_ba))
            uf.union(fa, fb)

    roots: dict[int, list[int]] = {}
    for fi in range(len(cut_faces)):
        roots.setdefault(uf.find(fi), []).append(fi)
    if len(roots) != 2:
        raise LayoutError(
            f"rim does not split the surface into two pieces (got {len(roots)})"
        )
    halves = tuple(sorted(roots.values(), key=lambda fs: fs[0]))
    return CutMesh(surf=surf, faces=cut_faces, adjacency=adjacency, halves=halves)


# ---------------------------------------------------------------------------
# development


@dataclass
class DevelopedHalf:
    rim_images: list[Vec]  # one per rim vertex, in rim order
    area: float
    worst_gap: float
    placements: dict[int, object]  # cut-face index -> rigid motion


def develop_half(
    mesh: CutMesh, faces: list[int], rim_vertices: list[int], tol_rel: float = 1e-7
) -> DevelopedHalf:
    """Flatten one half by breadth-first rigid placement of its faces."""
    surf = mesh.surf
    face_set = set(faces)
    root = min(faces)
    placed: dict[int, object] = {root: IDENTITY}
    queue = [root]
    worst = 0.0
    while queue:
        fa = queue.pop(0)
        ta = placed[fa]
        for fb, x_ab in mesh.adjacency[fa]:
            if fb not in face_set:
                raise LayoutError("adjacency escapes the half; split is inconsistent")
            tb = xform_compose(ta, x_ab)
            if fb in placed:
                have = placed[fb]
                for p in mesh.faces[fb].coords:
                    worst = max(worst, dist(xform_apply(have, p), xform_apply(tb, p)))
            else:
                placed[fb] = tb
                queue.append(fb)
    if set(placed) != face_set:
        raise LayoutError("half is not connected")

    area = sum(
        0.5
        * cross(
            sub(mesh.faces[f].coords[1], mesh.faces[f].coords[0]),
            sub(mesh.faces[f].coords[2], mesh.faces[f].coords[0]),
        )
        for f in faces
    )

    # rim vertex images: all corner occurrences in the half must agree
    images: dict[int, list[Vec]] = {v: [] for v in rim_vertices}
    for f in faces:
        cf = mesh.faces[f]
        for s in range(3):
            ref = cf.refs[s]
            if ref[0] != "c":
                continue
            cls = surf.face_vertex[cf.parent][ref[1]]
            if cls in images:
                images[cls].append(xform_apply(placed[f], cf.coords[s]))
    diameter = 2.0 * math.sqrt(max(area, 1e-300))
    rim_images = []
    for v in rim_vertices:
        pts = images[v]
        if not pts:
            raise LayoutError(f"rim vertex {v} does not appear in this half")
        for p in pts[1:]:
            worst = max(worst, dist(pts[0], p))
        rim_images.append(pts[0])
    if worst > tol_rel * diameter:
        raise LayoutError(
            f"development is inconsistent (gap {worst:.3e}); interior curvature?"
        )
    return DevelopedHalf(rim_images=rim_images, area=area, worst_gap=worst, placements=placed)


# ---------------------------------------------------------------------------
# reconstruction


@dataclass
class FlatPolyhedron:
    polygon: list[Vec]  # ccw, canonical pose, one vertex per cone point
    labels: list[str]  # cone labels matching the polygon vertices
    rim_vertices: list[int]  # class ids matching the polygon vertices
    segment_lengths: list[float]
    half_areas: tuple[float, float]

    @property
    def area(self) -> float:
        return signed_area(self.polygon)

    def perimeter(self) -> float:
        n = len(self.polygon)
        return sum(dist(self.polygon[i], self.polygon[(i + 1) % n]) for i in range(n))

    def interior_angles(self) -> list[float]:
        from .geom import interior_angle

        n = len(self.polygon)
        return [
            interior_angle(self.polygon[(i - 1) % n], self.polygon[i], self.polygon[(i + 1) % n])
            for i in range(n)
        ]


def _canonical(points: list[Vec]) -> list[Vec]:
    """First vertex at the origin, first edge along +x, counterclockwise."""
    t = xform_align(points[0], points[1], (0.0, 0.0), (dist(points[0], points[1]), 0.0))
    pts = [xform_apply(t, p) for p in points]
    if signed_area(pts) < 0.0:
        pts = [(x, -y) for x, y in pts]
    return pts


def reconstruct(surf: Surface, rim: RimCandidate, tol_rel: float = 1e-7) -> FlatPolyhedron:
    mesh = split_surface(surf, rim)
    h1 = develop_half(mesh, list(mesh.halves[0]), rim.vertices, tol_rel)
    h2 = develop_half(mesh, list(mesh.halves[1]), rim.vertices, tol_rel)

    p1 = _canonical(h1.rim_images)
    p2 = _canonical(h2.rim_images)
    diameter = max(dist(a, b) for a in p1 for b in p1)
    for a, b in zip(p1, p2):
        if dist(a, b) > tol_rel * diameter:
            raise LayoutError(
                f"halves are not congruent: vertex gap {dist(a, b):.3e}"
            )

    n = len(p1)
    eps_area = 1e-9 * diameter * diameter
    for i in range(n):
        e0 = sub(p1[(i + 1) % n], p1[i])
        e1 = sub(p1[(i + 2) % n], p1[(i + 1) % n])
        if cross(e0, e1) < -eps_area:
            raise LayoutError(f"developed polygon is not convex at vertex {i}")

    seg_lengths = rim.lengths()
    for i in range(n):
        d = dist(p1[i], p1[(i + 1) % n])
        if abs(d - seg_lengths[i]) > 1e-9 * max(d, seg_lengths[i]):
            raise LayoutError(
                f"polygon edge {i} length {d} does not match rim segment {seg_lengths[i]}"
            )
    theta = [surf.theta[v] for v in rim.vertices]
    poly = FlatPolyhedron(
        polygon=p1,
        labels=[_cone_label(surf, v) for v in rim.vertices],
        rim_vertices=list(rim.vertices),
        segment_lengths=seg_lengths,
        half_areas=(h1.area, h2.area),
    )
    angles = poly.interior_angles()
    for i in range(n):
        if abs(angles[i] - 0.5 * theta[i]) > ANGLE_EPS:
            raise LayoutError(
                f"interior angle {angles[i]} at vertex {i} is not half of {theta[i]}"
            )
    a1, a2 = poly.half_areas
    if abs(a1 - a2) > 1e-9 * max(a1, a2):
        raise LayoutError(f"half areas differ: {a1} vs {a2}")
    total = surf.total_area()
    if abs(a1 + a2 - total) > 1e-9 * max(total, 1.0):
        raise LayoutError(f"half areas {a1}+{a2} do not sum to surface area {total}")
    return poly


def _cone_label(surf: Surface, class_id: int) -> str:
    for c in surf.cones:
        if c.class_index == class_id:
            return c.label
    return f"cls{class_id}"


# ---------------------------------------------------------------------------
# output documents


def result_document(
    verdict: str,
    *,
    surf: Surface | None = None,
    rim: RimCandidate | None = None,
    flat: FlatPolyhedron | None = None,
    stats: dict | None = None,
    tolerances: dict | None = None,
    timing: dict | None = None,
) -> str:
    doc: dict = {"verdict": verdict}
    if flat is not None and rim is not None:
        doc["polygon"] = [[x, y] for x, y in flat.polygon]
        doc["cone_correspondence"] = flat.labels
        doc["half_areas"] = list(flat.half_areas)
        doc["rim"] = {
            "vertices": flat.labels,
            "segment_lengths": flat.segment_lengths,
        }
    if stats:
        doc["stats"] = stats
    if tolerances:
        doc["tolerances"] = tolerances
    if timing:
        doc["timing"] = timing
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_svg(
    surf: Surface,
    rim: RimCandidate | None = None,
    flat: FlatPolyhedron | None = None,
    size: int = 1000,
) -> str:
    """Input polygons with the rim traces overlaid, plus the output polygon."""
    groups: list[tuple[list[list[Vec]], list[list[Vec]]]] = []  # (outlines, overlays)
    offset = 0.0
    shapes: list[tuple[str, list[Vec]]] = []
    refined = surf.refined
    pad = 0.0
    placed: dict[str, float] = {}
    for pid in sorted(refined.polys):
        rp = refined.polys[pid]
        xs = [x for x, _ in rp.coords]
        w = max(xs) - min(xs)
        placed[pid] = offset - min(xs)
        shapes.append(("outline", [(x + placed[pid], y) for x, y in rp.coords]))
        offset += w * 1.15 + pad
    if rim is not None:
        for seg in rim.segments:
            for f, p, q, _, _ in seg.face_chords(surf):
                dx = placed[surf.face_polygon[f]]
                shapes.append(("rim", [(p[0] + dx, p[1]), (q[0] + dx, q[1])]))
    if flat is not None:
        shapes.append(("result", [(x + offset, y) for x, y in flat.polygon]))

    xs = [x for _, pts in shapes for x, _ in pts]
    ys = [y for _, pts in shapes for _, y in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-12)
    margin = 0.05 * size
    scale = (size - 2 * margin) / span

    def map_pt(p: Vec) -> str:
        x = margin + (p[0] - x0) * scale
        y = size - margin - (p[1] - y0) * scale
        return f"{x:.3f},{y:.3f}"

    styles = {
        "outline": 'fill="none" stroke="#222" stroke-width="2"',
        "rim": 'fill="none" stroke="#d22" stroke-width="3"',
        "result": 'fill="#dde8ff" stroke="#225" stroke-width="2"',
    }
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    for kind, pts in shapes:
        coords = " ".join(map_pt(p) for p in pts)
        tag = "polyline" if kind == "rim" else "polygon"
        parts.append(f'<{tag} points="{coords}" {styles[kind]} />')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
