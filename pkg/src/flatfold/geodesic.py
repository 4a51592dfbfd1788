"""Exact vertex-to-vertex shortest paths, intrinsic to the surface.

Both routes here work by unfolding chains of adjacent triangles into one
planar frame, where a geodesic is a straight segment:

* `shortest_paths_from` runs a best-first search over visibility windows:
  each heap entry is an edge interval still reachable by straight rays
  from the unfolded source image. Exact, and prunes by the distance lower
  bound of the interval.
* `oracle_shortest_path` is an independent depth-first enumeration of
  face chains up to a crossing cap, kept for verification.

Lengths and traces come out of plain planar geometry; no 3D embedding is
ever used (none exists).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .geom import (
    IDENTITY,
    Vec,
    cross,
    dist,
    lerp,
    norm,
    point_segment_distance,
    sub,
    xform_apply,
    xform_compose,
)
from .surface import Surface

TIE_TOL = 1e-9  # relative; paths within this of the minimum are all kept
_VERTEX_SNAP = 1e-9  # crossing parameter this close to an endpoint is a vertex pass


class GeodesicError(Exception):
    pass


@dataclass(frozen=True)
class GeodesicPath:
    source: int
    target: int
    length: float
    source_corner: tuple[int, int]  # (face, local corner)
    target_corner: tuple[int, int]
    crossings: tuple[tuple[int, float], ...]  # (halfedge of entered face, param)
    departure: float
    arrival: float

    @property
    def faces(self) -> tuple[int, ...]:
        return (self.source_corner[0],) + tuple(h // 3 for h, _ in self.crossings)

    def trace(self, surf: Surface) -> list[tuple[int, Vec]]:
        """(face, entry point in that face's chart) along the path."""
        f0, k0 = self.source_corner
        pts = [(f0, surf.chart[f0][k0])]
        for h, t in self.crossings:
            a, b = surf.he_points(h)
            pts.append((h // 3, lerp(a, b, t)))
        ft, kt = self.target_corner
        pts.append((ft, surf.chart[ft][kt]))
        return pts

    def face_chords(self, surf: Surface):
        """Per-face straight pieces: (face, p, q, desc_p, desc_q).

        Descriptors are ('v', corner) for an endpoint at a face corner or
        ('e', halfedge, t) for a point on an edge of that face. Crossings
        within _VERTEX_SNAP of an edge endpoint are snapped to the corner.
        """

        def on_edge(h: int, t: float):
            k = h % 3
            if t <= _VERTEX_SNAP:
                return ("v", k)
            if t >= 1.0 - _VERTEX_SNAP:
                return ("v", (k + 1) % 3)
            return ("e", h, t)

        def pos(f: int, desc) -> Vec:
            if desc[0] == "v":
                return surf.chart[f][desc[1]]
            a, b = surf.he_points(desc[1])
            return lerp(a, b, desc[2])

        f0, k0 = self.source_corner
        out = []
        cur_face, cur_desc = f0, ("v", k0)
        for h, t in self.crossings:
            exit_desc = on_edge(surf.twin[h], 1.0 - t)
            out.append((cur_face, pos(cur_face, cur_desc), pos(cur_face, exit_desc),
                        cur_desc, exit_desc))
            cur_face, cur_desc = h // 3, on_edge(h, t)
        ft, kt = self.target_corner
        out.append((cur_face, pos(cur_face, cur_desc), pos(cur_face, ("v", kt)),
                    cur_desc, ("v", kt)))
        return out


# ---------------------------------------------------------------------------
# shared candidate finalization (geometry only, no search state)


def finalize_candidate(
    surf: Surface,
    source: int,
    target: int,
    src_corner: tuple[int, int],
    chain: list[tuple[int, tuple]],
    corner_local: int,
) -> GeodesicPath | None:
    """Validate an unfolded candidate and build the path, or reject it.

    chain lists (entered halfedge, transform of the entered face into the
    strip frame), root first. corner_local is the target corner in the last
    face of the chain (or in the source face when the chain is empty).
    """
    f0, k0 = src_corner
    s_img = surf.chart[f0][k0]
    if chain:
        last_h, last_t = chain[-1]
        f_last = last_h // 3
        t_img = xform_apply(last_t, surf.chart[f_last][corner_local])
    else:
        f_last = f0
        t_img = surf.chart[f0][corner_local]
    seg = sub(t_img, s_img)
    length = norm(seg)
    if length <= 0.0:
        return None

    crossings: list[tuple[int, float]] = []
    last_u = -1e-9
    for h, t in chain:
        a, b = surf.he_points(h)
        a_img, b_img = xform_apply(t, a), xform_apply(t, b)
        d = sub(b_img, a_img)
        denom = cross(seg, d)
        if abs(denom) <= 1e-300:
            return None
        r = sub(a_img, s_img)
        u = cross(r, d) / denom  # along the path segment
        w = cross(r, seg) / denom  # along the portal
        if u < last_u - 1e-9 or u > 1.0 + 1e-9:
            return None
        if w < -1e-9 or w > 1.0 + 1e-9:
            return None
        last_u = u
        w = min(1.0, max(0.0, w))
        crossings.append((h, w))

    # a shortest path never threads an intermediate cone point
    cone_ids = set(surf.cone_ids())
    frames = [((f0), IDENTITY)] + [(h // 3, t) for h, t in chain]
    for f, t in frames:
        for k in range(3):
            if surf.face_vertex[f][k] not in cone_ids:
                continue
            img = xform_apply(t, surf.chart[f][k])
            d = point_segment_distance(img, s_img, t_img)
            if d < 1e-12 * length:
                du = (sub(img, s_img)[0] * seg[0] + sub(img, s_img)[1] * seg[1]) / (
                    length * length
                )
                if 1e-9 < du < 1.0 - 1e-9:
                    return None

    # departure direction lives in the source face's chart
    if crossings:
        h1, t1 = crossings[0]
        a, b = surf.he_points(surf.twin[h1])
        first_pt = lerp(a, b, 1.0 - t1)
    else:
        first_pt = surf.chart[f0][corner_local]
    dep_dir = sub(first_pt, s_img)
    if norm(dep_dir) <= 0.0:
        return None
    departure = surf.angle_of_direction(source, f0, k0, dep_dir)

    if crossings:
        hk, tk = crossings[-1]
        a, b = surf.he_points(hk)
        last_pt = lerp(a, b, tk)
    else:
        last_pt = s_img
    t_pos = surf.chart[f_last][corner_local]
    arr_dir = sub(last_pt, t_pos)
    if norm(arr_dir) <= 0.0:
        return None
    arrival = surf.angle_of_direction(target, f_last, corner_local, arr_dir)

    return GeodesicPath(
        source=source,
        target=target,
        length=length,
        source_corner=src_corner,
        target_corner=(f_last, corner_local),
        crossings=tuple(crossings),
        departure=departure,
        arrival=arrival,
    )


def _dedup_by_departure(paths: list[GeodesicPath], eps: float = 1e-9):
    paths = sorted(paths, key=lambda p: (p.departure, p.length, len(p.crossings)))
    out: list[GeodesicPath] = []
    for p in paths:
        if out and abs(p.departure - out[-1].departure) <= eps:
            continue
        out.append(p)
    # the angular coordinate wraps at theta
    if len(out) > 1 and abs((out[0].departure + 0.0) - 0.0) <= eps:
        pass
    return out


# ---------------------------------------------------------------------------
# main algorithm: best-first window propagation


class _Window:
    __slots__ = (
        "h_entry", "xform", "a", "b", "parent", "src_corner", "s_img",
        "deg_pt", "deg_n", "depth",
    )

    def __init__(self, h_entry, xform, a, b, parent, src_corner, s_img,
                 deg_pt=None, deg_n=0, depth=1):
        self.h_entry = h_entry
        self.xform = xform
        self.a = a
        self.b = b
        self.parent = parent
        self.src_corner = src_corner
        self.s_img = s_img
        # ray windows pinned at a flat-vertex image: the pin point and how
        # many consecutive steps have stayed there (guards against cycling
        # around the closed 2*pi fan forever)
        self.deg_pt = deg_pt
        self.deg_n = deg_n
        self.depth = depth

    def chain(self):
        out = []
        w = self
        while w is not None:
            out.append((w.h_entry, w.xform))
            w = w.parent
        out.reverse()
        return out


def _clip_to_wedge(s: Vec, a: Vec, b: Vec, u: Vec, v: Vec):
    """Clip segment [u, v] to the closed wedge of rays from s through [a, b]."""
    da, db = sub(a, s), sub(b, s)
    scale = max(norm(da), norm(db), 1.0) * max(norm(sub(u, s)), norm(sub(v, s)), 1.0)
    eps = 1e-12 * scale
    lo, hi = 0.0, 1.0
    for d, sign in ((da, 1.0), (db, -1.0)):
        c0 = sign * cross(d, sub(u, s))
        c1 = sign * cross(d, sub(v, s))
        # need c(t) >= -eps, c linear in t
        if c0 >= -eps and c1 >= -eps:
            continue
        if c0 < -eps and c1 < -eps:
            return None
        t = ((-eps) - c0) / (c1 - c0)
        if c0 < -eps:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    if lo > hi:
        return None
    p, q = lerp(u, v, lo), lerp(u, v, hi)
    if cross(sub(p, s), sub(q, s)) < 0.0:
        p, q = q, p
    return p, q


def _in_wedge(s: Vec, a: Vec, b: Vec, x: Vec) -> bool:
    da, db, dx = sub(a, s), sub(b, s), sub(x, s)
    eps = 1e-12 * max(norm(da), norm(db), 1.0) * max(norm(dx), 1.0)
    return cross(da, dx) >= -eps and cross(dx, db) >= -eps


def shortest_paths_from(
    surf: Surface,
    v: int,
    tie_tol: float = TIE_TOL,
    max_pops: int = 2_000_000,
    depth_cap: int | None = None,
) -> dict[int, list[GeodesicPath]]:
    """Every globally shortest geodesic (with ties) from cone vertex v.

    Returns {target class id: paths sorted by departure angle}. depth_cap
    bounds how many faces a window chain may cross (default 8 per face);
    near-closed unfoldings can otherwise orbit the surface at constant
    distance without ever draining the frontier.
    """
    if depth_cap is None:
        depth_cap = max(64, 8 * surf.n_faces())
    cone_ids = surf.cone_ids()
    if v not in cone_ids:
        raise GeodesicError(f"vertex {v} is not a cone point")
    targets = set(cone_ids) - {v}
    best: dict[int, float] = {t: math.inf for t in targets}
    cands: dict[int, list] = {t: [] for t in targets}

    def add_candidate(t_cls, length, window, corner_local, src_corner):
        if length < best[t_cls]:
            best[t_cls] = length
        if length <= best[t_cls] * (1.0 + 1e-7) + 1e-300:
            cands[t_cls].append((length, window, corner_local, src_corner))

    heap: list = []
    counter = 0
    # windows already seen per entered halfedge, in edge-local coordinates
    # (source projection, source offset, interval): a window re-entering an
    # edge with the same source image and a contained interval repeats an
    # earlier unfolding exactly (flat wraps compose to the identity)
    seen: dict[int, list[tuple[float, float, float, float]]] = {}

    def record(h_in: int, xform, na: Vec, nb: Vec, s: Vec) -> bool:
        """Register the window; False when an equal window already covers it."""
        p0, p1 = surf.he_points(h_in)
        a_e = xform_apply(xform, p0)
        b_e = xform_apply(xform, p1)
        ex, ey = b_e[0] - a_e[0], b_e[1] - a_e[1]
        ll = ex * ex + ey * ey
        if ll <= 0.0:
            return True
        def param(p: Vec) -> float:
            return ((p[0] - a_e[0]) * ex + (p[1] - a_e[1]) * ey) / ll
        u = param(s)
        hperp = (ex * (s[1] - a_e[1]) - ey * (s[0] - a_e[0])) / math.sqrt(ll)
        t0, t1 = sorted((param(na), param(nb)))
        tol = 1e-9 * (1.0 + abs(u) + abs(hperp))
        bucket = seen.setdefault(h_in, [])
        for (u2, h2, s0, s1) in bucket:
            if (abs(u - u2) <= tol and abs(hperp - h2) <= tol
                    and t0 >= s0 - 1e-9 and t1 <= s1 + 1e-9):
                return False
        bucket.append((u, hperp, t0, t1))
        return True

    for h, _ in surf.fans[v]:
        f, k = divmod(h, 3)
        s_img = surf.chart[f][k]
        for dk in (1, 2):
            c = (k + dk) % 3
            cls = surf.face_vertex[f][c]
            if cls in targets:
                add_candidate(cls, dist(s_img, surf.chart[f][c]), None, c, (f, k))
        # window across the opposite edge
        h_opp = 3 * f + (k + 1) % 3
        a = surf.chart[f][(k + 1) % 3]
        b = surf.chart[f][(k + 2) % 3]
        t_next = surf.transition(h_opp)
        if record(surf.twin[h_opp], t_next, a, b, s_img):
            w = _Window(surf.twin[h_opp], t_next, a, b, None, (f, k), s_img)
            counter += 1
            heapq.heappush(heap, (point_segment_distance(s_img, a, b), counter, w))

    def bound() -> float:
        m = 0.0
        for t in targets:
            if best[t] is math.inf or math.isinf(best[t]):
                return math.inf
            m = max(m, best[t] * (1.0 + tie_tol) + 1e-300)
        return m

    pops = 0
    while heap:
        d, _, w = heapq.heappop(heap)
        if d > bound():
            break
        pops += 1
        if pops > max_pops:
            raise GeodesicError("window search exceeded its expansion cap")
        h = w.h_entry
        g, k = divmod(h, 3)
        s_img = w.s_img
        p2 = xform_apply(w.xform, surf.chart[g][(k + 2) % 3])
        cls = surf.face_vertex[g][(k + 2) % 3]
        if cls in targets and _in_wedge(s_img, w.a, w.b, p2):
            add_candidate(cls, dist(s_img, p2), w, (k + 2) % 3, w.src_corner)
        if w.depth >= depth_cap:
            continue
        p1 = xform_apply(w.xform, surf.chart[g][(k + 1) % 3])
        p0 = xform_apply(w.xform, surf.chart[g][k])
        b_limit = bound()
        for e_local, (u_pt, v_pt) in (
            ((k + 1) % 3, (p1, p2)),
            ((k + 2) % 3, (p2, p0)),
        ):
            clipped = _clip_to_wedge(s_img, w.a, w.b, u_pt, v_pt)
            if clipped is None:
                continue
            na, nb = clipped
            d_min = point_segment_distance(s_img, na, nb)
            if d_min > b_limit:
                continue
            scale = max(dist(s_img, na), dist(s_img, nb), dist(u_pt, v_pt), 1e-300)
            if d_min <= 1e-9 * scale:
                # the interval wrapped back onto the source image
                continue
            deg_pt, deg_n = None, 0
            if dist(na, nb) <= 1e-9 * scale:
                # degenerate ray window; it may only thread a flat vertex
                corner = None
                if dist(na, u_pt) <= 1e-9 * scale:
                    corner = e_local
                elif dist(na, v_pt) <= 1e-9 * scale:
                    corner = (e_local + 1) % 3
                if corner is not None:
                    vtx = surf.face_vertex[g][corner]
                    if abs(surf.theta[vtx] - 2.0 * math.pi) > 1e-7:
                        continue
                    deg_pt = na
                    if w.deg_pt is not None and dist(na, w.deg_pt) <= 1e-9 * scale:
                        deg_n = w.deg_n + 1
                        if deg_n > len(surf.fans[vtx]):
                            continue  # wrapped all the way around the fan
                    else:
                        deg_n = 1
            e = 3 * g + e_local
            t_next = xform_compose(w.xform, surf.transition(e))
            if not record(surf.twin[e], t_next, na, nb, s_img):
                continue
            nw = _Window(surf.twin[e], t_next, na, nb, w, w.src_corner, s_img,
                         deg_pt, deg_n, w.depth + 1)
            counter += 1
            heapq.heappush(heap, (d_min, counter, nw))

    results: dict[int, list[GeodesicPath]] = {}
    for t in targets:
        if math.isinf(best[t]):
            raise GeodesicError(f"no path from {v} to {t}: surface data is corrupt")
        finalized = []
        for length, window, corner_local, src_corner in cands[t]:
            chain = window.chain() if window is not None else []
            p = finalize_candidate(surf, v, t, src_corner, chain, corner_local)
            if p is not None:
                finalized.append(p)
        if not finalized:
            raise GeodesicError(f"all candidates from {v} to {t} failed validation")
        true_min = min(p.length for p in finalized)
        keep = [p for p in finalized if p.length <= true_min * (1.0 + tie_tol)]
        results[t] = _dedup_by_departure(keep)
    return results


# ---------------------------------------------------------------------------
# assembled all-pairs structure


@dataclass
class ShortestPathSet:
    sources: list[int]  # cone class ids in stable order
    outgoing: dict[int, list[GeodesicPath]]  # sorted by departure angle
    pairs: dict[tuple[int, int], list[GeodesicPath]]

    def min_length(self, i: int, j: int) -> float:
        return self.pairs[(i, j)][0].length

    def path_count(self) -> int:
        return sum(len(v) for v in self.pairs.values())


def all_pairs(
    surf: Surface,
    tie_tol: float = TIE_TOL,
    use_oracle: bool = False,
    oracle_depth_cap: int | None = None,
) -> ShortestPathSet:
    sources = surf.cone_ids()
    pairs: dict[tuple[int, int], list[GeodesicPath]] = {}
    outgoing: dict[int, list[GeodesicPath]] = {}
    for vi in sources:
        if use_oracle:
            per = {}
            for vj in sources:
                if vj == vi:
                    continue
                _, paths = oracle_shortest_path(surf, vi, vj, oracle_depth_cap, tie_tol)
                per[vj] = paths
        else:
            per = shortest_paths_from(surf, vi, tie_tol)
        for vj, paths in per.items():
            pairs[(vi, vj)] = sorted(paths, key=lambda p: p.departure)
        outgoing[vi] = sorted(
            (p for paths in per.values() for p in paths), key=lambda p: p.departure
        )
    for vi in sources:
        for vj in sources:
            if vi >= vj:
                continue
            a = pairs[(vi, vj)][0].length
            b = pairs[(vj, vi)][0].length
            if abs(a - b) > 1e-9 * max(a, b):
                raise GeodesicError(
                    f"length symmetry violated for ({vi},{vj}): {a} vs {b}"
                )
    return ShortestPathSet(sources=sources, outgoing=outgoing, pairs=pairs)


# ---------------------------------------------------------------------------
# independent oracle: depth-first exhaustive unfolding


def oracle_shortest_path(
    surf: Surface,
    vi: int,
    vj: int,
    depth_cap: int | None = None,
    tie_tol: float = TIE_TOL,
) -> tuple[float, list[GeodesicPath]]:
    """Exhaustively unfold face chains from vi up to a crossing cap.

    Returns (minimum length, all tied geodesics). Raises when the cap is
    exhausted without producing any candidate.
    """
    if depth_cap is None:
        depth_cap = 4 * surf.n_faces()
    targets_here = {vj}
    state = {"best": math.inf, "cands": [], "cap_hit": False}

    def consider(src_corner, chain, corner_local):
        p = finalize_candidate(surf, vi, vj, src_corner, chain, corner_local)
        if p is None:
            return
        if p.length < state["best"]:
            state["best"] = p.length
        if p.length <= state["best"] * (1.0 + 1e-7):
            state["cands"].append(p)

    def dfs(f, entry_local, xform, wa, wb, s_img, src_corner, chain, depth,
            pin_pt, pin_n):
        for k in range(3):
            if entry_local is not None and k in (entry_local, (entry_local + 1) % 3):
                # portal endpoints were corners of the previous face too
                continue
            if surf.face_vertex[f][k] in targets_here:
                consider(src_corner, chain, k)
        if depth >= depth_cap:
            state["cap_hit"] = True
            return
        for e_local in range(3):
            if entry_local is not None and e_local == entry_local:
                continue
            u_pt = xform_apply(xform, surf.chart[f][e_local])
            v_pt = xform_apply(xform, surf.chart[f][(e_local + 1) % 3])
            du, dv = sub(u_pt, s_img), sub(v_pt, s_img)
            if cross(du, dv) < 0.0:
                du, dv = dv, du
                corners = ((e_local + 1) % 3, e_local)
            else:
                corners = (e_local, (e_local + 1) % 3)
            eps = 1e-12 * max(norm(du), norm(dv), 1.0) * max(norm(wa), norm(wb), 1.0)
            nwa = du if cross(wa, du) > 0.0 else wa
            nwb = dv if cross(dv, wb) > 0.0 else wb
            if cross(nwa, nwb) < -eps:
                continue
            scale = max(norm(du), norm(dv), 1e-300)
            if point_segment_distance(s_img, u_pt, v_pt) <= 1e-9 * scale:
                continue  # the strip wrapped back onto the source image
            npin_pt, npin_n = None, 0
            if abs(cross(nwa, nwb)) <= 1e-9 * max(norm(nwa), 1.0) * max(
                norm(nwb), 1.0
            ):
                # the wedge collapsed to a ray; if it is pinned at a vertex
                # image, it may only thread a flat vertex, and at most once
                # around that vertex's fan
                corner = None
                if abs(cross(nwa, du)) <= 1e-9 * norm(nwa) * max(norm(du), 1.0):
                    corner = corners[0]
                    pin = u_pt if corners[0] == e_local else v_pt
                elif abs(cross(nwa, dv)) <= 1e-9 * norm(nwa) * max(norm(dv), 1.0):
                    corner = corners[1]
                    pin = v_pt if corners[1] == (e_local + 1) % 3 else u_pt
                if corner is not None:
                    vtx = surf.face_vertex[f][corner]
                    if abs(surf.theta[vtx] - 2.0 * math.pi) > 1e-7:
                        continue
                    npin_pt = pin
                    if pin_pt is not None and dist(pin, pin_pt) <= 1e-9 * scale:
                        npin_n = pin_n + 1
                        if npin_n > len(surf.fans[vtx]):
                            continue
                    else:
                        npin_n = 1
            # lower bound on any completion through this portal: distance
            # from the source image to the wedge-clipped part of the edge
            ex, ey = v_pt[0] - u_pt[0], v_pt[1] - u_pt[1]
            t_lo, t_hi = 0.0, 1.0
            for wx, wy, sign in ((nwa[0], nwa[1], 1.0), (nwb[0], nwb[1], -1.0)):
                # sign * cross(w, P(t) - s_img) >= 0, linear in t
                c0 = sign * (wx * (u_pt[1] - s_img[1]) - wy * (u_pt[0] - s_img[0]))
                c1 = sign * (wx * ey - wy * ex)
                if abs(c1) <= 1e-15 * max(abs(c0), 1.0):
                    if c0 < 0.0:
                        t_lo, t_hi = 1.0, 0.0
                elif c1 > 0.0:
                    t_lo = max(t_lo, -c0 / c1)
                else:
                    t_hi = min(t_hi, -c0 / c1)
            if t_lo > t_hi:
                t_lo = t_hi = max(0.0, min(1.0, 0.5 * (t_lo + t_hi)))
            pa = (u_pt[0] + t_lo * ex, u_pt[1] + t_lo * ey)
            pb = (u_pt[0] + t_hi * ex, u_pt[1] + t_hi * ey)
            if point_segment_distance(s_img, pa, pb) > state["best"] * (1 + 1e-7):
                continue
            e = 3 * f + e_local
            nx = xform_compose(xform, surf.transition(e))
            h_in = surf.twin[e]
            dfs(
                h_in // 3,
                h_in % 3,
                nx,
                nwa,
                nwb,
                s_img,
                src_corner,
                chain + [(h_in, nx)],
                depth + 1,
                npin_pt,
                npin_n,
            )

    for h, _ in surf.fans[vi]:
        f, k = divmod(h, 3)
        s_img = surf.chart[f][k]
        # direct corners of the source face
        for dk in (1, 2):
            c = (k + dk) % 3
            if surf.face_vertex[f][c] in targets_here:
                consider((f, k), [], c)
        wa = sub(surf.chart[f][(k + 1) % 3], s_img)
        wb = sub(surf.chart[f][(k + 2) % 3], s_img)
        e_local = (k + 1) % 3
        e = 3 * f + e_local
        nx = surf.transition(e)
        h_in = surf.twin[e]
        dfs(h_in // 3, h_in % 3, nx, wa, wb, s_img, (f, k), [(h_in, nx)], 1,
            None, 0)

    if not state["cands"]:
        raise GeodesicError(
            f"oracle found no path {vi}->{vj} within {depth_cap} crossings"
        )
    true_min = min(p.length for p in state["cands"])
    keep = [p for p in state["cands"] if p.length <= true_min * (1.0 + tie_tol)]
    return true_min, _dedup_by_departure(keep)
