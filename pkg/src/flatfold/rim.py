"""Search for the rim: a simple closed path through all cone points that
bisects the total angle at each of them.

The search starts from one distinguished cone point, tries every shortest
path out of it (including ties), and extends depth-first; at every vertex
the continuation must split the total angle into two equal halves, so the
candidate set at each step is tiny. A closed candidate must finally pass a
brute-force per-face simplicity test.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .geom import dist, point_segment_distance, segments_intersect
from .geodesic import GeodesicPath, ShortestPathSet
from .surface import Surface

ANGLE_EPS = 1e-7  # radians, bisection tolerance


@dataclass
class RimCandidate:
    vertices: list[int]  # cone class ids, cyclic order, v1 first
    segments: list[GeodesicPath]  # segments[i] runs vertices[i] -> vertices[i+1]

    def lengths(self) -> list[float]:
        return [s.length for s in self.segments]

    def total_length(self) -> float:
        return sum(s.length for s in self.segments)


@dataclass
class SearchLog:
    lines: list[str] = field(default_factory=list)
    starts_explored: int = 0

    def add(self, start, at, extensions, reason):
        ext = ",".join(f"->{e}" for e in extensions) if extensions else "-"
        self.lines.append(
            f"start=({start[0]},{start[1]}) at={at} candidates={ext} reject={reason}"
        )

    def render(self) -> str:
        return "\n".join(self.lines)


def bisects(theta: float, arrival: float, departure: float, eps: float = ANGLE_EPS) -> bool:
    """Do arrival and departure directions split the angle theta evenly?"""
    gap = abs(departure - arrival)
    gap = min(gap, theta - gap)
    return abs(gap - 0.5 * theta) <= eps


def _bisecting(sigma: ShortestPathSet, surf: Surface, vj: int, arrival: float,
               eps: float) -> list[GeodesicPath]:
    """Outgoing paths at vj whose departure bisects against the arrival."""
    theta = surf.theta[vj]
    out = sigma.outgoing[vj]
    angles = [p.departure for p in out]
    found: list[GeodesicPath] = []
    for target_ang in ((arrival + 0.5 * theta) % theta, (arrival - 0.5 * theta) % theta):
        i = bisect.bisect_left(angles, target_ang - 2 * eps)
        while i < len(angles) and angles[i] <= target_ang + 2 * eps:
            p = out[i]
            if bisects(theta, arrival, p.departure, eps) and p not in found:
                found.append(p)
            i += 1
        # the angular coordinate wraps at theta
        if target_ang - 2 * eps < 0.0 or target_ang + 2 * eps > theta:
            for p in out:
                if bisects(theta, arrival, p.departure, eps) and p not in found:
                    found.append(p)
            break
    found.sort(key=lambda p: p.departure)
    return found


def extend_path(
    sigma: ShortestPathSet,
    surf: Surface,
    vj: int,
    arrival: float,
    visited: set[int],
    start: int,
    eps: float = ANGLE_EPS,
) -> list[GeodesicPath]:
    """Bisecting continuations from vj; revisiting is allowed only to close
    the loop at the start vertex once every cone point has been visited."""
    n = len(sigma.sources)
    closing_ok = len(visited) == n
    result = []
    for p in _bisecting(sigma, surf, vj, arrival, eps):
        if p.target in visited and not (p.target == start and closing_ok):
            continue
        result.append(p)
    return result


def is_simple(candidate: RimCandidate, surf: Surface) -> bool:
    """Brute-force pairwise intersection test of all rim pieces, per face."""
    by_face: dict[int, list] = {}
    scale = max(candidate.total_length(), 1e-300)
    eps = 1e-9 * scale
    for si, seg in enumerate(candidate.segments):
        for f, p, q, _, _ in seg.face_chords(surf):
            if dist(p, q) <= eps:
                continue
            by_face.setdefault(f, []).append((si, p, q))
    n = len(candidate.segments)
    for chords in by_face.values():
        for i in range(len(chords)):
            si, p1, p2 = chords[i]
            for j in range(i + 1, len(chords)):
                sj, q1, q2 = chords[j]
                if si == sj:
                    continue  # one geodesic never self-intersects
                if not segments_intersect(p1, p2, q1, q2, eps):
                    continue
                if (si + 1) % n == sj or (sj + 1) % n == si:
                    # consecutive segments may touch, but only at the one
                    # endpoint they share
                    ends_i, ends_j = (p1, p2), (q1, q2)
                    contact = [
                        (a, b) for a in ends_i for b in ends_j if dist(a, b) <= eps
                    ]
                    if len(contact) == 1:
                        a, b = contact[0]
                        other_i = ends_i[1] if a is ends_i[0] else ends_i[0]
                        other_j = ends_j[1] if b is ends_j[0] else ends_j[0]
                        if (
                            point_segment_distance(other_i, q1, q2) > eps
                            and point_segment_distance(other_j, p1, p2) > eps
                        ):
                            continue
                return False
    return True


def find_rim(
    surf: Surface,
    sigma: ShortestPathSet,
    start: int | None = None,
    eps: float = ANGLE_EPS,
    log: SearchLog | None = None,
) -> RimCandidate | None:
    """Find a simple closed all-vertex bisecting path, or certify none.

    start overrides the distinguished first vertex (class id); by default
    the first cone point in stable order is used.
    """
    sources = sigma.sources
    if len(sources) < 3:
        return None
    v1 = sources[0] if start is None else start
    if log is None:
        log = SearchLog()

    def dfs(chain: list[GeodesicPath], visited: set[int]) -> RimCandidate | None:
        cur = chain[-1]
        vj = cur.target
        start_pair = (v1, chain[0].target)
        if vj == v1:
            if len(visited) == len(sources):
                if bisects(surf.theta[v1], cur.arrival, chain[0].departure, eps):
                    cand = RimCandidate([p.source for p in chain], list(chain))
                    if is_simple(cand, surf):
                        return cand
                    log.add(start_pair, vj, [], "not-simple")
                else:
                    log.add(start_pair, vj, [], "no-bisect")
            return None
        raw = _bisecting(sigma, surf, vj, cur.arrival, eps)
        exts = extend_path(sigma, surf, vj, cur.arrival, visited, v1, eps)
        if not raw:
            log.add(start_pair, vj, [], "no-bisect")
            return None
        rejected_loops = [p.target for p in raw if p not in exts]
        if rejected_loops and not exts:
            log.add(start_pair, vj, rejected_loops, "premature-loop")
            return None
        for p in exts:
            r = dfs(chain + [p], visited | {p.target})
            if r is not None:
                return r
        if exts:
            log.add(start_pair, vj, [p.target for p in exts], "dead-end")
        else:
            log.add(start_pair, vj, rejected_loops, "premature-loop")
        return None

    order = sorted(s for s in sources if s != v1)
    for vj in order:
        for p in sigma.pairs[(v1, vj)]:
            log.starts_explored += 1
            r = dfs([p], {v1, vj})
            if r is not None:
                return r
    return None
