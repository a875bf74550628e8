"""Exact integer-arithmetic geometric predicates.

Everything downstream (flip legality, gadget audits, visibility tests)
reduces to the predicates in this module. All arithmetic is on Python
ints, no floating point anywhere; coordinates are bounded so that the
2x2 cross-product determinants stay within signed 128-bit range, which
keeps the values portable to fixed-width implementations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

# Coordinates are kept small enough that any (q-p) x (r-p) style product
# of differences fits comfortably in a signed 128-bit integer.
COORD_LIMIT = 2**62


class CoordinateRangeError(ValueError):
    """Raised when a coordinate is outside the supported exact range."""


@dataclass(frozen=True, slots=True)
class Point:
    x: int
    y: int

    def __post_init__(self) -> None:
        if not isinstance(self.x, int) or not isinstance(self.y, int):
            raise TypeError(f"integer coordinates required, got ({self.x!r}, {self.y!r})")
        if abs(self.x) > COORD_LIMIT or abs(self.y) > COORD_LIMIT:
            raise CoordinateRangeError(f"coordinate out of range: ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise ValueError(f"degenerate segment at {self.a}")

    def endpoints(self) -> tuple[Point, Point]:
        return (self.a, self.b)


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p).

    +1 for a left turn, -1 for a right turn, 0 iff the three points are
    collinear.
    """
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


def _on_segment(s: Segment, p: Point) -> bool:
    """True iff p lies on the closed segment s (collinearity included)."""
    if orient(s.a, s.b, p) != 0:
        return False
    return (
        min(s.a.x, s.b.x) <= p.x <= max(s.a.x, s.b.x)
        and min(s.a.y, s.b.y) <= p.y <= max(s.a.y, s.b.y)
    )


def share_endpoint(s1: Segment, s2: Segment) -> bool:
    return s1.a in (s2.a, s2.b) or s1.b in (s2.a, s2.b)


def segments_cross(s1: Segment, s2: Segment) -> bool:
    """True iff s1 and s2 share a point that is not a common endpoint.

    Proper interior crossings, an endpoint of one segment lying in the
    interior of the other, and collinear overlaps of positive length all
    count. Sharing exactly one common endpoint (and nothing else) does
    not. This matches the planarity condition used for matchings: no two
    edges may share a point except at common endpoints.
    """
    d1 = orient(s2.a, s2.b, s1.a)
    d2 = orient(s2.a, s2.b, s1.b)
    d3 = orient(s1.a, s1.b, s2.a)
    d4 = orient(s1.a, s1.b, s2.b)

    if d1 * d2 < 0 and d3 * d4 < 0:
        return True

    ends1 = (s1.a, s1.b)
    ends2 = (s2.a, s2.b)
    # Touch points: an endpoint of one lying on the other segment. Any
    # such point that is not an endpoint of both segments is a crossing.
    for p in ends1:
        if _on_segment(s2, p) and p not in ends2:
            return True
    for p in ends2:
        if _on_segment(s1, p) and p not in ends1:
            return True

    # Remaining case: collinear segments whose only shared endpoints are
    # common. An overlap of positive length still shares interior points.
    if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
        shared = [p for p in ends1 if p in ends2]
        if len(shared) == 2:
            return True  # identical segments overlap in their interiors
        if len(shared) == 1:
            # Same-direction overlap from the shared endpoint would have
            # put the other endpoint on the partner segment (caught
            # above), so here the segments only touch end to end.
            return False
    return False


def bbox_disjoint(s1: Segment, s2: Segment) -> bool:
    """Cheap rejection: bounding boxes do not intersect."""
    return (
        max(s1.a.x, s1.b.x) < min(s2.a.x, s2.b.x)
        or max(s2.a.x, s2.b.x) < min(s1.a.x, s1.b.x)
        or max(s1.a.y, s1.b.y) < min(s2.a.y, s2.b.y)
        or max(s2.a.y, s2.b.y) < min(s1.a.y, s1.b.y)
    )


def point_sees_point(p: Point, q: Point, edges: Iterable[Segment]) -> bool:
    """True iff segment pq crosses no edge of the matching.

    Edges incident to p or q at that endpoint do not block by
    themselves; a collinear overlap with an incident edge still blocks.
    p == q is vacuously visible.
    """
    if p == q:
        return True
    sight = Segment(p, q)
    ends = {p, q}
    for e in edges:
        if {e.a, e.b} == ends:
            continue  # pq is that matching edge; it does not block itself
        if bbox_disjoint(sight, e):
            continue
        if segments_cross(sight, e):
            return False
    return True


def edge_sees_edge(e1: Segment, e2: Segment, edges: Iterable[Segment]) -> bool:
    """Pairwise-endpoint visibility between two edges.

    e1 = v1v2 sees e2 = v3v4 iff (v1 sees v3 and v2 sees v4) or
    (v1 sees v4 and v2 sees v3) with respect to the given matching
    edges.
    """
    blockers = list(edges)
    v1, v2 = e1.a, e1.b
    v3, v4 = e2.a, e2.b
    if point_sees_point(v1, v3, blockers) and point_sees_point(v2, v4, blockers):
        return True
    if point_sees_point(v1, v4, blockers) and point_sees_point(v2, v3, blockers):
        return True
    return False


def crossing_count(s: Segment, edges: Iterable[Segment]) -> int:
    """Number of edges crossing s, excluding edges sharing an endpoint with s."""
    n = 0
    for e in edges:
        if share_endpoint(s, e):
            continue
        if bbox_disjoint(s, e):
            continue
        if segments_cross(s, e):
            n += 1
    return n
