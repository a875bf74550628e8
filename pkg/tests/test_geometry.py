import itertools
import random
from fractions import Fraction

import pytest

from matchflip.geometry import (
    Point,
    Segment,
    CoordinateRangeError,
    orient,
    segments_cross,
    point_sees_point,
    edge_sees_edge,
    crossing_count,
)


def P(x, y):
    return Point(x, y)


def S(ax, ay, bx, by):
    return Segment(Point(ax, ay), Point(bx, by))


# ---------------------------------------------------------------------------
# Rational-arithmetic reference for segments_cross. Works on the closed
# segments parametrically with Fractions; shares no code with the
# orientation-based implementation.
# ---------------------------------------------------------------------------

def _interval_1d(a, b):
    return (min(a, b), max(a, b))


def _cross_reference(s1: Segment, s2: Segment) -> bool:
    p, r = (s1.a.x, s1.a.y), (s1.b.x - s1.a.x, s1.b.y - s1.a.y)
    q, s = (s2.a.x, s2.a.y), (s2.b.x - s2.a.x, s2.b.y - s2.a.y)
    rxs = r[0] * s[1] - r[1] * s[0]
    qp = (q[0] - p[0], q[1] - p[1])
    qpxr = qp[0] * r[1] - qp[1] * r[0]

    shared = [e for e in (s1.a, s1.b) if e in (s2.a, s2.b)]

    if rxs == 0 and qpxr != 0:
        return False  # parallel, not collinear
    if rxs == 0 and qpxr == 0:
        # Collinear: project onto the dominant axis of r and intersect.
        axis = 0 if r[0] != 0 else 1
        i1 = _interval_1d((s1.a.x, s1.a.y)[axis], (s1.b.x, s1.b.y)[axis])
        i2 = _interval_1d((s2.a.x, s2.a.y)[axis], (s2.b.x, s2.b.y)[axis])
        lo, hi = max(i1[0], i2[0]), min(i1[1], i2[1])
        if lo > hi:
            return False
        if lo < hi:
            return True  # positive-length overlap has non-endpoint points
        # Single shared coordinate: crossing only if not a common endpoint.
        return len(shared) == 0
    t = Fraction(qp[0] * s[1] - qp[1] * s[0], rxs)
    u = Fraction(qpxr, rxs)
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return False
    ix = p[0] + t * r[0]
    iy = p[1] + t * r[1]
    for e in shared:
        if Fraction(e.x) == ix and Fraction(e.y) == iy:
            return False  # the only contact is a common endpoint
    return True


def test_orient_examples():
    assert orient(P(0, 0), P(1, 0), P(0, 1)) == 1
    assert orient(P(0, 0), P(1, 1), P(2, 2)) == 0
    assert orient(P(0, 0), P(0, 1), P(1, 0)) == -1


def test_orient_antisymmetry_random():
    rng = random.Random(7)
    for _ in range(2000):
        pts = [P(rng.randint(-50, 50), rng.randint(-50, 50)) for _ in range(3)]
        p, q, r = pts
        assert orient(p, q, r) == -orient(p, r, q)
        assert orient(p, q, r) == orient(q, r, p)


def test_coordinate_limit_enforced():
    with pytest.raises(CoordinateRangeError):
        Point(2**63, 0)


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        S(1, 1, 1, 1)


def test_segments_cross_examples():
    assert segments_cross(S(0, 0, 2, 2), S(0, 2, 2, 0))      # proper crossing
    assert not segments_cross(S(0, 0, 1, 1), S(1, 1, 2, 0))  # shared endpoint only
    assert segments_cross(S(0, 0, 4, 0), S(2, 0, 6, 0))      # collinear overlap
    assert segments_cross(S(0, 0, 4, 0), S(2, 0, 2, 5))      # endpoint in interior
    assert segments_cross(S(0, 0, 4, 0), S(0, 0, 2, 0))      # overlap from shared end
    assert not segments_cross(S(0, 0, 4, 0), S(4, 0, 8, 0))  # collinear end to end
    assert segments_cross(S(0, 0, 4, 0), S(4, 0, 0, 0))      # identical reversed


def test_segments_cross_symmetry_random():
    rng = random.Random(11)
    for _ in range(3000):
        s1 = _random_segment(rng, 12)
        s2 = _random_segment(rng, 12)
        assert segments_cross(s1, s2) == segments_cross(s2, s1)


def _random_segment(rng, span):
    while True:
        a = P(rng.randint(-span, span), rng.randint(-span, span))
        b = P(rng.randint(-span, span), rng.randint(-span, span))
        if a != b:
            return Segment(a, b)


def test_cross_agrees_with_rational_reference_random():
    rng = random.Random(2024)
    for _ in range(100_000):
        s1 = _random_segment(rng, 6)
        s2 = _random_segment(rng, 6)
        assert segments_cross(s1, s2) == _cross_reference(s1, s2), (s1, s2)


def test_cross_agrees_with_rational_reference_exhaustive_grid():
    pts = [P(x, y) for x in range(5) for y in range(5)]
    segs = [Segment(a, b) for a, b in itertools.combinations(pts, 2)]
    rng = random.Random(5)
    # All pairs over a 5x5 grid is 45k pairs; exact but cheap.
    for s1, s2 in itertools.combinations(rng.sample(segs, len(segs)), 2):
        assert segments_cross(s1, s2) == _cross_reference(s1, s2), (s1, s2)


def test_point_sees_point():
    # Vertical edge between them blocks the horizontal pair.
    block = [S(1, -1, 1, 1)]
    assert not point_sees_point(P(0, 0), P(2, 0), block)
    # Adjacent endpoints of the same matching edge see each other.
    edge = S(0, 0, 2, 0)
    assert point_sees_point(P(0, 0), P(2, 0), [edge])
    # Symmetry.
    rng = random.Random(3)
    for _ in range(500):
        p = P(rng.randint(-9, 9), rng.randint(-9, 9))
        q = P(rng.randint(-9, 9), rng.randint(-9, 9))
        edges = [_random_segment(rng, 9) for _ in range(4)]
        assert point_sees_point(p, q, edges) == point_sees_point(q, p, edges)


def test_point_sees_self():
    assert point_sees_point(P(1, 1), P(1, 1), [S(0, 0, 2, 2)])


def test_edge_sees_edge_parallel_facing():
    e1 = S(0, 0, 0, 2)
    e2 = S(3, 0, 3, 2)
    assert edge_sees_edge(e1, e2, [e1, e2])
    # A wall between them blocks both pairings.
    wall = S(1, -5, 1, 5)
    assert not edge_sees_edge(e1, e2, [e1, e2, wall])


def test_edge_sees_edge_cross_pairing():
    # Only the crossed endpoint pairing is clear; still counts as seeing.
    e1 = S(0, 0, 0, 4)
    e2 = S(3, 4, 3, 8)
    half_wall = S(1, 3, 1, 10)   # blocks top-top and bottom-... check both
    edges = [e1, e2, half_wall]
    expected = (
        point_sees_point(P(0, 0), P(3, 4), edges) and point_sees_point(P(0, 4), P(3, 8), edges)
    ) or (
        point_sees_point(P(0, 0), P(3, 8), edges) and point_sees_point(P(0, 4), P(3, 4), edges)
    )
    assert edge_sees_edge(e1, e2, edges) == expected


def test_crossing_count():
    fence = [S(x, 0, x, 4) for x in range(1, 6)]
    assert crossing_count(S(0, 2, 6, 2), fence) == 5
    assert crossing_count(S(0, 10, 6, 10), fence) == 0
    # Edges sharing an endpoint with s are excluded from the count.
    assert crossing_count(S(0, 0, 3, 0), [S(0, 0, 0, 5), S(1, -1, 1, 1)]) == 1
