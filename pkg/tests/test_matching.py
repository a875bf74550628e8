import itertools
import random

import pytest

from matchflip.geometry import Point, orient, segments_cross
from matchflip.matching import (
    FlipMove,
    InvalidFlipError,
    PlaneMatching,
    PointSet,
    StructuralError,
    apply_flip,
    canonical_key,
    enumerate_flips,
    validate,
)

SQUARE = PointSet.of([(0, 0), (2, 0), (2, 2), (0, 2)])


def perfect_matchings(n):
    """All pairings of indices 0..n-1 (n even)."""
    if n == 0:
        yield []
        return
    idx = list(range(n))

    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for k in range(1, len(rest)):
            b = rest[k]
            for tail in rec(rest[1:k] + rest[k + 1:]):
                yield [(a, b)] + tail

    yield from rec(idx)


def brute_force_flips(ps, m):
    """Oracle: all edge pairs, all re-pairings, full revalidation."""
    out = []
    pairs = m.sorted_pairs
    for e1, e2 in itertools.combinations(pairs, 2):
        a, b = e1
        c, d = e2
        for e3, e4 in [((a, c), (b, d)), ((a, d), (b, c))]:
            e3 = tuple(sorted(e3))
            e4 = tuple(sorted(e4))
            cand = PlaneMatching(m.pairs - {e1, e2} | {e3, e4})
            if cand.pairs == m.pairs:
                continue
            if validate(ps, cand) == [] and _no_point_on_edge(ps, cand):
                out.append(FlipMove(removed=(e1, e2), added=(e3, e4)))
    return sorted(out, key=lambda f: (f.removed, f.added))


def _no_point_on_edge(ps, m):
    # A matching edge passing exactly through a third point is rejected.
    from matchflip.geometry import _on_segment

    for pair in m.pairs:
        seg = ps.segment(pair)
        for i in range(len(ps)):
            if i in pair:
                continue
            if _on_segment(seg, ps[i]):
                return False
    return True


def test_validate_square_ok():
    m = PlaneMatching.of([(0, 3), (1, 2)])  # two verticals
    assert validate(SQUARE, m) == []


def test_validate_crossing_diagonals():
    m = PlaneMatching.of([(0, 2), (1, 3)])
    issues = validate(SQUARE, m)
    assert ("crossing", ((0, 2), (1, 3))) in issues


def test_validate_unmatched():
    m = PlaneMatching.of([(0, 1)])
    issues = validate(SQUARE, m)
    kinds = sorted(v for v, _ in issues)
    assert kinds == ["unmatched", "unmatched"]


def test_validate_out_of_range_raises():
    with pytest.raises(StructuralError):
        validate(SQUARE, PlaneMatching.of([(0, 9), (1, 2)]))


def test_square_has_exactly_one_flip():
    m = PlaneMatching.of([(0, 3), (1, 2)])
    flips = enumerate_flips(SQUARE, m)
    assert len(flips) == 1
    nxt = apply_flip(m, flips[0], SQUARE)
    assert nxt.pairs == frozenset({(0, 1), (2, 3)})


def test_single_edge_no_flips():
    ps = PointSet.of([(0, 0), (1, 0)])
    assert enumerate_flips(ps, PlaneMatching.of([(0, 1)])) == []


def test_flip_four_points_crossing_fix():
    # Two edges whose crossing re-pairing is the only planar alternative.
    ps = PointSet.of([(0, 0), (4, 0), (1, 2), (3, 2)])
    m = PlaneMatching.of([(0, 2), (1, 3)])
    assert validate(ps, m) == []
    flips = enumerate_flips(ps, m)
    assert brute_force_flips(ps, m) == sorted(flips, key=lambda f: (f.removed, f.added))


def test_apply_flip_involution():
    m = PlaneMatching.of([(0, 3), (1, 2)])
    f = enumerate_flips(SQUARE, m)[0]
    back = apply_flip(apply_flip(m, f, SQUARE), f.reversed(), SQUARE)
    assert back.pairs == m.pairs


def test_apply_flip_missing_edge_raises():
    m = PlaneMatching.of([(0, 3), (1, 2)])
    f = FlipMove(removed=((0, 1), (2, 3)), added=((0, 3), (1, 2)))
    with pytest.raises(InvalidFlipError):
        apply_flip(m, f, SQUARE)


def test_apply_flip_nonplanar_raises():
    ps = PointSet.of([(0, 0), (2, 0), (2, 2), (0, 2)])
    m = PlaneMatching.of([(0, 3), (1, 2)])
    f = FlipMove(removed=((0, 3), (1, 2)), added=((0, 2), (1, 3)))  # diagonals cross
    with pytest.raises(InvalidFlipError):
        apply_flip(m, f, ps)


def test_canonical_key():
    m1 = PlaneMatching.of([(3, 1), (0, 2)])
    m2 = PlaneMatching.of([(2, 0), (1, 3)])
    assert canonical_key(m1) == canonical_key(m2)
    m3 = PlaneMatching.of([(0, 1), (2, 3)])
    assert canonical_key(m1) != canonical_key(m3)
    assert canonical_key(PlaneMatching.of([])) == ()


def test_flip_move_invariants():
    with pytest.raises(StructuralError):
        FlipMove(removed=((0, 1), (1, 2)), added=((0, 2), (1, 1)))
    with pytest.raises(StructuralError):
        FlipMove(removed=((0, 1), (2, 3)), added=((0, 1), (2, 3)))
    with pytest.raises(StructuralError):
        FlipMove(removed=((0, 1), (2, 3)), added=((0, 2), (3, 4)))


def _random_point_set(rng, n, grid):
    pts = rng.sample([(x, y) for x in range(grid) for y in range(grid)], n)
    return PointSet.of(pts)


def _plane_matchings(ps):
    out = []
    for pairing in perfect_matchings(len(ps)):
        m = PlaneMatching.of(pairing)
        if validate(ps, m) == [] and _no_point_on_edge(ps, m):
            out.append(m)
    return out


def test_enumerate_matches_brute_force_oracle():
    """Oracle equivalence on random <=8-point sets from a 6x6 grid."""
    rng = random.Random(123)
    checked = 0
    for trial in range(500):
        n = rng.choice([4, 6, 8])
        ps = _random_point_set(rng, n, 6)
        plane = _plane_matchings(ps)
        if not plane:
            continue
        m = rng.choice(plane)
        got = sorted(enumerate_flips(ps, m), key=lambda f: (f.removed, f.added))
        want = brute_force_flips(ps, m)
        assert got == want, (ps, m)
        checked += 1
    assert checked > 400


def test_flip_reversibility_property():
    rng = random.Random(99)
    for _ in range(120):
        ps = _random_point_set(rng, rng.choice([4, 6]), 6)
        for m in _plane_matchings(ps):
            for f in enumerate_flips(ps, m):
                nxt = apply_flip(m, f, ps)
                rev = f.reversed()
                back = [g for g in enumerate_flips(ps, nxt) if g == rev]
                assert back, (ps, m, f)


def _is_simple_quad(pts):
    a, b, c, d = pts
    from matchflip.geometry import Segment

    sides = [Segment(a, b), Segment(b, c), Segment(c, d), Segment(d, a)]
    return not (segments_cross(sides[0], sides[2]) or segments_cross(sides[1], sides[3]))


def test_flip_quadrilateral_property():
    """Removed and added edges of any enumerated flip bound a simple
    4-gon, and fixing the removed pair plus one added edge determines
    the other added edge."""
    rng = random.Random(5)
    for _ in range(80):
        ps = _random_point_set(rng, 6, 6)
        for m in _plane_matchings(ps):
            for f in enumerate_flips(ps, m):
                (a, b), (c, d) = f.removed
                added = set(f.added)
                # The unique other edge given removed pair and one added edge.
                for e3 in list(added):
                    rest = [i for i in (a, b, c, d) if i not in e3]
                    e4 = tuple(sorted(rest))
                    assert e4 in added
                # Walk the 4-cycle alternating removed and added edges.
                edges = list(f.removed) + list(f.added)
                cur = f.removed[0][0]
                cyc = [cur]
                used = set()
                for _ in range(4):
                    e = next(
                        e for e in edges
                        if e not in used and cur in e
                    )
                    used.add(e)
                    cur = e[0] if e[1] == cur else e[1]
                    cyc.append(cur)
                assert cyc[-1] == cyc[0]
                quad = [ps[i] for i in cyc[:4]]
                assert _is_simple_quad(quad), (ps, f)


def test_two_matchings_differ_in_two_edges():
    rng = random.Random(42)
    for _ in range(60):
        ps = _random_point_set(rng, 6, 6)
        plane = _plane_matchings(ps)
        for m1, m2 in itertools.combinations(plane, 2):
            assert len(m1.pairs ^ m2.pairs) >= 4  # at least two edges each side
