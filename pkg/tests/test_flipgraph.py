import random
from collections import deque

import pytest

from matchflip.flipgraph import (
    DistanceResult,
    FlipSequence,
    NodeCapExceeded,
    SearchRestriction,
    crossing_lower_bound,
    depth_bounded_search,
    flip_distance,
    verify_sequence,
)
from matchflip.matching import (
    FlipMove,
    PlaneMatching,
    PointSet,
    apply_flip,
    canonical_key,
    enumerate_flips,
    validate,
)

SQUARE = PointSet.of([(0, 0), (2, 0), (2, 2), (0, 2)])
VERT = PlaneMatching.of([(0, 3), (1, 2)])
HORIZ = PlaneMatching.of([(0, 1), (2, 3)])


def reference_bfs_distance(ps, m1, m2, cap=200_000):
    """Single-direction BFS oracle, no bells or whistles."""
    start, goal = canonical_key(m1), canonical_key(m2)
    if start == goal:
        return 0
    seen = {start: 0}
    dq = deque([start])
    while dq:
        key = dq.popleft()
        state = PlaneMatching(frozenset(key))
        for mv in enumerate_flips(ps, state):
            child = canonical_key(apply_flip(state, mv))
            if child in seen:
                continue
            seen[child] = seen[key] + 1
            if child == goal:
                return seen[child]
            dq.append(child)
            if len(seen) > cap:
                raise RuntimeError("oracle cap")
    return None


def _random_instance(rng, n, grid=7):
    from tests.test_matching import _plane_matchings, _random_point_set

    while True:
        ps = _random_point_set(rng, n, grid)
        plane = _plane_matchings(ps)
        if len(plane) >= 2:
            m1, m2 = rng.sample(plane, 2)
            return ps, m1, m2


def test_distance_zero():
    res = flip_distance(SQUARE, VERT, VERT)
    assert res.reachable and res.distance == 0 and len(res.witness) == 0


def test_square_distance_one():
    res = flip_distance(SQUARE, VERT, HORIZ)
    assert res.reachable and res.distance == 1
    assert verify_sequence(SQUARE, res.witness, HORIZ) is None


def test_distance_matches_reference_bfs():
    rng = random.Random(31)
    for _ in range(60):
        ps, m1, m2 = _random_instance(rng, rng.choice([6, 8]))
        want = reference_bfs_distance(ps, m1, m2)
        res = flip_distance(ps, m1, m2)
        if want is None:
            assert not res.reachable
        else:
            assert res.reachable and res.distance == want, (ps, m1, m2)
            assert verify_sequence(ps, res.witness, m2) is None
            assert len(res.witness) == res.distance


def test_distance_symmetry():
    rng = random.Random(77)
    for _ in range(25):
        ps, m1, m2 = _random_instance(rng, 6)
        r1 = flip_distance(ps, m1, m2)
        r2 = flip_distance(ps, m2, m1)
        assert r1.reachable == r2.reachable
        if r1.reachable:
            assert r1.distance == r2.distance


def test_determinism_and_worker_independence():
    rng = random.Random(13)
    for _ in range(10):
        ps, m1, m2 = _random_instance(rng, 8)
        base = flip_distance(ps, m1, m2, workers=1)
        for workers in (2, 3):
            again = flip_distance(ps, m1, m2, workers=workers)
            assert again.reachable == base.reachable
            if base.reachable:
                assert again.distance == base.distance
                assert again.witness.moves == base.witness.moves


def test_node_cap_is_a_distinct_error():
    rng = random.Random(8)
    ps, m1, m2 = _random_instance(rng, 8)
    if canonical_key(m1) != canonical_key(m2):
        with pytest.raises(NodeCapExceeded):
            flip_distance(ps, m1, m2, node_cap=1)


def test_max_depth_unreachable_within_bound():
    rng = random.Random(21)
    found = 0
    for _ in range(40):
        ps, m1, m2 = _random_instance(rng, 8)
        true = reference_bfs_distance(ps, m1, m2)
        if true is None or true < 2:
            continue
        res = flip_distance(ps, m1, m2, SearchRestriction(max_depth=true - 1))
        assert not res.reachable and res.depth_limited
        res2 = flip_distance(ps, m1, m2, SearchRestriction(max_depth=true))
        assert res2.reachable and res2.distance == true
        found += 1
    assert found >= 5


def test_restriction_point_subset():
    # Six points, restrict moves to the square's four: the far pair may
    # not participate in any flip.
    ps = PointSet.of([(0, 0), (2, 0), (2, 2), (0, 2), (10, 0), (10, 2)])
    m1 = PlaneMatching.of([(0, 3), (1, 2), (4, 5)])
    m2 = PlaneMatching.of([(0, 1), (2, 3), (4, 5)])
    res = flip_distance(ps, m1, m2, SearchRestriction(allowed_points=frozenset({0, 1, 2, 3})))
    assert res.reachable and res.distance == 1
    # Target that requires moving the far edge is unreachable under the
    # restriction even though it is reachable without it.
    m3 = PlaneMatching.of([(0, 3), (1, 4), (2, 5)])
    if validate(ps, m3) == []:
        res3 = flip_distance(ps, m1, m3, SearchRestriction(allowed_points=frozenset({0, 1, 2, 3})))
        assert not res3.reachable


def test_restriction_extra_edges_widen_scope():
    ps = PointSet.of([(0, 0), (2, 0), (2, 2), (0, 2), (10, 0), (10, 2)])
    m1 = PlaneMatching.of([(0, 3), (1, 2), (4, 5)])
    r = SearchRestriction(allowed_points=frozenset({0, 1, 2, 3}), extra_edges=frozenset({(4, 5)}))
    assert r.scope() == frozenset({0, 1, 2, 3, 4, 5})


def test_verify_sequence_reports_first_failure():
    f_ok = enumerate_flips(SQUARE, VERT)[0]
    bogus = FlipMove(removed=((0, 3), (1, 2)), added=((0, 2), (1, 3)))
    seq = FlipSequence(VERT, (f_ok, bogus))
    fail = verify_sequence(SQUARE, seq, HORIZ)
    assert fail is not None and fail.index == 1


def test_verify_sequence_final_mismatch():
    seq = FlipSequence(VERT, ())
    fail = verify_sequence(SQUARE, seq, HORIZ)
    assert fail is not None and fail.index == 0 and "final" in fail.reason

    ok = verify_sequence(SQUARE, FlipSequence(VERT, ()), VERT)
    assert ok is None


def _fence_instance(n_fence):
    """m1 holds n_fence verticals plus two tall side edges; m2 re-pairs
    the fence tops/bottoms among themselves and runs one long horizontal
    edge through where the fence stood (crossing all n_fence m1 edges)."""
    pts = [(x, 0) for x in range(1, n_fence + 1)]          # bottoms
    pts += [(x, 2) for x in range(1, n_fence + 1)]         # tops
    pts += [(0, 1), (n_fence + 1, 1), (0, 5), (n_fence + 1, 5)]
    ps = PointSet.of(pts)
    n = n_fence
    m1 = PlaneMatching.of(
        [(i, i + n) for i in range(n)] + [(2 * n, 2 * n + 2), (2 * n + 1, 2 * n + 3)]
    )
    m2_pairs = [(i, i + 1) for i in range(0, n, 2)]
    m2_pairs += [(n + i, n + i + 1) for i in range(0, n, 2)]
    m2_pairs += [(2 * n, 2 * n + 1), (2 * n + 2, 2 * n + 3)]
    m2 = PlaneMatching.of(m2_pairs)
    assert validate(ps, m1) == []
    assert validate(ps, m2) == []
    return ps, m1, m2


def test_crossing_lower_bound_examples():
    ps, m1, m2 = _fence_instance(8)
    # The long horizontal in m2 crosses all eight fence edges of m1.
    from matchflip.matching import crossing_count_pairs

    assert crossing_count_pairs(ps, (16, 17), m1.sorted_pairs) == 8
    assert crossing_lower_bound(ps, m1, m2) == 4

    # Identical plane matchings never cross: bound 0.
    assert crossing_lower_bound(ps, m1, m1) == 0

    # ceil(x / 2): an edge crossed by 7 edges forces 4 flips, and one
    # crossed by 2k + 2 edges forces k + 1.
    assert (7 + 1) // 2 == 4
    for k in (1, 5, 12):
        assert ((2 * k + 2) + 1) // 2 == k + 1
    ps6, m1_6, m2_6 = _fence_instance(6)
    assert crossing_lower_bound(ps6, m1_6, m2_6) == 3


def test_lower_bound_never_exceeds_distance():
    rng = random.Random(2)
    solved = 0
    for _ in range(200):
        ps, m1, m2 = _random_instance(rng, rng.choice([6, 8, 10]))
        try:
            res = flip_distance(ps, m1, m2, node_cap=300_000)
        except NodeCapExceeded:
            continue
        if not res.reachable:
            continue
        assert res.distance >= crossing_lower_bound(ps, m1, m2), (ps, m1, m2)
        solved += 1
    assert solved >= 150


def test_depth_bounded_search_exhaustive():
    rng = random.Random(91)
    for _ in range(25):
        ps, m1, m2 = _random_instance(rng, 6)
        true = reference_bfs_distance(ps, m1, m2)
        if true is None:
            assert not depth_bounded_search(ps, m1, m2, 6)
        else:
            assert depth_bounded_search(ps, m1, m2, true)
            if true >= 1:
                assert not depth_bounded_search(ps, m1, m2, true - 1)
