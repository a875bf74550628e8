"""Exact flip distance and sequence verification.

Distance is computed by bidirectional breadth-first search over
canonicalized matchings. Flips are self-inverse, so the backward search
expands the same neighbor relation as the forward one. A node cap turns
runaway searches into a resource error distinct from unreachability,
and results are deterministic for any worker count: frontier expansion
is chunked in sorted order, merged in submission order, and ties during
witness reconstruction go to the lexicographically smallest canonical
key.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .geometry import Segment
from .matching import (
    FlipMove,
    Pair,
    PlaneMatching,
    PointSet,
    apply_flip,
    canonical_key,
    crossing_count_pairs,
    enumerate_flips,
    validate,
)

Key = tuple[Pair, ...]

DEFAULT_NODE_CAP = 10**7


class NodeCapExceeded(RuntimeError):
    """The state-space budget was exhausted before the search finished."""

    def __init__(self, cap: int, explored: int):
        super().__init__(f"node cap {cap} exceeded after exploring {explored} states")
        self.cap = cap
        self.explored = explored


@dataclass(frozen=True)
class SearchRestriction:
    """Restricts which edges a move may touch.

    With allowed_points set, every removed edge of a move must have both
    endpoints inside the subset; edges listed in extra_edges widen the
    subset by their endpoints, so a named edge (and anything created
    from its points) stays in scope. max_depth bounds the search radius.

    require_involved names edges that must each be flipped at least once
    over the whole sequence. This is the executable form of the
    conditional lower bounds ("a sequence in which exactly this edge
    outside the core is involved"); the search then minimizes over
    exactly those sequences.
    """

    allowed_points: frozenset[int] | None = None
    max_depth: int | None = None
    extra_edges: frozenset[Pair] = frozenset()
    require_involved: frozenset[Pair] = frozenset()

    def scope(self) -> frozenset[int] | None:
        if self.allowed_points is None:
            return None
        extra = {i for pair in self.extra_edges for i in pair}
        return self.allowed_points | extra

    def admits(self, move: FlipMove, scope: frozenset[int] | None) -> bool:
        if scope is None:
            return True
        return all(i in scope for pair in move.removed for i in pair)


@dataclass(frozen=True)
class FlipSequence:
    start: PlaneMatching
    moves: tuple[FlipMove, ...]

    def __len__(self) -> int:
        return len(self.moves)

    def states(self, ps: PointSet) -> list[PlaneMatching]:
        out = [self.start]
        for mv in self.moves:
            out.append(apply_flip(out[-1], mv, ps))
        return out


@dataclass(frozen=True)
class DistanceResult:
    reachable: bool
    distance: int | None = None
    witness: FlipSequence | None = None
    explored: int = 0
    depth_limited: bool = False  # True when max_depth stopped the search


@dataclass
class VerifyFailure:
    index: int  # move index, or len(moves) for a final-state mismatch
    reason: str


def verify_sequence(
    ps: PointSet,
    seq: FlipSequence,
    target: PlaneMatching,
) -> VerifyFailure | None:
    """None iff every move applies legally and the final state equals target."""
    issues = validate(ps, seq.start)
    if issues:
        return VerifyFailure(0, f"start state invalid: {issues[:3]}")
    cur = seq.start
    for idx, mv in enumerate(seq.moves):
        try:
            cur = apply_flip(cur, mv, ps)
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            return VerifyFailure(idx, str(exc))
    if canonical_key(cur) != canonical_key(target):
        return VerifyFailure(len(seq.moves), "final state differs from target")
    return None


def crossing_lower_bound(ps: PointSet, m1: PlaneMatching, m2: PlaneMatching) -> int:
    """ceil(x/2) where x is the largest number of m1 edges crossed by a
    single edge of m2. Any flip removes at most two crossing edges, so
    at least this many flips separate the matchings."""
    if not m2.pairs:
        return 0
    m1_segs = m1.segments(ps)
    x_max = 0
    for pair in m2.sorted_pairs:
        x = crossing_count_pairs(ps, pair, m1.sorted_pairs)
        x_max = max(x_max, x)
    return (x_max + 1) // 2


def _neighbors(
    ps: PointSet,
    m: PlaneMatching,
    restriction: SearchRestriction | None,
    scope: frozenset[int] | None,
) -> list[tuple[Key, FlipMove]]:
    out = []
    for mv in enumerate_flips(ps, m):
        if restriction is not None and not restriction.admits(mv, scope):
            continue
        out.append((canonical_key(apply_flip(m, mv)), mv))
    out.sort(key=lambda t: t[0])
    return out


@dataclass
class _Side:
    start_key: Key
    parents: dict[Key, tuple[Key, FlipMove] | None] = field(default_factory=dict)
    depth: dict[Key, int] = field(default_factory=dict)
    frontier: list[Key] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.parents[self.start_key] = None
        self.depth[self.start_key] = 0
        self.frontier = [self.start_key]


def _expand_level(
    side: _Side,
    ps: PointSet,
    restriction: SearchRestriction | None,
    scope: frozenset[int] | None,
    workers: int,
) -> None:
    """Expand one full BFS level deterministically."""
    frontier = sorted(side.frontier)
    states = {key: PlaneMatching(frozenset(key)) for key in frontier}

    def work(chunk: Sequence[Key]) -> list[tuple[Key, list[tuple[Key, FlipMove]]]]:
        return [(k, _neighbors(ps, states[k], restriction, scope)) for k in chunk]

    if workers > 1 and len(frontier) > 1:
        size = (len(frontier) + workers - 1) // workers
        chunks = [frontier[i : i + size] for i in range(0, len(frontier), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = [item for part in pool.map(work, chunks) for item in part]
    else:
        results = work(frontier)

    next_depth = side.depth[frontier[0]] + 1
    new_frontier: list[Key] = []
    for key, neigh in results:  # results follow sorted frontier order
        for nkey, mv in neigh:
            if nkey in side.depth:
                if side.depth[nkey] == next_depth:
                    cur = side.parents[nkey]
                    if cur is not None and key < cur[0]:
                        side.parents[nkey] = (key, mv)
                continue
            side.depth[nkey] = next_depth
            side.parents[nkey] = (key, mv)
            new_frontier.append(nkey)
    side.frontier = new_frontier


def _trace(side: _Side, key: Key) -> list[tuple[Key, FlipMove]]:
    """Moves from the side's start to key, in order."""
    out = []
    cur = key
    while side.parents[cur] is not None:
        pkey, mv = side.parents[cur]
        out.append((cur, mv))
        cur = pkey
    out.reverse()
    return out


def flip_distance(
    ps: PointSet,
    m1: PlaneMatching,
    m2: PlaneMatching,
    restriction: SearchRestriction | None = None,
    node_cap: int = DEFAULT_NODE_CAP,
    workers: int = 1,
) -> DistanceResult:
    """Minimum number of flips transforming m1 into m2, with a witness.

    Returns an unreachable result when max_depth is exhausted or the
    reachable component was fully explored without meeting; raises
    NodeCapExceeded when the state budget runs out first.
    """
    for name, m in (("m1", m1), ("m2", m2)):
        issues = validate(ps, m)
        if issues:
            raise ValueError(f"{name} is not a plane perfect matching: {issues[:3]}")

    if restriction is not None and restriction.require_involved:
        return _involved_distance(ps, m1, m2, restriction, node_cap)

    k1, k2 = canonical_key(m1), canonical_key(m2)
    if k1 == k2:
        return DistanceResult(True, 0, FlipSequence(m1, ()), explored=1)

    max_depth = restriction.max_depth if restriction else None
    scope = restriction.scope() if restriction else None

    fwd = _Side(k1)
    bwd = _Side(k2)
    fwd_level = bwd_level = 0
    best: int | None = None
    best_key: Key | None = None
    depth_limited = False

    # A meet detected after this point has sum >= min(levels) + 1, so the
    # loop runs until the recorded best cannot be beaten.
    while fwd.frontier and bwd.frontier:
        lower = min(fwd_level, bwd_level) + 1
        if best is not None and best <= lower:
            break
        if max_depth is not None and lower > max_depth:
            if best is None or best > max_depth:
                depth_limited = True
            break
        if len(fwd.frontier) <= len(bwd.frontier):
            side = fwd
            fwd_level += 1
        else:
            side = bwd
            bwd_level += 1
        other = bwd if side is fwd else fwd
        _expand_level(side, ps, restriction, scope, workers)
        explored = len(fwd.depth) + len(bwd.depth)
        if explored > node_cap:
            raise NodeCapExceeded(node_cap, explored)
        for k in side.frontier:
            if k in other.depth:
                total = fwd.depth[k] + bwd.depth[k]
                if best is None or (total, k) < (best, best_key):
                    best, best_key = total, k

    explored = len(fwd.depth) + len(bwd.depth)
    if best is not None and (max_depth is None or best <= max_depth):
        moves = [mv for _, mv in _trace(fwd, best_key)]
        moves += [mv.reversed() for _, mv in reversed(_trace(bwd, best_key))]
        witness = FlipSequence(m1, tuple(moves))
        return DistanceResult(True, best, witness, explored=explored)
    if best is not None:
        depth_limited = True  # a sequence exists but is longer than the bound
    return DistanceResult(False, explored=explored, depth_limited=depth_limited)


def _involved_distance(
    ps: PointSet,
    m1: PlaneMatching,
    m2: PlaneMatching,
    restriction: SearchRestriction,
    node_cap: int,
) -> DistanceResult:
    """Shortest sequence m1 -> m2 among sequences that flip every edge in
    restriction.require_involved at least once. Single-direction BFS over
    (matching, involvement-mask) states; deterministic via sorted
    expansion and smallest-parent tie-breaks."""
    required = tuple(sorted(restriction.require_involved))
    bit = {e: 1 << i for i, e in enumerate(required)}
    full = (1 << len(required)) - 1
    scope = restriction.scope()
    max_depth = restriction.max_depth

    start = (canonical_key(m1), 0)
    goal = (canonical_key(m2), full)
    if start == goal:
        return DistanceResult(True, 0, FlipSequence(m1, ()), explored=1)

    parents: dict[tuple[Key, int], tuple[tuple[Key, int], FlipMove] | None] = {start: None}
    frontier = [start]
    depth = 0
    while frontier:
        if max_depth is not None and depth >= max_depth:
            return DistanceResult(False, explored=len(parents), depth_limited=True)
        depth += 1
        nxt: list[tuple[Key, int]] = []
        for key, mask in sorted(frontier):
            state = PlaneMatching(frozenset(key))
            for mv in enumerate_flips(ps, state):
                if not restriction.admits(mv, scope):
                    continue
                nmask = mask
                for e in mv.removed:
                    nmask |= bit.get(e, 0)
                child = (canonical_key(apply_flip(state, mv)), nmask)
                if child in parents:
                    continue
                parents[child] = ((key, mask), mv)
                nxt.append(child)
        if len(parents) > node_cap:
            raise NodeCapExceeded(node_cap, len(parents))
        if goal in parents:
            moves: list[FlipMove] = []
            cur = goal
            while parents[cur] is not None:
                prev, mv = parents[cur]
                moves.append(mv)
                cur = prev
            moves.reverse()
            return DistanceResult(
                True, depth, FlipSequence(m1, tuple(moves)), explored=len(parents)
            )
        frontier = nxt
    return DistanceResult(False, explored=len(parents))


def depth_bounded_search(
    ps: PointSet,
    start: PlaneMatching,
    target: PlaneMatching,
    max_depth: int,
    restriction: SearchRestriction | None = None,
    on_transition: Callable[[PlaneMatching, FlipMove, PlaneMatching], None] | None = None,
) -> bool:
    """Exhaustive bounded search: True iff target is reachable from start
    in at most max_depth flips.

    Explores the full breadth-first levels (with canonical-key
    deduplication per depth), so a False answer is a certificate that no
    sequence of length <= max_depth exists. on_transition is invoked for
    every enumerated legal transition, which lets callers audit
    per-flip properties over the entire explored space.
    """
    target_key = canonical_key(target)
    start_key = canonical_key(start)
    if start_key == target_key:
        return True
    scope = restriction.scope() if restriction else None
    seen: set[Key] = {start_key}
    level = [start_key]
    for _ in range(max_depth):
        nxt: list[Key] = []
        for key in sorted(level):
            state = PlaneMatching(frozenset(key))
            for mv in enumerate_flips(ps, state):
                if restriction is not None and not restriction.admits(mv, scope):
                    continue
                child = apply_flip(state, mv)
                ckey = canonical_key(child)
                if on_transition is not None:
                    on_transition(state, mv, child)
                if ckey == target_key:
                    return True
                if ckey not in seen:
                    seen.add(ckey)
                    nxt.append(ckey)
        level = nxt
        if not level:
            break
    return False
