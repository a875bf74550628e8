"""Plane perfect matchings over integer point sets, and their flips.

A matching is stored as a set of unordered index pairs into an immutable
point set. A flip removes two disjoint edges and re-pairs their four
endpoints so the result is again a plane perfect matching. Flip
enumeration is the inner loop of every search, so it short-circuits
aggressively but must return exactly the set a brute-force re-pairing
plus full revalidation would.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .geometry import Point, Segment, _on_segment, bbox_disjoint, segments_cross

Pair = tuple[int, int]

_BUCKET = 256  # grid cell size for the candidate-pair index


class StructuralError(ValueError):
    """An index is out of range or a pair is malformed."""


class InvalidFlipError(ValueError):
    """A flip move is not applicable to the given matching."""


def _norm_pair(pair: Iterable[int]) -> Pair:
    i, j = pair
    if i == j:
        raise StructuralError(f"pair with repeated index {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(set(self.points)) != len(self.points):
            raise StructuralError("point set contains duplicate points")

    @classmethod
    def of(cls, coords: Iterable[tuple[int, int]]) -> "PointSet":
        return cls(tuple(Point(x, y) for x, y in coords))

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def segment(self, pair: Pair) -> Segment:
        i, j = pair
        return Segment(self.points[i], self.points[j])

    @cached_property
    def _point_buckets(self) -> dict[tuple[int, int], list[int]]:
        buckets: dict[tuple[int, int], list[int]] = {}
        for idx, p in enumerate(self.points):
            buckets.setdefault((p.x // _BUCKET, p.y // _BUCKET), []).append(idx)
        return buckets

    def points_near_segment(self, seg: Segment) -> Iterator[int]:
        """Indices of points whose bucket touches seg's bounding box."""
        x0 = min(seg.a.x, seg.b.x) // _BUCKET
        x1 = max(seg.a.x, seg.b.x) // _BUCKET
        y0 = min(seg.a.y, seg.b.y) // _BUCKET
        y1 = max(seg.a.y, seg.b.y) // _BUCKET
        buckets = self._point_buckets
        for cx in range(x0, x1 + 1):
            for cy in range(y0, y1 + 1):
                yield from buckets.get((cx, cy), ())


@dataclass(frozen=True)
class PlaneMatching:
    pairs: frozenset[Pair]

    @classmethod
    def of(cls, pairs: Iterable[Iterable[int]]) -> "PlaneMatching":
        return cls(frozenset(_norm_pair(p) for p in pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: Iterable[int]) -> bool:
        return _norm_pair(pair) in self.pairs

    @cached_property
    def sorted_pairs(self) -> tuple[Pair, ...]:
        return tuple(sorted(self.pairs))

    def segments(self, ps: PointSet) -> list[Segment]:
        return [ps.segment(p) for p in self.sorted_pairs]

    def partner(self, i: int) -> int | None:
        for a, b in self.pairs:
            if a == i:
                return b
            if b == i:
                return a
        return None


def canonical_key(m: PlaneMatching) -> tuple[Pair, ...]:
    """Equal keys iff equal matchings: the sorted tuple of sorted pairs."""
    return m.sorted_pairs


@dataclass(frozen=True)
class FlipMove:
    removed: tuple[Pair, Pair]
    added: tuple[Pair, Pair]

    def __post_init__(self) -> None:
        r = tuple(sorted(_norm_pair(p) for p in self.removed))
        a = tuple(sorted(_norm_pair(p) for p in self.added))
        object.__setattr__(self, "removed", r)
        object.__setattr__(self, "added", a)
        rpts = {i for p in r for i in p}
        apts = {i for p in a for i in p}
        if len(rpts) != 4:
            raise StructuralError("removed edges must be disjoint")
        if rpts != apts:
            raise StructuralError("added edges must re-pair the removed endpoints")
        if set(r) & set(a):
            raise StructuralError("flip must change both edges")

    def reversed(self) -> "FlipMove":
        return FlipMove(removed=self.added, added=self.removed)


Violation = tuple[str, tuple]


def validate(ps: PointSet, m: PlaneMatching) -> list[Violation]:
    """Empty list iff m is a plane perfect matching on ps.

    Reports ('unmatched', (i,)), ('repeated', (i,)) and
    ('crossing', (pair1, pair2)) violations. Out-of-range indices raise
    StructuralError since nothing else is meaningful then.
    """
    n = len(ps)
    seen: dict[int, int] = {}
    issues: list[Violation] = []
    for a, b in m.sorted_pairs:
        for i in (a, b):
            if not 0 <= i < n:
                raise StructuralError(f"point index {i} out of range 0..{n - 1}")
            seen[i] = seen.get(i, 0) + 1
    for i in range(n):
        c = seen.get(i, 0)
        if c == 0:
            issues.append(("unmatched", (i,)))
        elif c > 1:
            issues.append(("repeated", (i,)))
    issues.extend(("crossing", pair) for pair in crossing_pairs(ps, m.sorted_pairs))
    return issues


def crossing_pairs(ps: PointSet, pairs: Sequence[Pair]) -> list[tuple[Pair, Pair]]:
    """All crossing pairs among the given edges, bucketed to avoid O(n^2)."""
    segs = [ps.segment(p) for p in pairs]
    cells: dict[tuple[int, int], list[int]] = {}
    for idx, s in enumerate(segs):
        x0, x1 = min(s.a.x, s.b.x) // _BUCKET, max(s.a.x, s.b.x) // _BUCKET
        y0, y1 = min(s.a.y, s.b.y) // _BUCKET, max(s.a.y, s.b.y) // _BUCKET
        for cx in range(x0, x1 + 1):
            for cy in range(y0, y1 + 1):
                cells.setdefault((cx, cy), []).append(idx)
    hits: set[tuple[int, int]] = set()
    out: list[tuple[Pair, Pair]] = []
    for members in cells.values():
        if len(members) < 2:
            continue
        for u in range(len(members)):
            for v in range(u + 1, len(members)):
                i, j = members[u], members[v]
                key = (i, j) if i < j else (j, i)
                if key in hits:
                    continue
                if bbox_disjoint(segs[key[0]], segs[key[1]]):
                    continue
                hits.add(key)
                if segments_cross(segs[key[0]], segs[key[1]]):
                    out.append((pairs[key[0]], pairs[key[1]]))
    out.sort()
    return out


def _edge_passes_through_point(ps: PointSet, pair: Pair, seg: Segment) -> bool:
    """True iff seg contains some point of ps other than its own endpoints."""
    for idx in ps.points_near_segment(seg):
        if idx in pair:
            continue
        if _on_segment(seg, ps[idx]):
            return True
    return False


def _new_edges_legal(
    ps: PointSet,
    e3: Pair,
    e4: Pair,
    retained: Iterable[tuple[Pair, Segment]],
) -> bool:
    s3, s4 = ps.segment(e3), ps.segment(e4)
    if segments_cross(s3, s4):
        return False
    # A new edge through any other point of the set is rejected outright:
    # two vertices may not be collinear-incident with an edge interior.
    if _edge_passes_through_point(ps, e3, s3) or _edge_passes_through_point(ps, e4, s4):
        return False
    for _, seg in retained:
        if not bbox_disjoint(s3, seg) and segments_cross(s3, seg):
            return False
        if not bbox_disjoint(s4, seg) and segments_cross(s4, seg):
            return False
    return True


def _repairings(e1: Pair, e2: Pair) -> list[tuple[Pair, Pair]]:
    a, b = e1
    c, d = e2
    return [
        (_norm_pair((a, c)), _norm_pair((b, d))),
        (_norm_pair((a, d)), _norm_pair((b, c))),
    ]


def enumerate_flips(ps: PointSet, m: PlaneMatching) -> list[FlipMove]:
    """Exactly the flips whose application yields a different plane
    perfect matching on ps.

    For each unordered pair of edges both alternative re-pairings are
    tested; new edges must not cross each other, any retained edge, or
    pass through any other point of the set.
    """
    pairs = m.sorted_pairs
    segs = {p: ps.segment(p) for p in pairs}
    moves: list[FlipMove] = []
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            e1, e2 = pairs[i], pairs[j]
            retained = [(p, segs[p]) for p in pairs if p != e1 and p != e2]
            for e3, e4 in _repairings(e1, e2):
                if _new_edges_legal(ps, e3, e4, retained):
                    moves.append(FlipMove(removed=(e1, e2), added=(e3, e4)))
    return moves


def crossing_count_pairs(ps: PointSet, pair: Pair, others: Sequence[Pair]) -> int:
    """Edges among others crossing ps.segment(pair), skipping any edge
    sharing an index with pair."""
    from .geometry import crossing_count

    seg = ps.segment(pair)
    edges = [ps.segment(q) for q in others if not set(q) & set(pair)]
    return crossing_count(seg, edges)


def apply_flip(m: PlaneMatching, f: FlipMove, ps: PointSet | None = None) -> PlaneMatching:
    """Apply f to m. With ps given, full legality is checked and an
    InvalidFlipError raised for moves whose result would not validate."""
    r1, r2 = f.removed
    if r1 not in m.pairs or r2 not in m.pairs:
        raise InvalidFlipError(f"removed edges {f.removed} not both present")
    result = PlaneMatching(m.pairs - set(f.removed) | set(f.added))
    if ps is not None:
        e3, e4 = f.added
        retained = [(p, ps.segment(p)) for p in m.sorted_pairs if p != r1 and p != r2]
        if not _new_edges_legal(ps, e3, e4, retained):
            raise InvalidFlipError(f"flip {f} produces a nonplanar matching")
    return result
