"""Compiler from planar vertex cover instances to flip-distance instances.

Given a planar graph G and a budget c, builds a point set with two
plane perfect matchings m1, m2 and k = 2c + 5|E| such that m1 can be
transformed into m2 with at most k flips exactly when G has a vertex
cover of size at most c. Vertices become frames of horizontal edges
(with 2k+2 middle edges and one connector per incident edge gadget),
edges become audited gadget templates, and each side is walled off by
2k+2-fold separator stacks.

The forward direction is constructive: witness_sequence emits the
activation flip for each cover vertex, a five-flip transformation per
edge gadget through the activated frame's connector, and the closing
deactivations, for exactly 2c' + 5|E| moves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .flipgraph import FlipSequence, verify_sequence
from .gadgets import (
    F_MIN,
    GadgetTemplate,
    FlipStructure,
    INNER,
    OUTER,
    SEP_HEIGHT,
    SEP_STEP,
    SEP_X0,
    build_template,
    classify_configuration,
    weight,
)
from .geometry import Point, Segment, crossing_count, edge_sees_edge, point_sees_point, segments_cross
from .matching import FlipMove, Pair, PlaneMatching, PointSet, validate
from .visibility import NonPlanarError, PlanarGraphInput,VisibilityRep, build_visibility_rep

Edge = tuple[int, int]


@dataclass(frozen=True)
class PointRole:
    role: str       # flip-structure | blocker | separator | frame | connector | vertex-separator
    owner: str      # "edge 2-5" or "vertex 3"


@dataclass
class EdgeGadgetInstance:
    edge: Edge
    center: tuple[int, int]
    outer: tuple[int, ...]        # global indices of the 4 outer points
    inner: tuple[int, ...]
    blocker_pairs: list[list[Pair]]
    separator_pairs: list[list[Pair]]
    below_vertex: int             # vertex whose frame sits below the gadget
    above_vertex: int

    def structure(self) -> FlipStructure:
        return FlipStructure(outer=self.outer, inner=self.inner)

    def all_points(self) -> set[int]:
        pts = set(self.outer) | set(self.inner)
        for fan in self.blocker_pairs:
            pts |= {i for p in fan for i in p}
        for side in self.separator_pairs:
            pts |= {i for p in side for i in p}
        return pts

    def core_points(self) -> set[int]:
        pts = set(self.outer) | set(self.inner)
        for fan in self.blocker_pairs:
            pts |= {i for p in fan for i in p}
        return pts


@dataclass
class VertexGadgetInstance:
    vertex: int
    top_edge: Pair
    bottom_edge: Pair
    middle_pairs: list[Pair]
    connectors: dict[Edge, Pair]     # edge of G -> connector pair
    connector_tip: dict[Edge, int]   # edge of G -> index of the inner end (p1/p2)
    vsep_pairs: list[Pair]           # both sides' vertical + horizontal stacks
    span: tuple[int, int]            # frame x extent [L, R]

    def all_points(self) -> set[int]:
        pts = set(self.top_edge) | set(self.bottom_edge)
        for p in self.middle_pairs:
            pts |= set(p)
        for p in self.connectors.values():
            pts |= set(p)
        for p in self.vsep_pairs:
            pts |= set(p)
        return pts

    def frame_pairs(self) -> list[Pair]:
        return [self.top_edge, self.bottom_edge] + self.middle_pairs + sorted(self.connectors.values())


@dataclass
class ReductionInstance:
    graph: PlanarGraphInput
    c: int
    k: int
    ps: PointSet
    m1: PlaneMatching
    m2: PlaneMatching
    annotations: dict[int, PointRole]
    edge_gadgets: dict[Edge, EdgeGadgetInstance]
    vertex_gadgets: dict[int, VertexGadgetInstance]
    warnings: list[str] = field(default_factory=list)

    def bounding_box(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.ps.points]
        ys = [p.y for p in self.ps.points]
        if not xs:
            return (0, 0, 0, 0)
        return (min(xs), min(ys), max(xs), max(ys))


class ReductionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact vertex cover
# ---------------------------------------------------------------------------

def solve_vertex_cover(g: PlanarGraphInput, c: int) -> frozenset[int] | None:
    """A minimum vertex cover if its size is <= c, else None.

    Branch and bound on a maximum-degree vertex: either it joins the
    cover or all its neighbors do. Exact; intended for |V| <= 24.
    """
    if g.n > 24:
        raise ReductionError("exact cover search is budgeted for at most 24 vertices")

    best: list[frozenset[int] | None] = [None]

    def bound(edges: frozenset[Edge]) -> int:
        # greedy matching lower bound
        used: set[int] = set()
        m = 0
        for u, v in sorted(edges):
            if u not in used and v not in used:
                used.update((u, v))
                m += 1
        return m

    def rec(edges: frozenset[Edge], chosen: frozenset[int]) -> None:
        if best[0] is not None and len(chosen) + bound(edges) >= len(best[0]):
            return
        if not edges:
            if best[0] is None or len(chosen) < len(best[0]):
                best[0] = chosen
            return
        deg: dict[int, int] = {}
        for u, v in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        v_star = max(sorted(deg), key=lambda v: deg[v])
        rec(frozenset(e for e in edges if v_star not in e), chosen | {v_star})
        nbrs = frozenset(u for e in edges if v_star in e for u in e) - {v_star}
        rec(frozenset(e for e in edges if not (set(e) & (nbrs | {v_star}))), chosen | nbrs)

    rec(g.edges, frozenset())
    if best[0] is not None and len(best[0]) <= c:
        return best[0]
    return None


def is_vertex_cover(g: PlanarGraphInput, cover: frozenset[int]) -> bool:
    return all(u in cover or v in cover for u, v in g.edges)


# ---------------------------------------------------------------------------
# layout
# ---------------------------------------------------------------------------

def _layout_constants(k: int, max_side_degree: int) -> dict[str, int]:
    sep_w = SEP_X0 + SEP_STEP * (2 * k + 1)
    gadget_half_w = sep_w + 40
    istack_w = 2 * (2 * k + 2) + 40
    frame_ext = gadget_half_w // 2 + istack_w + 400
    slot_w = 2 * (gadget_half_w + frame_ext + istack_w) + 4000
    strip_h = 8 * (max_side_degree + 1) + 16
    band_half = 2 * (k + 1) + strip_h + 8
    row_gap = 2 * (SEP_HEIGHT + band_half + 4000)
    return dict(
        gadget_half_w=gadget_half_w,
        frame_ext=frame_ext,
        istack_w=istack_w,
        slot_w=slot_w,
        strip_h=strip_h,
        band_half=band_half,
        row_gap=row_gap,
    )


def reduce(g: PlanarGraphInput, c: int) -> ReductionInstance:
    """Compile <G, c> into <P, m1, m2, k> with k = 2c + 5|E|."""
    if not (1 <= c <= max(g.n, 1)):
        raise ReductionError(f"cover budget {c} out of range 1..{g.n}")
    pt = None
    warnings: list[str] = []

    isolated = [v for v in range(g.n) if g.degree(v) == 0]
    if isolated:
        warnings.append(f"dropped isolated vertices {isolated}: they never help a cover")
    active = PlanarGraphInput(g.n, g.edges)

    k = 2 * c + 5 * len(g.edges)

    if not g.edges:
        return ReductionInstance(
            graph=g, c=c, k=k, ps=PointSet.of([]),
            m1=PlaneMatching.of([]), m2=PlaneMatching.of([]),
            annotations={}, edge_gadgets={}, vertex_gadgets={}, warnings=warnings,
        )

    rep = build_visibility_rep(active)  # raises NonPlanarError when needed
    tpl = build_template(k, "full")

    deg_above: dict[int, list[Edge]] = {v: [] for v in range(g.n)}
    deg_below: dict[int, list[Edge]] = {v: [] for v in range(g.n)}
    for e, (x, yb, yt) in rep.edge_segments.items():
        u, v = e
        low, high = (u, v) if rep.vertex_segments[u][0] < rep.vertex_segments[v][0] else (v, u)
        deg_above[low].append(e)   # gadget above the low vertex's frame
        deg_below[high].append(e)
    max_side = max(
        [len(deg_above[v]) for v in deg_above] + [len(deg_below[v]) for v in deg_below] + [1]
    )
    C = _layout_constants(k, max_side)

    def X(col: int) -> int:
        return col * C["slot_w"]

    def Y(row: int) -> int:
        return row * C["row_gap"]

    pts: list[tuple[int, int]] = []
    annotations: dict[int, PointRole] = {}
    m1_pairs: list[Pair] = []
    m2_only: list[tuple[Pair, Pair]] = []  # (start pair, final pair) swaps

    def add(p: tuple[int, int], role: str, owner: str) -> int:
        pts.append(p)
        annotations[len(pts) - 1] = PointRole(role, owner)
        return len(pts) - 1

    # --- edge gadgets -----------------------------------------------------
    edge_gadgets: dict[Edge, EdgeGadgetInstance] = {}
    for e in sorted(rep.edge_segments):
        x_col, row_b, row_t = rep.edge_segments[e]
        u, v = e
        low, high = (u, v) if rep.vertex_segments[u][0] < rep.vertex_segments[v][0] else (v, u)
        cx = X(x_col)
        cy = (Y(row_b) + Y(row_t)) // 2
        if (row_t - row_b) % 2 == 0:
            cy += C["row_gap"] // 2  # keep the center out of intermediate bands
        owner = f"edge {e[0]}-{e[1]}"
        gi = {}
        outer_idx = tuple(
            add((cx + px, cy + py), "flip-structure", owner) for px, py in OUTER
        )
        inner_idx = tuple(
            add((cx + px, cy + py), "flip-structure", owner) for px, py in INNER
        )
        for i in range(4):
            m1_pairs.append(tuple(sorted((outer_idx[i], inner_idx[i]))))
            m2_only.append(
                (
                    tuple(sorted((outer_idx[i], inner_idx[i]))),
                    tuple(sorted((outer_idx[i], inner_idx[(i - 1) % 4]))),
                )
            )
        fans = []
        local_to_global = {}
        for li, p in enumerate(tpl.points):
            pass
        for fan_pairs in tpl.blocker_pairs:
            fan = []
            for (a, b) in fan_pairs:
                ia = add((cx + tpl.points[a][0], cy + tpl.points[a][1]), "blocker", owner)
                ib = add((cx + tpl.points[b][0], cy + tpl.points[b][1]), "blocker", owner)
                fan.append(tuple(sorted((ia, ib))))
                m1_pairs.append(fan[-1])
            fans.append(fan)
        seps = []
        for side_pairs in tpl.separator_pairs:
            side = []
            for (a, b) in side_pairs:
                ia = add((cx + tpl.points[a][0], cy + tpl.points[a][1]), "separator", owner)
                ib = add((cx + tpl.points[b][0], cy + tpl.points[b][1]), "separator", owner)
                side.append(tuple(sorted((ia, ib))))
                m1_pairs.append(side[-1])
            seps.append(side)
        edge_gadgets[e] = EdgeGadgetInstance(
            edge=e, center=(cx, cy), outer=outer_idx, inner=inner_idx,
            blocker_pairs=fans, separator_pairs=seps,
            below_vertex=low, above_vertex=high,
        )

    # --- vertex gadgets ----------------------------------------------------
    vertex_gadgets: dict[int, VertexGadgetInstance] = {}
    for v in sorted(rep.vertex_segments):
        if active.degree(v) == 0:
            continue
        row = rep.vertex_segments[v][0]
        yv = Y(row)
        owner = f"vertex {v}"
        cols = [rep.edge_segments[e][0] for e in deg_above[v] + deg_below[v]]
        L = X(min(cols)) - C["gadget_half_w"] - C["frame_ext"]
        R = X(max(cols)) + C["gadget_half_w"] + C["frame_ext"]
        band = C["band_half"]
        yt = yv + band
        yb = yv - band
        top = tuple(sorted((add((L, yt), "frame", owner), add((R, yt), "frame", owner))))
        bottom = tuple(sorted((add((L, yb), "frame", owner), add((R, yb), "frame", owner))))
        m1_pairs += [top, bottom]
        middles = []
        for j in range(2 * k + 2):
            y = yv + 2 * (k + 1) - 2 * j - 1
            mi = tuple(sorted((add((L + 2, y), "frame", owner), add((R - 2, y), "frame", owner))))
            middles.append(mi)
            m1_pairs.append(mi)
        connectors: dict[Edge, Pair] = {}
        tips: dict[Edge, int] = {}
        # gadgets above this frame use the top strip; below use the bottom strip
        for slot, e in enumerate(sorted(deg_above[v], key=lambda e: rep.edge_segments[e][0])):
            gx = edge_gadgets[e].center[0]
            y = yt - 4 - 8 * slot
            p1 = add((gx, y), "connector", owner)
            p1p = add((gx + OUTER[1][0], y), "connector", owner)
            connectors[e] = tuple(sorted((p1, p1p)))
            tips[e] = p1
            m1_pairs.append(connectors[e])
        for slot, e in enumerate(sorted(deg_below[v], key=lambda e: rep.edge_segments[e][0])):
            gx = edge_gadgets[e].center[0]
            y = yb + 4 + 8 * slot
            p2 = add((gx, y), "connector", owner)
            p2p = add((gx + OUTER[3][0], y), "connector", owner)
            connectors[e] = tuple(sorted((p2, p2p)))
            tips[e] = p2
            m1_pairs.append(connectors[e])
        # vertex separators, both sides
        vsep: list[Pair] = []
        up_gadgets = [edge_gadgets[e] for e in deg_above[v]]
        dn_gadgets = [edge_gadgets[e] for e in deg_below[v]]
        top_reach = (
            min(gi.center[1] - SEP_HEIGHT for gi in up_gadgets)
            if up_gadgets
            else yt + 8000
        )
        bot_reach = (
            max(gi.center[1] + SEP_HEIGHT for gi in dn_gadgets)
            if dn_gadgets
            else yb - 8000
        )
        v_top = (yt + top_reach) // 2 - 2
        v_bot = (yb + bot_reach) // 2 + 2
        for side, x0, sgn in (("l", L - 2, -1), ("r", R + 2, 1)):
            xs = [x0 + sgn * 2 * j for j in range(2 * k + 2)]
            for x in xs:
                a = add((x, v_top), "vertex-separator", owner)
                b = add((x, v_bot), "vertex-separator", owner)
                vsep.append(tuple(sorted((a, b))))
                m1_pairs.append(vsep[-1])
            x_out = min(xs) - 40 if sgn < 0 else max(xs) + 40
            x_in_top = (
                min(gi.center[0] for gi in up_gadgets) - C["gadget_half_w"] - 200
                if up_gadgets
                else x0 + sgn * 3000
            )
            x_in_bot = (
                min(gi.center[0] for gi in dn_gadgets) - C["gadget_half_w"] - 200
                if dn_gadgets
                else x0 + sgn * 3000
            )
            for j in range(2 * k + 2):
                ya = v_top + 2 + 2 * j
                a = add((min(x_out, x_in_top), ya), "vertex-separator", owner)
                b = add((max(x_out, x_in_top), ya), "vertex-separator", owner)
                vsep.append(tuple(sorted((a, b))))
                m1_pairs.append(vsep[-1])
                yb2 = v_bot - 2 - 2 * j
                a = add((min(x_out, x_in_bot), yb2), "vertex-separator", owner)
                b = add((max(x_out, x_in_bot), yb2), "vertex-separator", owner)
                vsep.append(tuple(sorted((a, b))))
                m1_pairs.append(vsep[-1])
        vertex_gadgets[v] = VertexGadgetInstance(
            vertex=v, top_edge=top, bottom_edge=bottom, middle_pairs=middles,
            connectors=connectors, connector_tip=tips, vsep_pairs=vsep, span=(L, R),
        )

    ps = PointSet.of(pts)
    m1 = PlaneMatching.of(m1_pairs)
    m2_pairs = set(m1_pairs)
    for start_pair, final_pair in m2_only:
        m2_pairs.discard(start_pair)
        m2_pairs.add(final_pair)
    m2 = PlaneMatching.of(m2_pairs)

    issues = validate(ps, m1)
    if issues:
        raise ReductionError(f"assembled m1 is invalid: {issues[:4]}")
    issues = validate(ps, m2)
    if issues:
        raise ReductionError(f"assembled m2 is invalid: {issues[:4]}")

    return ReductionInstance(
        graph=g, c=c, k=k, ps=ps, m1=m1, m2=m2, annotations=annotations,
        edge_gadgets=edge_gadgets, vertex_gadgets=vertex_gadgets, warnings=warnings,
    )


# ---------------------------------------------------------------------------
# witness generation
# ---------------------------------------------------------------------------

def activate(inst: ReductionInstance, v: int, m: PlaneMatching) -> FlipMove:
    """The flip exchanging a frame's top and bottom edges for its two
    vertical end edges."""
    vg = inst.vertex_gadgets[v]
    if vg.top_edge not in m.pairs or vg.bottom_edge not in m.pairs:
        raise ReductionError(f"vertex {v} frame is not deactivated")
    tl, tr = sorted(vg.top_edge, key=lambda i: inst.ps[i].x)
    bl, br = sorted(vg.bottom_edge, key=lambda i: inst.ps[i].x)
    return FlipMove(
        removed=(vg.top_edge, vg.bottom_edge),
        added=(tuple(sorted((tl, bl))), tuple(sorted((tr, br)))),
    )


def deactivate(inst: ReductionInstance, v: int, m: PlaneMatching) -> FlipMove:
    vg = inst.vertex_gadgets[v]
    tl, tr = sorted(vg.top_edge, key=lambda i: inst.ps[i].x)
    bl, br = sorted(vg.bottom_edge, key=lambda i: inst.ps[i].x)
    left = tuple(sorted((tl, bl)))
    right = tuple(sorted((tr, br)))
    if left not in m.pairs or right not in m.pairs:
        raise ReductionError(f"vertex {v} frame is not activated")
    return FlipMove(removed=(left, right), added=(vg.top_edge, vg.bottom_edge))


def five_flip_sequence(
    inst: ReductionInstance, e: Edge, side: str
) -> list[FlipMove]:
    """The five moves transforming gadget e from start to final
    configuration through the connector on the given side ("below" uses
    the lower frame's connector, "above" the upper frame's)."""
    gi = inst.edge_gadgets[e]
    v = gi.below_vertex if side == "below" else gi.above_vertex
    vg = inst.vertex_gadgets[v]
    conn = vg.connectors[e]
    tip = vg.connector_tip[e]
    other = conn[0] if conn[1] == tip else conn[1]
    o, n = gi.outer, gi.inner

    def mk(removed, added):
        return FlipMove(removed=tuple(removed), added=tuple(added))

    def pr(a, b):
        return tuple(sorted((a, b)))

    if side == "below":
        order = [1, 2, 3, 0]
    else:
        order = [3, 0, 1, 2]
    moves = []
    i0 = order[0]
    moves.append(mk([pr(o[i0], n[i0]), pr(tip, other)], [pr(tip, n[i0]), pr(other, o[i0])]))
    for prev, i in zip(order, order[1:]):
        moves.append(
            mk([pr(o[i], n[i]), pr(tip, n[prev])], [pr(o[i], n[prev]), pr(tip, n[i])])
        )
    last = order[-1]
    moves.append(
        mk([pr(tip, n[last]), pr(other, o[i0])], [pr(o[i0], n[last]), pr(tip, other)])
    )
    return moves


def witness_sequence(inst: ReductionInstance, cover: frozenset[int]) -> FlipSequence:
    """Exactly 2|cover| + 5|E| moves transforming m1 into m2."""
    if not is_vertex_cover(inst.graph, cover):
        raise ReductionError("the given set is not a vertex cover")
    moves: list[FlipMove] = []
    state = inst.m1
    for v in sorted(cover):
        mv = activate(inst, v, state)
        moves.append(mv)
        state = _apply(state, mv)
    for e in sorted(inst.edge_gadgets):
        gi = inst.edge_gadgets[e]
        if gi.below_vertex in cover:
            side = "below"
        elif gi.above_vertex in cover:
            side = "above"
        else:  # unreachable given a valid cover
            raise ReductionError(f"edge {e} is not covered")
        for mv in five_flip_sequence(inst, e, side):
            moves.append(mv)
            state = _apply(state, mv)
    for v in sorted(cover):
        mv = deactivate(inst, v, state)
        moves.append(mv)
        state = _apply(state, mv)
    return FlipSequence(inst.m1, tuple(moves))


def _apply(m: PlaneMatching, mv: FlipMove) -> PlaneMatching:
    return PlaneMatching(m.pairs - set(mv.removed) | set(mv.added))


# ---------------------------------------------------------------------------
# instance-wide audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditRecord:
    check: str
    gadget: str
    expected: str
    observed: str
    passed: bool


@dataclass
class AuditReport:
    records: list[AuditRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, check: str, gadget: str, expected, observed) -> None:
        self.records.append(
            AuditRecord(check, gadget, str(expected), str(observed), str(expected) == str(observed))
        )

    def add_bool(self, check: str, gadget: str, ok: bool, detail: str = "") -> None:
        self.records.append(AuditRecord(check, gadget, "ok", detail or ("ok" if ok else "fail"), ok))

    def failures(self) -> list[AuditRecord]:
        return [r for r in self.records if not r.passed]


def audit(inst: ReductionInstance) -> AuditReport:
    """Instance-wide geometric audit (checks a through g)."""
    rep = AuditReport()
    ps = inst.ps
    m1_segs = inst.m1.segments(ps)

    rep.add_bool("validity:m1", "instance", validate(ps, inst.m1) == [])
    rep.add_bool("validity:m2", "instance", validate(ps, inst.m2) == [])
    rep.add(
        "k-formula", "instance", inst.k, 2 * inst.c + 5 * len(inst.graph.edges)
    )
    rep.add_bool(
        "annotation-totality", "instance", set(inst.annotations) == set(range(len(ps)))
    )

    import numpy as np

    seg_arr = _segments_array(ps, inst.m1.sorted_pairs)

    for e, gi in sorted(inst.edge_gadgets.items()):
        gname = f"edge {e[0]}-{e[1]}"
        fan_pairs = [p for fan in gi.blocker_pairs for p in fan]
        fan_arr = _segments_array(ps, fan_pairs)

        # (a) each outer-outer segment crosses exactly seven blocker edges
        counts = []
        for i in range(4):
            seg = Segment(ps[gi.outer[i]], ps[gi.outer[(i + 1) % 4]])
            counts.append(_np_crossings(seg, fan_arr))
        rep.add(f"a:outer-ring-7", gname, [7, 7, 7, 7], counts)

        # (b) separator endpoint sightlines cross >= 7 blocker edges
        worst = 10**9
        for side in gi.separator_pairs:
            for col in side:
                for idx in col:
                    for n_idx in gi.inner:
                        seg = Segment(ps[idx], ps[n_idx])
                        worst = min(worst, _np_crossings(seg, fan_arr))
        rep.add_bool("b:separator-shadow>=7", gname, worst >= 7, f"min={worst}")

        # (c) separator edges see only separator edges (outermost exempt)
        ok, detail = _separator_isolation(inst, gi)
        rep.add_bool("c:separator-isolation", gname, ok, detail)

    # (d) no vertex-gadget edge sees an edge of any gadget's blockers or
    # start/final structure
    for v, vg in sorted(inst.vertex_gadgets.items()):
        ok, detail = _vertex_isolation(inst, vg)
        rep.add_bool("d:vertex-gadget-isolation", f"vertex {v}", ok, detail)

    # (e) 2k+2 barrier from gadget core points to points beyond the
    # gadget and its adjacent frames
    for e, gi in sorted(inst.edge_gadgets.items()):
        ok, detail = _barrier_check(inst, gi, seg_arr)
        rep.add_bool("e:2k+2-barrier", f"edge {e[0]}-{e[1]}", ok, detail)

    # (f) frame-to-frame re-pairing crosses 2k+2 vertex-separator edges
    ok, detail = _frame_pair_check(inst)
    rep.add_bool("f:frame-pair-barrier", "instance", ok, detail)

    # (g) connector sightlines and the clockwise order around each tip
    for v, vg in sorted(inst.vertex_gadgets.items()):
        for e in sorted(vg.connectors):
            ok, detail = _connector_check(inst, v, e)
            rep.add_bool("g:connector", f"vertex {v} / edge {e[0]}-{e[1]}", ok, detail)

    return rep


def _segments_array(ps: PointSet, pairs) -> "np.ndarray":
    import numpy as np

    arr = np.empty((len(pairs), 4), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        arr[i] = (ps[a].x, ps[a].y, ps[b].x, ps[b].y)
    return arr


def _np_crossings(seg: Segment, arr) -> int:
    """Count proper + touching crossings of seg against the array of
    segments, excluding shared-endpoint incidences, matching
    segments_cross semantics for the generic (non-collinear-overlap)
    case and falling back to the exact predicate for degeneracies."""
    import numpy as np

    if len(arr) == 0:
        return 0
    px, py, qx, qy = seg.a.x, seg.a.y, seg.b.x, seg.b.y
    ax, ay, bx, by = arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]
    d1 = np.sign((qx - px) * (ay - py) - (qy - py) * (ax - px))
    d2 = np.sign((qx - px) * (by - py) - (qy - py) * (bx - px))
    d3 = np.sign((bx - ax) * (py - ay) - (by - ay) * (px - ax))
    d4 = np.sign((bx - ax) * (qy - ay) - (by - ay) * (qx - ax))
    shared = (
        ((ax == px) & (ay == py))
        | ((ax == qx) & (ay == qy))
        | ((bx == px) & (by == py))
        | ((bx == qx) & (by == qy))
    )
    proper = (d1 * d2 < 0) & (d3 * d4 < 0) & ~shared
    degenerate = ((d1 == 0) | (d2 == 0) | (d3 == 0) | (d4 == 0)) & ~shared
    n = int(np.count_nonzero(proper))
    for i in np.nonzero(degenerate)[0]:
        other = Segment(Point(int(arr[i, 0]), int(arr[i, 1])), Point(int(arr[i, 2]), int(arr[i, 3])))
        if segments_cross(seg, other):
            n += 1
    return n


def _separator_isolation(inst: ReductionInstance, gi: EdgeGadgetInstance):
    ps = inst.ps
    m1_segs = inst.m1.segments(ps)
    sep_points: set[int] = set()
    for egi in inst.edge_gadgets.values():
        for side in egi.separator_pairs:
            sep_points |= {i for col in side for i in col}
    for side_idx, side in enumerate(gi.separator_pairs):
        inner_cols = side[:-1] if len(side) > 1 else []
        for col in inner_cols:
            seg1 = ps.segment(col)
            for pair in inst.m1.sorted_pairs:
                if set(pair) <= sep_points:
                    continue
                if pair == col:
                    continue
                if edge_sees_edge(seg1, ps.segment(pair), m1_segs):
                    return False, f"column {col} sees non-separator edge {pair}"
    return True, ""


def _vertex_isolation(inst: ReductionInstance, vg: VertexGadgetInstance):
    ps = inst.ps
    m1_segs = inst.m1.segments(ps)
    vg_pairs = vg.frame_pairs() + vg.vsep_pairs
    for e, gi in inst.edge_gadgets.items():
        targets = [p for fan in gi.blocker_pairs for p in fan]
        fs = gi.structure()
        targets += fs.start_pairs() + fs.final_pairs()
        for vp in vg_pairs:
            sv = ps.segment(vp)
            for tp in targets:
                if edge_sees_edge(sv, ps.segment(tp), m1_segs):
                    return False, f"frame edge {vp} sees gadget edge {tp} of {e}"
    return True, ""


def _barrier_check(inst: ReductionInstance, gi: EdgeGadgetInstance, seg_arr):
    ps = inst.ps
    inside = gi.all_points()
    for v in (gi.below_vertex, gi.above_vertex):
        inside |= inst.vertex_gadgets[v].all_points()
    outside = sorted(set(range(len(ps))) - inside)
    if not outside:
        return True, "no outside points"
    need = 2 * inst.k + 2
    worst = 10**9
    for p_idx in sorted(gi.core_points()):
        for q_idx in outside:
            seg = Segment(ps[p_idx], ps[q_idx])
            n = _np_crossings(seg, seg_arr)
            worst = min(worst, n)
            if worst < need:
                return False, f"{p_idx}->{q_idx} crosses only {n} < {need}"
    return True, f"min={worst} >= {need}"


def _frame_pair_check(inst: ReductionInstance):
    ps = inst.ps
    vsep_pairs = [p for vg in inst.vertex_gadgets.values() for p in vg.vsep_pairs]
    if len(inst.vertex_gadgets) < 2:
        return True, "single frame"
    arr = _segments_array(ps, vsep_pairs)
    need = 2 * inst.k + 2
    for v1, v2 in itertools.combinations(sorted(inst.vertex_gadgets), 2):
        g1, g2 = inst.vertex_gadgets[v1], inst.vertex_gadgets[v2]
        for e1 in (g1.top_edge, g1.bottom_edge):
            for e2 in (g2.top_edge, g2.bottom_edge):
                u1 = min(e1, key=lambda i: ps[i].x)
                u2 = min(e2, key=lambda i: ps[i].x)
                seg = Segment(ps[u1], ps[u2])
                n = _np_crossings(seg, arr)
                if n < need:
                    return False, f"frames {v1},{v2}: {n} < {need}"
    return True, ""


def _connector_check(inst: ReductionInstance, v: int, e: Edge):
    ps = inst.ps
    vg = inst.vertex_gadgets[v]
    gi = inst.edge_gadgets[e]
    conn = vg.connectors[e]
    tip = vg.connector_tip[e]
    other = conn[0] if conn[1] == tip else conn[1]
    side = "below" if gi.below_vertex == v else "above"
    arm_i = 1 if side == "below" else 3
    arm = tuple(sorted((gi.outer[arm_i], gi.inner[arm_i])))

    act = _apply(inst.m1, activate(inst, v, inst.m1))
    segs_act = act.segments(ps)
    if not edge_sees_edge(ps.segment(conn), ps.segment(arm), segs_act):
        return False, "connector does not see its arm once activated"

    # clockwise order of the tip's sightlines to the four inner points
    order = [1, 2, 3, 0] if side == "below" else [3, 0, 1, 2]
    tips = [ps[gi.inner[i]] for i in order]
    tp = ps[tip]
    for a, b in zip(tips, tips[1:]):
        cr = (a.x - tp.x) * (b.y - tp.y) - (a.y - tp.y) * (b.x - tp.x)
        if side == "below" and cr >= 0:
            return False, "inner points not in clockwise order around the tip"
        if side == "above" and cr >= 0:
            return False, "inner points not in clockwise order around the tip"

    # the tip sees all four inner points in the final configuration
    m2_act = _apply(inst.m2, activate(inst, v, inst.m2))
    segs_final = m2_act.segments(ps)
    for i in range(4):
        if not point_sees_point(tp, ps[gi.inner[i]], segs_final):
            return False, f"tip cannot see inner point {i} in the final configuration"
    return True, ""
