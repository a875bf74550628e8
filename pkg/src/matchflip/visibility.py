"""Planarity testing and weak-visibility representations on an integer grid.

Vertices become horizontal segments, edges vertical segments whose
endpoints (attachments) lie on their endpoints' vertex segments, no two
segments intersecting except at attachments. The representation is
"weak": two vertex segments may see each other without being adjacent,
which is all the downstream construction needs.

The builder sweeps an st-orientation of a planarity-preserving
augmentation level by level, keeping the active edge "wires" in
left-to-right order; any output is gated by an independent invariant
checker, and the builder retries other (s, t) choices if a sweep yields
an inconsistent wire order for the embedding at hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import networkx as nx

Edge = tuple[int, int]


class NonPlanarError(ValueError):
    def __init__(self, certificate_edges: frozenset[Edge]):
        super().__init__(f"graph is not planar (Kuratowski subgraph with {len(certificate_edges)} edges)")
        self.certificate_edges = certificate_edges


class LayoutError(RuntimeError):
    """No attempted layout passed the invariant checker."""


@dataclass(frozen=True)
class PlanarGraphInput:
    n: int
    edges: frozenset[Edge]

    @classmethod
    def of(cls, n: int, edges: Iterable[Iterable[int]]) -> "PlanarGraphInput":
        norm = set()
        for e in edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            norm.add((min(u, v), max(u, v)))
        return cls(n, frozenset(norm))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


@dataclass(frozen=True)
class PlanarityResult:
    planar: bool
    embedding: dict[int, tuple[int, ...]] | None = None  # rotation system
    certificate_edges: frozenset[Edge] | None = None


def planarity_test(g: PlanarGraphInput) -> PlanarityResult:
    """Combinatorial embedding (rotation system) if planar, else a
    Kuratowski-style certificate."""
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    ok, embedding = nx.check_planarity(G, counterexample=True)
    if ok:
        rotation = {
            v: tuple(embedding.neighbors_cw_order(v)) if embedding.degree(v) else ()
            for v in range(g.n)
        }
        return PlanarityResult(True, embedding=rotation)
    cert = frozenset(
        (min(u, v), max(u, v)) for u, v in embedding.edges()
    )
    return PlanarityResult(False, certificate_edges=cert)


@dataclass(frozen=True)
class VisibilityRep:
    # vertex -> (y, x_left, x_right); edge -> (x, y_bottom, y_top)
    vertex_segments: dict[int, tuple[int, int, int]]
    edge_segments: dict[Edge, tuple[int, int, int]]

    def width(self) -> int:
        xs = [x for _, l, r in self.vertex_segments.values() for x in (l, r)]
        return (max(xs) - min(xs) + 1) if xs else 0

    def height(self) -> int:
        ys = [y for y, _, _ in self.vertex_segments.values()]
        return (max(ys) - min(ys) + 1) if ys else 0


def check_visibility_rep(g: PlanarGraphInput, r: VisibilityRep) -> list[str]:
    """Independent invariant scan; empty list means valid.

    Checks integer coordinates, attachment containment, one segment per
    vertex and edge, and pairwise noncrossing (vertical edge segments may
    touch horizontal vertex segments only at their own attachments).
    """
    issues: list[str] = []
    placed = set(r.vertex_segments)
    needed = {v for v in range(g.n) if g.degree(v) > 0}
    if not needed <= placed:
        issues.append(f"missing vertex segments: {sorted(needed - placed)}")
    for v, (y, xl, xr) in r.vertex_segments.items():
        if xl > xr:
            issues.append(f"vertex {v} segment reversed")
    if set(r.edge_segments) != set(g.edges):
        issues.append("edge segment set differs from graph edges")
        return issues
    for (u, v), (x, yb, yt) in r.edge_segments.items():
        if yb >= yt:
            issues.append(f"edge ({u},{v}) segment degenerate")
            continue
        ends = {}
        for w in (u, v):
            if w not in r.vertex_segments:
                issues.append(f"edge ({u},{v}) endpoint {w} has no segment")
                continue
            wy, wl, wr = r.vertex_segments[w]
            ends[w] = wy
            if not (wl <= x <= wr):
                issues.append(f"edge ({u},{v}) attachment x={x} off vertex {w} segment")
        if len(ends) == 2 and {min(ends.values()), max(ends.values())} != {yb, yt}:
            issues.append(f"edge ({u},{v}) segment does not span its endpoints' rows")
    # vertex vs vertex: same row overlap
    rows: dict[int, list[tuple[int, int, int]]] = {}
    for v, (y, xl, xr) in r.vertex_segments.items():
        rows.setdefault(y, []).append((xl, xr, v))
    for y, spans in rows.items():
        spans.sort()
        for a, b in zip(spans, spans[1:]):
            if a[1] >= b[0]:
                issues.append(f"vertex segments {a[2]} and {b[2]} overlap on row {y}")
    # edge vs edge: same column overlap
    cols: dict[int, list[tuple[int, int, Edge]]] = {}
    for e, (x, yb, yt) in r.edge_segments.items():
        cols.setdefault(x, []).append((yb, yt, e))
    for x, spans in cols.items():
        spans.sort()
        for a, b in zip(spans, spans[1:]):
            if a[1] > b[0]:
                issues.append(f"edge segments {a[2]} and {b[2]} overlap on column {x}")
    # edge vs vertex: a vertical may meet a horizontal only at its own attachment
    for (u, v), (x, yb, yt) in r.edge_segments.items():
        for w, (wy, wl, wr) in r.vertex_segments.items():
            if yb <= wy <= yt and wl <= x <= wr:
                if w not in (u, v) or wy not in (yb, yt):
                    issues.append(f"edge ({u},{v}) column crosses vertex {w} segment")
    return issues


def _st_numberings(G: nx.Graph, s: int, t: int, limit: int = 64) -> list[list[int]]:
    """Up to `limit` bipolar orders v_1..v_n with v_1 = s, v_n = t where
    every inner vertex has both an earlier and a later neighbor.
    Backtracking enumeration; feasibility-pruned, fine at gadget-compiler
    graph sizes."""
    n = G.number_of_nodes()
    if n == 2:
        return [[s, t]]
    out: list[list[int]] = []
    order = [s]
    placed = {s}

    def feasible() -> bool:
        rest = set(G.nodes) - placed
        if not rest:
            return True
        sub = G.subgraph(rest)
        return all(nx.has_path(sub, v, t) for v in sub.nodes)

    def rec() -> None:
        if len(out) >= limit:
            return
        if len(order) == n:
            if order[-1] == t:
                out.append(list(order))
            return
        last = len(order) == n - 1
        for v in sorted(set(G.nodes) - placed):
            if (v == t) != last:
                continue
            if not any(w in placed for w in G[v]):
                continue
            order.append(v)
            placed.add(v)
            if feasible():
                rec()
            order.pop()
            placed.remove(v)
            if len(out) >= limit:
                return

    rec()
    return out


def _augment_biconnected(G: nx.Graph) -> nx.Graph:
    """Add planarity-preserving edges until the graph is biconnected.

    Each added edge must reduce the number of biconnected blocks, which
    guarantees progress; for a planar input some such edge always
    preserves planarity (merge two blocks around an articulation point
    inside a common face)."""
    H = G.copy()
    if H.number_of_nodes() <= 2:
        return H
    while not nx.is_biconnected(H):
        blocks = len(list(nx.biconnected_components(H)))
        added = False
        for u in sorted(H.nodes):
            for v in sorted(H.nodes):
                if u >= v or H.has_edge(u, v):
                    continue
                H.add_edge(u, v)
                if nx.check_planarity(H)[0] and len(list(nx.biconnected_components(H))) < blocks:
                    added = True
                    break
                H.remove_edge(u, v)
            if added:
                break
        if not added:
            raise LayoutError("could not biconnect while preserving planarity")
    return H


def _sweep_layout(
    H: nx.Graph,
    order: list[int],
    budget: int = 50_000,
) -> tuple[dict[int, tuple[int, int, int]], dict[Edge, tuple[int, int, int]]] | None:
    """Level sweep: vertex v_i on row i; active edge wires kept in
    left-to-right order.

    Each vertex consumes its incoming wires (they must be contiguous in
    the current wire list) and emits its outgoing edges in their place.
    The left-to-right emission order is found by backtracking over
    permutations, which keeps the builder independent of how the
    underlying planarity test happens to embed the graph; the search is
    tiny at gadget-compiler graph sizes and None is returned if the
    budget runs out for this vertex order.
    """
    import itertools as _it

    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    steps = 0
    serial = 0

    # A wire key is (fraction, serial): co-active wires always differ in
    # the fraction; a wire replacing its consumed predecessor at the same
    # fraction gets a fresh serial, so every edge lands in its own
    # integer column after densification.
    Key = tuple[Fraction, int]
    vxspan: dict[int, tuple[Key, Key]] = {}
    exkey: dict[Edge, Key] = {}

    def rec(idx: int, wires: list[tuple[Key, Edge]]) -> bool:
        nonlocal steps, serial
        steps += 1
        if steps > budget:
            return False
        if idx == n:
            return not wires
        v = order[idx]
        ins = [i for i, (_, e) in enumerate(wires) if e[1] == v]
        if ins and ins != list(range(ins[0], ins[0] + len(ins))):
            return False
        outs_set = sorted(w for w in H[v] if pos[w] > pos[v])
        at = ins[0] if ins else len(wires)
        in_keys = [wires[i][0] for i in ins]
        lo = wires[at - 1][0][0] if at > 0 else None
        hi = wires[at + len(ins)][0][0] if at + len(ins) < len(wires) else None

        for outs in _it.permutations(outs_set) if outs_set else ((),):
            new: list[tuple[Key, Edge]] = []
            if outs:
                left = in_keys[0][0] if in_keys else None
                right = in_keys[-1][0] if in_keys else None
                slots = _slot_positions(len(outs), left, right, lo, hi)
                new = []
                for x, w in zip(slots, outs):
                    serial += 1
                    new.append(((x, serial), (v, w)))
            span = in_keys + [k for k, _ in new]
            if not span:
                serial += 1
                span = [(_slot_positions(1, None, None, lo, hi)[0], serial)]
            nxt = wires[:at] + new + wires[at + len(ins):]
            vxspan[v] = (min(span), max(span))
            if rec(idx + 1, nxt):
                for i in ins:
                    exkey[_key(wires[i][1])] = wires[i][0]
                return True
            if steps > budget:
                return False
        vxspan.pop(v, None)
        return False

    if not rec(0, []):
        return None

    all_keys = sorted({k for sp in vxspan.values() for k in sp} | set(exkey.values()))
    xi = {k: i for i, k in enumerate(all_keys)}
    vsegs = {v: (pos[v], xi[sp[0]], xi[sp[1]]) for v, sp in vxspan.items()}
    esegs = {}
    for e, k in exkey.items():
        u, w = e
        esegs[e] = (xi[k], min(pos[u], pos[w]), max(pos[u], pos[w]))
    return vsegs, esegs


def _slot_positions(k, left, right, lo, hi):
    """k strictly increasing Fractions spanning [left, right] when the
    consumed span exists, else fresh positions in the gap (lo, hi)."""
    if left is None:
        if lo is None and hi is None:
            base = Fraction(0)
        elif lo is None:
            base = hi - 1
        elif hi is None:
            base = lo + 1
        else:
            base = lo + Fraction(hi - lo, 2)
        if k == 1:
            return [base]
        if hi is None:
            return [base + Fraction(i, 1) for i in range(k)]
        step = Fraction(hi - base, k + 1)
        return [base + step * i for i in range(k)]
    if k == 1:
        return [left]
    if left == right:
        ceiling = hi if hi is not None else left + 1
        step = Fraction(ceiling - left, k + 1)
        return [left + step * i for i in range(k)]
    step = Fraction(right - left, k - 1)
    return [left + step * i for i in range(k)]


def _key(e: Edge) -> Edge:
    return (min(e), max(e))


def build_visibility_rep(g: PlanarGraphInput) -> VisibilityRep:
    """A weak-visibility representation of g on an integer grid.

    Components are laid out side by side with a one-column gap.
    Isolated vertices get a length-1 segment on their own row. Raises
    NonPlanarError for nonplanar input, LayoutError if no sweep passes
    the checker (not observed for planar inputs; the retry loop covers
    every (s, t) seed pair).
    """
    pt = planarity_test(g)
    if not pt.planar:
        raise NonPlanarError(pt.certificate_edges)

    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)

    vsegs: dict[int, tuple[int, int, int]] = {}
    esegs: dict[Edge, tuple[int, int, int]] = {}
    x_off = 0
    for comp in sorted(nx.connected_components(G), key=min):
        sub = G.subgraph(comp).copy()
        if sub.number_of_nodes() == 1:
            v = next(iter(comp))
            vsegs[v] = (0, x_off, x_off + 1)
            x_off += 3
            continue
        placed = _layout_component(sub)
        if placed is None:
            raise LayoutError(f"no sweep succeeded for component {sorted(comp)}")
        cvs, ces = placed
        shift = x_off - min(x for _, x, _ in cvs.values())
        for v, (y, xl, xr) in cvs.items():
            vsegs[v] = (y, xl + shift, xr + shift)
        for e, (x, yb, yt) in ces.items():
            esegs[e] = (x + shift, yb, yt)
        x_off = max(xr for _, _, xr in vsegs.values()) + 2

    rep = VisibilityRep(vsegs, esegs)
    issues = check_visibility_rep(g, rep)
    if issues:
        raise LayoutError(f"layout failed checker: {issues[:4]}")
    return rep


def _layout_component(sub: nx.Graph):
    H = _augment_biconnected(sub)
    seeds = sorted(H.edges()) or [tuple(sorted(H.nodes))[:2]]
    for s, t in list(seeds) + [(b, a) for a, b in seeds]:
        for order in _st_numberings(H, s, t):
            out = _sweep_layout(H, order)
            if out is None:
                continue
            vsegs, esegs = out
            # drop augmentation-only edge segments
            esegs = {e: seg for e, seg in esegs.items() if sub.has_edge(*e)}
            pruned = _prune_vertex_spans(sub, vsegs, esegs)
            trial = VisibilityRep(pruned, esegs)
            if _component_check(sub, trial):
                return pruned, esegs
    return None


def _prune_vertex_spans(sub, vsegs, esegs):
    """Shrink each vertex segment to cover exactly its surviving
    attachments (plus a unit for isolated-in-component oddities)."""
    spans: dict[int, list[int]] = {v: [] for v in vsegs}
    for (u, w), (x, _, _) in esegs.items():
        spans[u].append(x)
        spans[w].append(x)
    out = {}
    for v, (y, xl, xr) in vsegs.items():
        if spans.get(v):
            out[v] = (y, min(spans[v]), max(spans[v]) + (1 if min(spans[v]) == max(spans[v]) else 0))
        else:
            out[v] = (y, xl, max(xl + 1, xr))
    return out


def _component_check(sub: nx.Graph, rep: VisibilityRep) -> bool:
    g = PlanarGraphInput(
        max(sub.nodes) + 1, frozenset((min(u, v), max(u, v)) for u, v in sub.edges())
    )
    # restrict the checker to this component's vertices
    issues = [
        i
        for i in check_visibility_rep(g, rep)
        if "missing vertex segments" not in i or any(str(v) in i for v in sub.nodes)
    ]
    return not issues


def stretch(
    r: VisibilityRep,
    row_insertions: Iterable[tuple[int, int]] = (),
    col_insertions: Iterable[tuple[int, int]] = (),
) -> VisibilityRep:
    """Insert grid rows/columns: every coordinate at or beyond an
    insertion position shifts by its count. Positions refer to the
    original grid, so the operation is order-insensitive by
    construction. Counts must be nonnegative."""
    rows = sorted(row_insertions)
    cols = sorted(col_insertions)
    for _, c in list(rows) + list(cols):
        if c < 0:
            raise ValueError("insertion count must be nonnegative")

    def shift(val: int, table: list[tuple[int, int]]) -> int:
        return val + sum(c for pos, c in table if pos <= val)

    vsegs = {
        v: (shift(y, rows), shift(xl, cols), shift(xr, cols))
        for v, (y, xl, xr) in r.vertex_segments.items()
    }
    esegs = {
        e: (shift(x, cols), shift(yb, rows), shift(yt, rows))
        for e, (x, yb, yt) in r.edge_segments.items()
    }
    return VisibilityRep(vsegs, esegs)
