"""Edge and vertex gadget templates with construction-time audits.

All coordinates live on a fixed integer template (gadget-local frame,
scale constant SCALE); every geometric predicate the hardness argument
relies on is re-verified when a gadget is built, so the tables are
proof-carrying rather than trusted. Positions are chosen so that the
connector corridors under and over the central core stay clear for
every frame depth >= F_MIN (the forbidden "pencil" regions swept by the
connector sightlines are avoided outright).

Template layout (before translation to a slot):

 - flip structure: outer ring OUTER[i], inner core INNER[i]; start
   edges OUTER[i]-INNER[i], final edges OUTER[i]-INNER[i-1].
 - four fans ("blockers") of eleven vertical sticks each; fan i is the
   fan template rotated i quarter turns about the origin and guards the
   sector between arms i and i+1.
 - two separators: 2k+2 tall vertical edges per side (innermost one
   unit longer per end).
 - connectors: below p1=(0,-F)..p1'=(OUTER1.x,-F); above, the point
   reflection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Literal

from .geometry import Point, Segment, point_sees_point, segments_cross, crossing_count
from .matching import Pair, PlaneMatching, PointSet, validate

SCALE = 40

# flip structure: a pinwheel whose start edges sweep past the central
# core so that the start-configuration visibility pattern holds
OUTER = [(5760, 11520), (11520, -5760), (-5760, -11520), (-11520, 5760)]
INNER = [(2880, -2880), (-2880, -2880), (-2880, 2880), (2880, 2880)]

# fan sticks guarding the sector between arms 1 and 2, left to right:
# (x, top, bottom). The depths satisfy, simultaneously: the exact-seven
# crossing pattern of the outer-ring segment, the sightline containment
# patterns toward both arm tips, convex position of the primed chain
# and of each side's ten endpoints, and clearance of the connector
# corridors for every frame depth >= F_MIN.
FAN_STICKS: list[tuple[str, tuple[int, int, int]]] = [
    ("a1", (-696, -3318, -8032)),
    ("a2", (-99, -3459, -9013)),
    ("a3", (502, -3619, -9905)),
    ("a4", (3207, -4357, -8941)),
    ("a5", (3409, -4423, -8869)),
    ("c", (4207, -4298, -8583)),
    ("b5", (5008, -4811, -8294)),
    ("b4", (6206, -4874, -7860)),
    ("b3", (7009, -4948, -7566)),
    ("b2", (9958, -5456, -6261)),
    ("b1", (10213, -5500, -6136)),
]

FAN_ORDER = ["a1", "a2", "a3", "a4", "a5", "c", "b5", "b4", "b3", "b2", "b1"]

F_MIN = 14400         # minimum connector (frame strip) depth below the center
SEP_X0 = 12400        # innermost separator column offset from the center
SEP_STEP = 8          # column spacing
SEP_HEIGHT = 12600    # regular column half-height; innermost is +2 longer


class GadgetAuditError(AssertionError):
    """A construction-time geometric invariant failed."""


def rot90(p: tuple[int, int]) -> tuple[int, int]:
    return (p[1], -p[0])


def rotn(p: tuple[int, int], n: int) -> tuple[int, int]:
    for _ in range(n % 4):
        p = rot90(p)
    return p


Scale = Literal["full", "miniature"]


@dataclass(frozen=True)
class GadgetTemplate:
    """All local coordinates of one edge gadget, with role labels."""

    points: tuple[tuple[int, int], ...]
    roles: tuple[str, ...]
    start_pairs: tuple[Pair, ...]
    final_pairs: tuple[Pair, ...]
    blocker_pairs: tuple[tuple[Pair, ...], ...]   # per fan
    separator_pairs: tuple[tuple[Pair, ...], ...]  # (left, right)
    k: int
    scale: Scale

    def matched_pairs(self, config: str) -> list[Pair]:
        core = self.start_pairs if config == "start" else self.final_pairs
        out = list(core)
        for fan in self.blocker_pairs:
            out.extend(fan)
        for side in self.separator_pairs:
            out.extend(side)
        return out


def _fan_sticks() -> list[tuple[str, tuple[int, int, int]]]:
    if not FAN_STICKS:
        raise GadgetAuditError("fan template not frozen")
    return FAN_STICKS


def build_template(k: int, scale: Scale = "full") -> GadgetTemplate:
    """Assemble and audit the gadget template for a given k.

    Miniature scale keeps the flip structure and fans but reduces the
    separator multiplicity to 2 per side, for the bounded-depth lemma
    oracles; miniature audits skip the predicates that quantify over
    the 2k+2 structure.
    """
    pts: list[tuple[int, int]] = []
    roles: list[str] = []

    def add(p: tuple[int, int], role: str) -> int:
        pts.append(p)
        roles.append(role)
        return len(pts) - 1

    for i, p in enumerate(OUTER):
        add(p, f"flip-outer-{i}")
    for i, p in enumerate(INNER):
        add(p, f"flip-inner-{i}")
    start = tuple((i, 4 + i) for i in range(4))
    final = tuple((i, 4 + ((i - 1) % 4)) for i in range(4))

    fans = []
    for fi in range(4):
        fan = []
        for lbl, (x, top, bot) in _fan_sticks():
            iu = add(rotn((x, top), fi), f"blocker-{fi}-{lbl}")
            ip = add(rotn((x, bot), fi), f"blocker-{fi}-{lbl}'")
            fan.append((iu, ip))
        fans.append(tuple(fan))

    count = 2 * k + 2 if scale == "full" else 2
    seps = []
    for side, sgn in (("left", -1), ("right", 1)):
        cols = []
        for j in range(count):
            x = sgn * (SEP_X0 + SEP_STEP * j)
            h = SEP_HEIGHT + (2 if j == 0 else 0)
            it = add((x, h), f"separator-{side}-{j}")
            ib = add((x, -h), f"separator-{side}-{j}'")
            cols.append((it, ib))
        seps.append(tuple(cols))

    tpl = GadgetTemplate(
        points=tuple(pts),
        roles=tuple(roles),
        start_pairs=start,
        final_pairs=final,
        blocker_pairs=tuple(fans),
        separator_pairs=tuple(seps),
        k=k,
        scale=scale,
    )
    audit_template(tpl)
    return tpl


# ---------------------------------------------------------------------------
# construction-time audits
# ---------------------------------------------------------------------------

def _require(cond: bool, what: str) -> None:
    if not cond:
        raise GadgetAuditError(what)


def _convex_position(pp: list[tuple[int, int]]) -> bool:
    pts_ = sorted(set(pp))
    if len(pts_) != len(pp):
        return False
    if len(pts_) <= 2:
        return True

    def cr(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lo: list[tuple[int, int]] = []
    for p in pts_:
        while len(lo) >= 2 and cr(lo[-2], lo[-1], p) <= 0:
            lo.pop()
        lo.append(p)
    up: list[tuple[int, int]] = []
    for p in reversed(pts_):
        while len(up) >= 2 and cr(up[-2], up[-1], p) <= 0:
            up.pop()
        up.append(p)
    return len(lo[:-1] + up[:-1]) == len(pts_)


def audit_template(tpl: GadgetTemplate) -> None:
    """Every geometric invariant of the gadget, checked exactly.

    Raises GadgetAuditError naming the first violated predicate.
    """
    ps = PointSet.of(tpl.points)
    m1 = PlaneMatching.of(tpl.matched_pairs("start"))
    m2 = PlaneMatching.of(tpl.matched_pairs("final"))
    _require(validate(ps, m1) == [], "start configuration is not a plane perfect matching")
    _require(validate(ps, m2) == [], "final configuration is not a plane perfect matching")

    outer = [Point(*OUTER[i]) for i in range(4)]
    inner = [Point(*INNER[i]) for i in range(4)]
    _require(
        all(outer[0].y > q.y for q in outer[1:] + inner),
        "outer point 0 must be the topmost point of the flip structure",
    )

    # start-configuration visibility pattern
    segs_start = [ps.segment(p) for p in tpl.start_pairs]
    for i in range(4):
        _require(
            point_sees_point(outer[i], inner[(i - 1) % 4], segs_start),
            f"outer {i} must see inner {(i - 1) % 4} in the start configuration",
        )
        for d in (1, 2):
            _require(
                not point_sees_point(outer[i], inner[(i + d) % 4], segs_start),
                f"outer {i} must not see inner {(i + d) % 4} in the start configuration",
            )

    # quadrilateral containment / self-crossing behind the flip cases
    for i in range(4):
        j = (i - 1) % 4
        quad = [outer[i], inner[i], outer[j], inner[j]]
        sides = [Segment(quad[t], quad[(t + 1) % 4]) for t in range(4)]
        _require(
            not (segments_cross(sides[0], sides[2]) or segments_cross(sides[1], sides[3])),
            f"start-start-final quadrilateral {i} must be simple",
        )
        within = [
            q
            for q in outer + inner
            if q not in quad and _inside_quad(quad, q)
        ]
        _require(
            len(within) == 1,
            f"start-start-final quadrilateral {i} must contain exactly one structure point",
        )
        cyc = [outer[i], inner[i], outer[(i + 1) % 4], inner[j]]
        csides = [Segment(cyc[t], cyc[(t + 1) % 4]) for t in range(4)]
        _require(
            segments_cross(csides[0], csides[2]) or segments_cross(csides[1], csides[3]),
            f"start-final-final quadrilateral {i} must be self-crossing",
        )

    _audit_fans(tpl, ps, m1)
    _audit_separators(tpl, ps, m1)


def _inside_quad(quad: list[Point], p: Point) -> bool:
    cnt = 0
    n = len(quad)
    for k in range(n):
        a, b = quad[k], quad[(k + 1) % n]
        if (a.x > p.x) != (b.x > p.x):
            lhs = (a.y - p.y) * (b.x - a.x) + (p.x - a.x) * (b.y - a.y)
            if (b.x - a.x) > 0:
                if lhs > 0:
                    cnt += 1
            else:
                if lhs < 0:
                    cnt += 1
    return cnt % 2 == 1


def _audit_fans(tpl: GadgetTemplate, ps: PointSet, m1: PlaneMatching) -> None:
    segs_m1 = m1.segments(ps)
    inner = [Point(*INNER[i]) for i in range(4)]
    f1 = Point(*OUTER[1])
    fp1 = Point(*INNER[1])
    fan0 = dict(zip(FAN_ORDER, tpl.blocker_pairs[0]))
    sticks = {l: ps.segment(fan0[l]) for l in FAN_ORDER}

    _require(all(len(fan) == 11 for fan in tpl.blocker_pairs), "each fan must have eleven edges")

    # rotational congruence of the four fans
    for fi in range(1, 4):
        for l, pair in zip(FAN_ORDER, tpl.blocker_pairs[fi]):
            u0, p0 = fan0[l]
            want_u = rotn(tpl.points[u0], fi)
            want_p = rotn(tpl.points[p0], fi)
            got_u, got_p = (tpl.points[pair[0]], tpl.points[pair[1]])
            _require(
                (want_u, want_p) == (got_u, got_p),
                f"fan {fi} is not the rotated copy of fan 0 at stick {l}",
            )

    # convex chains
    primed = [tpl.points[fan0[l][1]] for l in FAN_ORDER]
    _require(_convex_position(primed), "fan bottom chain must be in convex position")
    for grp in ("a", "b"):
        g = [tpl.points[fan0[l][e]] for l in FAN_ORDER if l.startswith(grp) for e in range(2)]
        _require(_convex_position(g), f"fan {grp}-side endpoints must be in convex position")

    # sightline containment pattern toward both arm tips
    def seg_inside(src: Point, dst: Point, target: Segment) -> bool:
        return segments_cross(Segment(src, dst), target)

    for j in range(1, 6):
        bot = Point(*tpl.points[fan0[f"a{j}"][1]])
        targets = ["c"] + ([f"b{l}" for l in range(1, 6)] if j <= 2 else [f"b{l}" for l in range(3, 6)])
        for t in targets:
            _require(seg_inside(bot, f1, sticks[t]), f"sightline a'_{j} to the outer tip must cross {t}")
        top = Point(*tpl.points[fan0[f"a{j}"][0]])
        for t in ["c"] + [f"b{l}" for l in range(1, j)]:
            _require(seg_inside(top, f1, sticks[t]), f"sightline a_{j} to the outer tip must cross {t}")
    for j in range(1, 6):
        bot = Point(*tpl.points[fan0[f"b{j}"][1]])
        targets = ["c"] + ([f"a{l}" for l in range(1, 6)] if j <= 2 else [f"a{l}" for l in range(3, 6)])
        for t in targets:
            _require(seg_inside(bot, fp1, sticks[t]), f"sightline b'_{j} to the inner tip must cross {t}")
        top = Point(*tpl.points[fan0[f"b{j}"][0]])
        for t in ["c"] + [f"a{l}" for l in range(1, j)]:
            _require(seg_inside(top, fp1, sticks[t]), f"sightline b_{j} to the inner tip must cross {t}")

    # each outer-outer segment crosses exactly the seven middle sticks
    # of the fan guarding its sector (fan rotated i-1 quarter turns)
    for i in range(4):
        seg = Segment(Point(*OUTER[i]), Point(*OUTER[(i + 1) % 4]))
        crossed = []
        for fi in range(4):
            for l, pair in zip(FAN_ORDER, tpl.blocker_pairs[fi]):
                if segments_cross(seg, ps.segment(pair)):
                    crossed.append((fi, l))
        guard = (i - 1) % 4
        _require(
            sorted(crossed)
            == sorted((guard, l) for l in ["a3", "a4", "a5", "c", "b5", "b4", "b3"]),
            f"outer-outer segment {i} must cross exactly the seven middle fan sticks",
        )

    # every fan point sees at most one inner point
    for fi in range(4):
        for pair in tpl.blocker_pairs[fi]:
            for idx in pair:
                p = Point(*tpl.points[idx])
                seen = [j for j in range(4) if point_sees_point(p, inner[j], segs_m1)]
                _require(
                    len(seen) <= 1,
                    f"fan {fi} point {tpl.points[idx]} sees {len(seen)} inner points",
                )

    # no fan edge sees its guarded arm outright
    from .geometry import edge_sees_edge

    arm = ps.segment(tpl.start_pairs[1])
    for lbl in FAN_ORDER:
        _require(
            not edge_sees_edge(ps.segment(fan0[lbl]), arm, segs_m1),
            f"fan edge {lbl} must not see the guarded arm",
        )

    # making the central stick's edge see the guarded arm takes flips:
    # both pairings of (c, c') with (f_1, f'_1) are blocked by fan edges
    fan_segs = [ps.segment(e) for e in tpl.blocker_pairs[0]]
    c_top = Point(*tpl.points[fan0["c"][0]])
    c_bot = Point(*tpl.points[fan0["c"][1]])
    for u, v in ((c_top, c_bot), (c_bot, c_top)):
        total = crossing_count(Segment(u, f1), fan_segs) + crossing_count(Segment(v, fp1), fan_segs)
        _require(total >= 3, "central stick must be at least two flips from seeing the arm")


def _audit_separators(tpl: GadgetTemplate, ps: PointSet, m1: PlaneMatching) -> None:
    inner = [Point(*INNER[i]) for i in range(4)]
    fan_segs = [ps.segment(e) for fan in tpl.blocker_pairs for e in fan]
    count = len(tpl.separator_pairs[0])
    if tpl.scale == "full":
        _require(count == 2 * tpl.k + 2, "separator multiplicity must be 2k+2")
    for side in tpl.separator_pairs:
        h0 = abs(tpl.points[side[0][0]][1])
        _require(
            all(abs(tpl.points[col[0]][1]) == h0 - 2 for col in side[1:]),
            "innermost separator edge must be two units longer",
        )
        _require(
            all(tpl.points[col[0]][1] > OUTER[0][1] for col in side),
            "separator tops must be above the topmost outer point",
        )
        _require(
            all(tpl.points[col[1]][1] < OUTER[2][1] for col in side),
            "separator bottoms must be below the bottommost outer point",
        )
        # endpoint sightlines to every inner point cross >= 7 fan edges
        for col in side:
            for idx in col:
                p = Point(*tpl.points[idx])
                for q in inner:
                    n = crossing_count(Segment(p, q), fan_segs)
                    _require(
                        n >= 7,
                        f"separator endpoint {tpl.points[idx]} reaches inner point "
                        f"({q.x},{q.y}) across only {n} fan edges",
                    )


# ---------------------------------------------------------------------------
# configuration recognizers and the weight function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlipStructure:
    """Index view of one gadget's flip structure inside a larger point set."""

    outer: tuple[int, int, int, int]
    inner: tuple[int, int, int, int]

    def start_pairs(self) -> list[Pair]:
        return [tuple(sorted((self.outer[i], self.inner[i]))) for i in range(4)]

    def final_pairs(self) -> list[Pair]:
        return [tuple(sorted((self.outer[i], self.inner[(i - 1) % 4]))) for i in range(4)]


def weight(m: PlaneMatching, fs: FlipStructure) -> int:
    """Final-configuration edges present minus start-configuration edges
    present; ranges over [-4, 4]."""
    w = 0
    for pair in fs.final_pairs():
        if pair in m.pairs:
            w += 1
    for pair in fs.start_pairs():
        if pair in m.pairs:
            w -= 1
    return w


def classify_configuration(m: PlaneMatching, fs: FlipStructure) -> str:
    if all(p in m.pairs for p in fs.start_pairs()):
        return "start"
    if all(p in m.pairs for p in fs.final_pairs()):
        return "final"
    return "other"
