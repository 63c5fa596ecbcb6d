"""Instance generators: random sets, forced-matching gadgets, and the
compiler from planar one-in-three formulas to point sets.

The compiled construction places one rectangle of boundary points per
variable and a three-legged comb per clause, then surrounds everything with
red points so that two blue points can be matched exactly when they span one
of the designated axis-aligned segments.  Variable boundaries admit exactly
two perfect matchings (a 0- and a 1-assignment); each comb completes
perfectly exactly when one of its three literals is satisfied.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Sequence

from rectmatch.errors import ContractError
from rectmatch.geometry import (
    Color,
    ColoredPoint,
    PointSet,
    perturb,
    point,
)

# ---------------------------------------------------------------------------
# Random instances

def random_instance(n: int, grid_n: int, red_fraction: float, seed: int) -> PointSet:
    """n distinct uniform points on [0..grid_n]^2 with independent colors."""
    cells = (grid_n + 1) ** 2
    if n > cells:
        raise ValueError(f"cannot place {n} distinct points on a {grid_n + 1}^2 grid")
    if not 0 <= red_fraction <= 1:
        raise ValueError("red_fraction must be in [0, 1]")
    rng = Random(seed)
    chosen = rng.sample(range(cells), n)
    pts = []
    for cell in chosen:
        x, y = divmod(cell, grid_n + 1)
        color = "R" if rng.random() < red_fraction else "B"
        pts.append((x, y, color))
    return PointSet.from_tuples(pts)


# ---------------------------------------------------------------------------
# Blocking gadget: 12 one-colored points whose perfect matching collapses if
# any of the four outer points goes missing.

_BLOCKER_OUTER = ((0, 0), (5, 0), (5, 5), (0, 5))
_BLOCKER_INNER = ((1, 3), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 2))


def blocking_gadget(
    origin: tuple = (0, 0), scale=1, color: Color = Color.BLUE
) -> PointSet:
    """The 12-point blocker, scaled then translated, all one color."""
    s = Fraction(scale)
    if s <= 0:
        raise ValueError("scale must be positive")
    ox, oy = Fraction(origin[0]), Fraction(origin[1])
    pts = [
        ColoredPoint(ox + s * x, oy + s * y, color)
        for x, y in _BLOCKER_OUTER + _BLOCKER_INNER
    ]
    return PointSet(tuple(pts))


# ---------------------------------------------------------------------------
# Variable gadget

def variable_gadget(degree: int, origin: tuple[int, int] = (0, 0)):
    """Boundary points of a height-4, width-6*degree rectangle at spacing 2,
    numbered clockwise from the top-left corner, plus the consecutive-pair
    segments.  Returns (points, segments) with 0-based local indices; point
    k of the 1-based clockwise numbering is points[k-1]."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    x0, y0 = origin
    w = 6 * degree
    pts: list[tuple[int, int]] = []
    for x in range(0, w + 1, 2):                      # top, left to right
        pts.append((x0 + x, y0 + 4))
    for y in (2, 0):                                  # right side, downward
        pts.append((x0 + w, y0 + y))
    for x in range(w - 2, -1, -2):                    # bottom, right to left
        pts.append((x0 + x, y0))
    pts.append((x0, y0 + 2))                          # left side
    assert len(pts) == 6 * degree + 4
    n = len(pts)
    segments = [(i, (i + 1) % n) for i in range(n)]
    return pts, segments


def variable_matching_pairs(degree: int, assignment: bool) -> list[tuple[int, int]]:
    """Local index pairs of the gadget's two perfect matchings: the
    1-matching pairs point i with i+1 for odd i (1-based), the 0-matching
    for even i, indices cyclic."""
    n = 6 * degree + 4
    if assignment:
        return [(i, i + 1) for i in range(0, n, 2)]
    return [(i, i + 1) for i in range(1, n - 1, 2)] + [(n - 1, 0)]


def top_anchor_number(degree: int, offset: int) -> int:
    """Clockwise 1-based number of the top-edge point at x-offset `offset`."""
    return offset // 2 + 1


def bottom_anchor_number(degree: int, offset: int) -> int:
    return 3 * degree + 3 + (6 * degree - offset) // 2


# ---------------------------------------------------------------------------
# Clause gadget

@dataclass(frozen=True)
class LegAnchor:
    """Attachment of one clause leg: the anchor is a variable boundary point
    on the top edge (side 'above') or bottom edge ('below')."""

    x: int
    y: int
    number: int
    positive: bool
    side: str

    def __post_init__(self):
        if self.side not in ("above", "below"):
            raise ValueError(f"side must be 'above' or 'below', got {self.side!r}")
        if (self.number % 2 == 0) != self.positive:
            raise ValueError(
                f"anchor number {self.number} has the wrong parity for a "
                f"{'positive' if self.positive else 'negated'} literal"
            )


# Comb template, relative to anchor columns (a1 < a2 < a3) and rows measured
# away from the variable edge.  Row -1 holds the three points inside each
# leg's overlap box; rows 2/4/6 (plus the nesting offset) hold the six wall
# tops and the three spine points.  The staggered wall heights and the plug
# point S1 realize the one-in-three completion rule; S2/S3 close whichever
# side the plug leaves open.
_COMB_NAMES = (
    "L1", "M1", "R1", "L2", "M2", "R2", "L3", "M3", "R3",
    "WL1", "WR1", "WL2", "WR2", "WL3", "WR3", "S1", "S2", "S3",
)

_COMB_SEGMENTS = (
    ("L1", "M1"), ("M1", "R1"), ("L2", "M2"), ("M2", "R2"),
    ("L3", "M3"), ("M3", "R3"),
    ("L1", "WL1"), ("R1", "WR1"), ("L2", "WL2"), ("R2", "WR2"),
    ("L3", "WL3"), ("R3", "WR3"),
    ("WL1", "WR2"), ("WR2", "WL3"),
    ("WR1", "WL2"), ("WR3", "S1"),
    ("WR1", "S2"),
    ("S1", "S3"),
    ("S2", "S3"),
)


def _comb_template(a1: int, a2: int, a3: int, lift: int) -> dict[str, tuple[int, int]]:
    """Template coordinates as (x, signed row relative to the variable edge);
    `lift` shifts the spine rows upward for nesting.

    Tops paired by the satisfied-literal completions sit on the high row so
    their connecting segments pass above every simultaneously used leg
    vertical; the unsatisfied-side tops, the plug point S1, and its partner
    segments stay low, and the S2-S3 closer runs above everything.
    """
    low, high, top = 2 + lift, 4 + lift, 6 + lift
    return {
        "L1": (a1 - 1, -1), "M1": (a1, -1), "R1": (a1 + 1, -1),
        "L2": (a2 - 1, -1), "M2": (a2, -1), "R2": (a2 + 1, -1),
        "L3": (a3 - 1, -1), "M3": (a3, -1), "R3": (a3 + 1, -1),
        "WL1": (a1 - 1, high), "WR1": (a1 + 1, low),
        "WL2": (a2 - 1, low), "WR2": (a2 + 1, high),
        "WL3": (a3 - 1, high), "WR3": (a3 + 1, low),
        "S1": (a3 + 2, low), "S2": (a1 + 1, top), "S3": (a3 + 2, top),
    }


def clause_gadget(anchors: Sequence[LegAnchor], level: int = 0):
    """Points and segments of one clause comb attached at three anchors.

    Anchors must be on the same side, in increasing x order, at least 4
    apart.  Returns (points, segments) with local indices; `level` raises
    the spine rows by 6 per nesting depth.  For 'below' clauses the whole
    template is rotated half a turn so the same completion logic applies to
    the mirrored blocking behavior of bottom-edge anchors.
    """
    if len(anchors) != 3:
        raise ValueError("a clause needs exactly three anchors")
    sides = {a.side for a in anchors}
    if len(sides) != 1:
        raise ValueError("anchors of one clause must share a side")
    side = anchors[0].side
    ys = {a.y for a in anchors}
    if len(ys) != 1:
        raise ValueError("anchors of one clause must lie on one edge line")
    edge_y = anchors[0].y
    xs = [a.x for a in anchors]
    if not (xs[0] < xs[1] < xs[2]):
        raise ValueError("anchors must be in increasing x order")
    if xs[1] - xs[0] < 4 or xs[2] - xs[1] < 4:
        raise ValueError("anchors must be at least 4 apart")
    lift = 6 * level
    if side == "above":
        template = _comb_template(xs[0], xs[1], xs[2], lift)
        placed = {
            name: (x, edge_y + rel) for name, (x, rel) in template.items()
        }
    else:
        c = xs[0] + xs[2]
        template = _comb_template(c - xs[2], c - xs[1], c - xs[0], lift)
        placed = {
            name: (c - x, edge_y - rel) for name, (x, rel) in template.items()
        }
    pts = [placed[name] for name in _COMB_NAMES]
    index = {name: i for i, name in enumerate(_COMB_NAMES)}
    segments = [(index[u], index[v]) for u, v in _COMB_SEGMENTS]
    return pts, segments


# ---------------------------------------------------------------------------
# Red fill

@dataclass(frozen=True)
class GadgetInstance:
    """A generated instance: the full colored point set (blues first, then
    the red fill), the designated blue segment pairs, and how it was made."""

    points: PointSet
    allowed_segments: tuple[tuple[int, int], ...]
    provenance: dict

    @property
    def blue_count(self) -> int:
        return self.provenance["blueCount"]

    def blues(self) -> PointSet:
        return PointSet(self.points.points[: self.blue_count])


def _on_any_segment(x: int, y: int, segs) -> bool:
    for (x1, y1), (x2, y2) in segs:
        if x1 == x2:
            if x == x1 and min(y1, y2) <= y <= max(y1, y2):
                return True
        else:
            if y == y1 and min(x1, x2) <= x <= max(x1, x2):
                return True
    return False


def red_fill(blues: Sequence[tuple[int, int]], segments: Sequence[tuple[int, int]]):
    """Surround a blue layout with red points so that exactly the designated
    segments survive as matchable blue pairs.

    Steps: scale blues by 2; put a red on every grid point of the blue
    bounding box having an odd coordinate and lying on no designated
    segment; scale everything by 2 again; add a copy of the reds shifted one
    unit down (giving every red a vertical partner).  Returns the list of
    scaled blues followed by the sorted reds.
    """
    for x, y in blues:
        if not (isinstance(x, int) and isinstance(y, int)):
            raise ValueError("red_fill needs integer blue coordinates")
    if not blues:
        return [], []
    scaled = [(2 * x, 2 * y) for x, y in blues]
    segs = [(scaled[i], scaled[j]) for i, j in segments]
    xmin = min(x for x, _ in scaled)
    xmax = max(x for x, _ in scaled)
    ymin = min(y for _, y in scaled)
    ymax = max(y for _, y in scaled)
    reds = []
    for x in range(xmin, xmax + 1):
        for y in range(ymin, ymax + 1):
            if x % 2 == 0 and y % 2 == 0:
                continue
            if _on_any_segment(x, y, segs):
                continue
            reds.append((x, y))
    blues4 = [(2 * x, 2 * y) for x, y in scaled]
    reds4 = [(2 * x, 2 * y) for x, y in reds]
    reds4 += [(x, y - 1) for x, y in reds4]
    reds4.sort()
    return blues4, reds4


def build_gadget(
    blues: Sequence[tuple[int, int]],
    segments: Sequence[tuple[int, int]],
    provenance: dict | None = None,
) -> GadgetInstance:
    """Apply the red fill to a blue layout and normalize to the grid
    [0..N]^2, shifting by multiples of 4 so blue coordinates stay congruent
    to 0 mod 4.  Blues keep their indices and come first."""
    segments = tuple(
        (i, j) if i < j else (j, i) for i, j in segments
    )
    for i, j in segments:
        (x1, y1), (x2, y2) = blues[i], blues[j]
        if x1 != x2 and y1 != y2:
            raise ValueError(f"designated segment {(i, j)} is not axis-aligned")
        for k, (xk, yk) in enumerate(blues):
            if k not in (i, j) and min(x1, x2) <= xk <= max(x1, x2) \
                    and min(y1, y2) <= yk <= max(y1, y2):
                raise ValueError(
                    f"designated segment {(i, j)} passes through blue point {k}"
                )
    blues4, reds4 = red_fill(blues, segments)
    all_pts = list(blues4) + list(reds4)
    if all_pts:
        min_x = min(x for x, _ in all_pts)
        min_y = min(y for _, y in all_pts)
        shift_x = -4 * (min_x // 4)  # ceil to a multiple of 4, keeps >= 0
        shift_y = -4 * (min_y // 4)
    else:
        shift_x = shift_y = 0
    pts = [(x + shift_x, y + shift_y, "B") for x, y in blues4]
    pts += [(x + shift_x, y + shift_y, "R") for x, y in reds4]
    n = max((max(x, y) for x, y, _ in pts), default=0)
    prov = dict(provenance or {})
    prov.update({
        "blueCount": len(blues4),
        "gridN": n,
        "shift": [shift_x, shift_y],
    })
    return GadgetInstance(
        PointSet.from_tuples(pts), segments, prov
    )


def red_vertical_pairs(g: GadgetInstance) -> list[tuple[int, int]]:
    """The index pairs of the fill's vertical red matching: every odd-row
    red is the one-unit-down copy of the red directly above it."""
    pos = {(p.x, p.y): i for i, p in enumerate(g.points)}
    pairs = []
    for i, p in enumerate(g.points):
        if p.color is Color.RED and p.y % 2 == 1:
            j = pos[(p.x, p.y + 1)]
            pairs.append((min(i, j), max(i, j)))
    return sorted(pairs)


# ---------------------------------------------------------------------------
# Formulas and layouts

@dataclass(frozen=True)
class Literal:
    var: str
    negated: bool


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, Literal, Literal]
    side: str


@dataclass(frozen=True)
class Formula:
    variables: tuple[str, ...]
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        order = {v: k for k, v in enumerate(self.variables)}
        if len(order) != len(self.variables):
            raise ValueError("duplicate variable names")
        for c in self.clauses:
            names = [lit.var for lit in c.literals]
            if len(set(names)) != 3:
                raise ValueError(f"clause {names} repeats a variable")
            for v in names:
                if v not in order:
                    raise ValueError(f"clause uses unknown variable {v!r}")
            if c.side not in ("above", "below"):
                raise ValueError(f"bad side {c.side!r}")

    def degree(self, var: str) -> int:
        return sum(1 for c in self.clauses for lit in c.literals if lit.var == var)


def formula_from_dict(d: dict) -> Formula:
    clauses = []
    for c in d["clauses"]:
        lits = tuple(Literal(l["var"], bool(l["neg"])) for l in c["literals"])
        clauses.append(Clause(lits, c.get("side", "above")))
    return Formula(tuple(d["variables"]), tuple(clauses))


def formula_to_dict(f: Formula) -> dict:
    return {
        "variables": list(f.variables),
        "clauses": [
            {
                "literals": [{"var": l.var, "neg": l.negated} for l in c.literals],
                "side": c.side,
            }
            for c in f.clauses
        ],
    }


def eval_one_in_three(f: Formula, assignment: dict[str, bool]) -> bool:
    for c in f.clauses:
        sat = sum(
            1 for l in c.literals if assignment[l.var] != l.negated
        )
        if sat != 1:
            return False
    return True


def one_in_three_satisfiable(f: Formula) -> bool:
    n = len(f.variables)
    for bits in range(1 << n):
        assignment = {v: bool((bits >> k) & 1) for k, v in enumerate(f.variables)}
        if eval_one_in_three(f, assignment):
            return True
    return False


@dataclass(frozen=True)
class CombLayout:
    """Nesting certificate: for each side, clause indices with their variable
    spans, verified pairwise non-crossing, plus nesting levels and the
    per-variable left-to-right leg order."""

    spans: dict
    levels: dict
    slot_order: dict

    @property
    def max_level(self) -> int:
        return max(self.levels.values(), default=0)


def build_layout(f: Formula) -> CombLayout:
    """Derive and validate the comb layout for a formula.

    Same-side clause spans must be disjoint, share at most an endpoint
    variable, or nest properly with no outer anchor strictly inside the
    inner span; anything else is a crossing and is rejected.
    """
    order = {v: k for k, v in enumerate(f.variables)}
    spans = {}
    for ci, c in enumerate(f.clauses):
        idxs = sorted(order[l.var] for l in c.literals)
        spans[ci] = (idxs[0], idxs[-1])
    by_side: dict[str, list[int]] = {"above": [], "below": []}
    for ci, c in enumerate(f.clauses):
        by_side[c.side].append(ci)

    for side, cis in by_side.items():
        for a_pos in range(len(cis)):
            for b_pos in range(a_pos + 1, len(cis)):
                ca, cb = cis[a_pos], cis[b_pos]
                (l1, r1), (l2, r2) = spans[ca], spans[cb]
                lo, hi = max(l1, l2), min(r1, r2)
                if lo > hi:
                    continue                      # disjoint
                if (l1 <= l2 and r2 <= r1) or (l2 <= l1 and r1 <= r2):
                    inner, outer = (cb, ca) if (l1 <= l2 and r2 <= r1) else (ca, cb)
                    li, ri = spans[inner]
                    outer_anchor_vars = {
                        order[l.var] for l in f.clauses[outer].literals
                    }
                    inside = [v for v in outer_anchor_vars if li < v < ri]
                    if inside:
                        raise ValueError(
                            f"clauses {outer} and {inner} cross: leg of clause "
                            f"{outer} lands strictly inside the nested span"
                        )
                    continue                      # proper nesting
                if lo == hi:
                    continue                      # side by side at one variable
                raise ValueError(f"clauses {ca} and {cb} cross on side {side!r}")

    levels = {}

    def level_of(ci: int) -> int:
        if ci in levels:
            return levels[ci]
        l, r = spans[ci]
        inner = [
            cj for cj in by_side[f.clauses[ci].side]
            if cj != ci
            and l <= spans[cj][0] and spans[cj][1] <= r
            and spans[cj] != spans[ci]
        ]
        levels[ci] = 1 + max((level_of(cj) for cj in inner), default=-1)
        return levels[ci]

    for ci in range(len(f.clauses)):
        level_of(ci)

    # Left-to-right leg order on each (variable, side): right-ending combs
    # innermost first, then the (unique) spanning comb, then left-ending
    # combs outermost first.
    slot_order: dict[tuple[str, str], list[int]] = {}
    for v, vi in order.items():
        for side in ("above", "below"):
            incident = [
                ci for ci in by_side[side]
                if any(l.var == v for l in f.clauses[ci].literals)
            ]
            right_enders = sorted(
                (ci for ci in incident if spans[ci][1] == vi and spans[ci][0] != vi),
                key=lambda ci: -spans[ci][0],
            )
            middles = [
                ci for ci in incident if spans[ci][0] < vi < spans[ci][1]
            ]
            left_enders = sorted(
                (ci for ci in incident if spans[ci][0] == vi),
                key=lambda ci: -spans[ci][1],
            )
            if len(middles) > 1:
                raise ValueError(
                    f"clauses {middles} both pass through variable {v!r} on "
                    f"side {side!r}; the layout cannot be drawn"
                )
            slot_order[(v, side)] = right_enders + middles + left_enders
    return CombLayout(spans, levels, slot_order)


# ---------------------------------------------------------------------------
# The compiler

VARIABLE_GAP = 6


def compile_planar_1in3(f: Formula, layout: CombLayout | None = None) -> GadgetInstance:
    """Compile a formula into a two-colored instance whose perfect
    monochromatic matchings correspond to accepting assignments."""
    if layout is None:
        layout = build_layout(f)
    degrees = {v: max(1, f.degree(v)) for v in f.variables}
    x_offsets = {}
    x = 0
    for v in f.variables:
        x_offsets[v] = x
        x += 6 * degrees[v] + VARIABLE_GAP

    blues: list[tuple[int, int]] = []
    segments: list[tuple[int, int]] = []
    var_meta = {}
    for v in f.variables:
        pts, segs = variable_gadget(degrees[v], origin=(x_offsets[v], 0))
        base = len(blues)
        var_meta[v] = {"start": base, "count": len(pts), "degree": degrees[v]}
        blues.extend(pts)
        segments.extend((base + i, base + j) for i, j in segs)

    # Anchor allocation: per (variable, side), leg slots left to right in
    # layout order; slot j picks offset 6j+2 or 6j+4 to meet the parity rule
    # (even clockwise number exactly for positive literals).
    anchor_of: dict[tuple[int, str], LegAnchor] = {}
    for (v, side), clause_ids in layout.slot_order.items():
        for j, ci in enumerate(clause_ids):
            lit = next(l for l in f.clauses[ci].literals if l.var == v)
            d = degrees[v]
            candidates = [6 * j + 2, 6 * j + 4]
            pick = None
            for a in candidates:
                if a > 6 * d - 2:
                    continue
                num = (
                    top_anchor_number(d, a) if side == "above"
                    else bottom_anchor_number(d, a)
                )
                if (num % 2 == 0) == (not lit.negated):
                    pick = (a, num)
                    break
            if pick is None:
                raise ContractError(
                    f"no anchor slot with the required parity on {v!r}/{side}"
                )
            a, num = pick
            y = 4 if side == "above" else 0
            anchor_of[(ci, v)] = LegAnchor(
                x_offsets[v] + a, y, num, not lit.negated, side
            )

    clause_meta = []
    for ci, c in enumerate(f.clauses):
        order = {v: k for k, v in enumerate(f.variables)}
        lits = sorted(c.literals, key=lambda l: order[l.var])
        anchors = [anchor_of[(ci, l.var)] for l in lits]
        pts, segs = clause_gadget(anchors, level=layout.levels[ci])
        base = len(blues)
        blues.extend(pts)
        segments.extend((base + i, base + j) for i, j in segs)
        clause_meta.append({
            "start": base,
            "count": len(pts),
            "side": c.side,
            "level": layout.levels[ci],
            "anchors": [
                {"var": l.var, "x": a.x, "y": a.y, "number": a.number,
                 "positive": a.positive}
                for l, a in zip(lits, anchors)
            ],
        })

    g = build_gadget(
        blues, segments,
        provenance={
            "recipe": "planar-one-in-three",
            "formula": formula_to_dict(f),
            "variables": var_meta,
            "clauses": clause_meta,
        },
    )
    n = g.provenance["gridN"]
    size = sum(degrees.values()) + len(f.clauses) + len(f.variables)
    if n > 200 * max(1, size):
        raise ContractError(f"grid bound {n} exceeds the linear budget for size {size}")
    return g


def forced_variable_pairs(g: GadgetInstance, assignment: dict[str, bool]):
    """Global index pairs pinning every variable boundary to its 0- or
    1-matching under the given assignment (for clause truth-table tests)."""
    pairs = []
    for v, meta in g.provenance["variables"].items():
        base, deg = meta["start"], meta["degree"]
        for i, j in variable_matching_pairs(deg, assignment[v]):
            pairs.append((base + i, base + j))
    return pairs


# ---------------------------------------------------------------------------
# Recoloring transformations

_BI_CLUSTER = (
    (0, 0, "B"), (1, 6, "B"), (2, 2, "R"), (3, 3, "R"),
    (4, 4, "R"), (5, 5, "R"), (6, 1, "B"), (7, 7, "B"),
)


def greens_of(g: GadgetInstance) -> list[tuple[int, int]]:
    """Blocker positions for the transformations: the points that keep every
    non-designated blue pair unmatchable once the red fill is stripped.
    These are the even grid points of the blue bounding box with a
    coordinate congruent to 2 mod 4 that lie on no designated segment."""
    blues = [(int(p.x), int(p.y)) for p in g.blues()]
    segs = [(blues[i], blues[j]) for i, j in g.allowed_segments]
    xmin = min(x for x, _ in blues)
    xmax = max(x for x, _ in blues)
    ymin = min(y for _, y in blues)
    ymax = max(y for _, y in blues)
    greens = []
    for x in range(xmin, xmax + 1, 2):
        for y in range(ymin, ymax + 1, 2):
            if x % 4 == 0 and y % 4 == 0:
                continue
            if _on_any_segment(x, y, segs):
                continue
            greens.append((x, y))
    return greens


def _cluster_delta(n: int) -> Fraction:
    # Distinct sheared coordinates differ by at least 1/(2n+1); a cluster of
    # half this diameter can never collide with, or escape past, its
    # neighborhood.
    return Fraction(1, 3 * (2 * n + 1))


def monochromatize(g: GadgetInstance) -> PointSet:
    """One-colored instance with the same perfect-matching answer: shear the
    blues and blockers into general position, then replace each blocker with
    a shrunken copy of the 12-point blocking gadget."""
    blues = [(int(p.x), int(p.y)) for p in g.blues()]
    greens = greens_of(g)
    staged = PointSet.from_tuples(
        [(x, y, "B") for x, y in blues] + [(x, y, "B") for x, y in greens]
    )
    n = max(max(x, y) for x, y in blues + greens)
    sheared = perturb(staged, n)
    delta = _cluster_delta(n)
    scale = delta / 10
    out = list(sheared.points[: len(blues)])
    center = Fraction(5, 2)
    for k in range(len(greens)):
        gp = sheared[len(blues) + k]
        for mx, my in _BLOCKER_OUTER + _BLOCKER_INNER:
            out.append(ColoredPoint(
                gp.x + scale * (mx - center),
                gp.y + scale * (my - center),
                Color.BLUE,
            ))
    return PointSet(tuple(out))


def recolor_for_bichromatic(g: GadgetInstance) -> list[Color]:
    """Two-color the designated-segment graph so every segment gets exactly
    one red endpoint; components are colored from their least index."""
    nb = g.blue_count
    adj: list[list[int]] = [[] for _ in range(nb)]
    for i, j in g.allowed_segments:
        adj[i].append(j)
        adj[j].append(i)
    colors: list[Color | None] = [None] * nb
    for start in range(nb):
        if colors[start] is not None:
            continue
        colors[start] = Color.BLUE
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if colors[v] is None:
                    colors[v] = (
                        Color.RED if colors[u] is Color.BLUE else Color.BLUE
                    )
                    stack.append(v)
                elif colors[v] is colors[u]:
                    raise ContractError(
                        f"designated segments contain an odd cycle through "
                        f"points {u} and {v}; cannot recolor one endpoint each"
                    )
    return colors  # type: ignore[return-value]


def bichromatize(g: GadgetInstance) -> PointSet:
    """Two-colored general-position instance with the same perfect-matching
    answer under the bichromatic rule: recolor one endpoint of every
    designated segment red, shear, and replace each blocker with the
    eight-point two-colored cluster (two internal perfect matchings, reds
    enclosed on all sides)."""
    blues = [(int(p.x), int(p.y)) for p in g.blues()]
    colors = recolor_for_bichromatic(g)
    greens = greens_of(g)
    staged = PointSet.from_tuples(
        [(x, y, c.value) for (x, y), c in zip(blues, colors)]
        + [(x, y, "B") for x, y in greens]
    )
    n = max(max(x, y) for x, y in blues + greens)
    sheared = perturb(staged, n)
    delta = _cluster_delta(n)
    scale = delta / 14
    out = list(sheared.points[: len(blues)])
    center = Fraction(7, 2)
    for k in range(len(greens)):
        gp = sheared[len(blues) + k]
        for cx, cy, cc in _BI_CLUSTER:
            out.append(ColoredPoint(
                gp.x + scale * (cx - center),
                gp.y + scale * (cy - center),
                Color(cc),
            ))
    return PointSet(tuple(out))


# ---------------------------------------------------------------------------
# Sidecar serialization

def sidecar_to_dict(g: GadgetInstance) -> dict:
    return {
        "allowedSegments": [list(p) for p in g.allowed_segments],
        "provenance": g.provenance,
    }


def sidecar_to_json(g: GadgetInstance) -> str:
    return json.dumps(sidecar_to_dict(g), indent=2, sort_keys=True) + "\n"
