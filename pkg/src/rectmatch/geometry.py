"""Exact planar geometry for two-colored point sets.

Coordinates are `fractions.Fraction` values throughout: arithmetic and
comparisons are exact, denominators stay in canonical reduced form, and no
floating point ever enters a predicate.  Rectangles are *closed* boxes, so a
point on the boundary counts as contained.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

Coord = Fraction


class Color(Enum):
    RED = "R"
    BLUE = "B"


class RectKind(Enum):
    SEGMENT = "segment"
    BOX = "box"


class ColorClass(Enum):
    RED_RED = "RR"
    BLUE_BLUE = "BB"
    MIXED = "RB"


class IntersectionKind(Enum):
    DISJOINT = "disjoint"
    PIERCING = "piercing"
    CORNER = "corner"
    POINT = "point"
    SIDE = "side"


def coord(value) -> Coord:
    """Coerce an int, string like ``5`` / ``2/7``, or Fraction to an exact Coord."""
    return Fraction(value)


@dataclass(frozen=True)
class ColoredPoint:
    x: Coord
    y: Coord
    color: Color

    def pos(self) -> tuple[Coord, Coord]:
        return (self.x, self.y)


def point(x, y, color: Color | str) -> ColoredPoint:
    if isinstance(color, str):
        color = Color(color)
    return ColoredPoint(Fraction(x), Fraction(y), color)


@dataclass(frozen=True)
class PointSet:
    """An ordered list of distinct colored points; indices are stable identities."""

    points: tuple[ColoredPoint, ...]

    def __post_init__(self):
        seen = set()
        for p in self.points:
            key = (p.x, p.y)
            if key in seen:
                raise ValueError(f"duplicate point at ({p.x}, {p.y})")
            seen.add(key)

    @classmethod
    def of(cls, pts: Iterable[ColoredPoint]) -> "PointSet":
        return cls(tuple(pts))

    @classmethod
    def from_tuples(cls, triples: Iterable[tuple]) -> "PointSet":
        """Build from (x, y, color) triples; color may be a Color or 'R'/'B'."""
        return cls(tuple(point(x, y, c) for x, y, c in triples))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[ColoredPoint]:
        return iter(self.points)

    def __getitem__(self, i: int) -> ColoredPoint:
        return self.points[i]

    @cached_property
    def _coord_set(self) -> frozenset[tuple[Coord, Coord]]:
        return frozenset((p.x, p.y) for p in self.points)

    def has_point_at(self, x: Coord, y: Coord) -> bool:
        return (x, y) in self._coord_set

    def count(self, color: Color) -> int:
        return sum(1 for p in self.points if p.color is color)


@dataclass(frozen=True)
class Rect:
    """Closed minimum enclosing axis-aligned rectangle of two defining points."""

    a: int
    b: int
    xmin: Coord
    xmax: Coord
    ymin: Coord
    ymax: Coord
    kind: RectKind
    color_class: ColorClass

    @property
    def key(self) -> tuple[int, int]:
        """Canonical defining-index pair."""
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


def _color_class(c1: Color, c2: Color) -> ColorClass:
    if c1 is not c2:
        return ColorClass.MIXED
    return ColorClass.RED_RED if c1 is Color.RED else ColorClass.BLUE_BLUE


def rect_from_pair(s: PointSet, i: int, j: int) -> Rect:
    """The rectangle spanned by points i and j of s."""
    if i == j:
        raise ValueError("a rectangle needs two distinct defining points")
    if not (0 <= i < len(s) and 0 <= j < len(s)):
        raise ValueError(f"point index out of range: ({i}, {j})")
    p, q = s[i], s[j]
    xmin, xmax = min(p.x, q.x), max(p.x, q.x)
    ymin, ymax = min(p.y, q.y), max(p.y, q.y)
    kind = RectKind.SEGMENT if (xmin == xmax or ymin == ymax) else RectKind.BOX
    return Rect(i, j, xmin, xmax, ymin, ymax, kind, _color_class(p.color, q.color))


def contains_point(r: Rect, p: ColoredPoint) -> bool:
    """Closed containment: boundary points count."""
    return r.xmin <= p.x <= r.xmax and r.ymin <= p.y <= r.ymax


def _contains_xy(r: Rect, x: Coord, y: Coord) -> bool:
    return r.xmin <= x <= r.xmax and r.ymin <= y <= r.ymax


def _strictly_inside(r: Rect, x: Coord, y: Coord) -> bool:
    return r.xmin < x < r.xmax and r.ymin < y < r.ymax


def pierces(r1: Rect, r2: Rect) -> bool:
    """True iff r2 pierces r1: r1's x-projection contains r2's, and r2's
    y-projection contains r1's.  Containment is non-strict, so equal
    projections qualify."""
    return (
        r1.xmin <= r2.xmin
        and r2.xmax <= r1.xmax
        and r2.ymin <= r1.ymin
        and r1.ymax <= r2.ymax
    )


def _corners(r: Rect) -> set[tuple[Coord, Coord]]:
    return {
        (r.xmin, r.ymin),
        (r.xmin, r.ymax),
        (r.xmax, r.ymin),
        (r.xmax, r.ymax),
    }


def classify_intersection(s: PointSet, r1: Rect, r2: Rect) -> IntersectionKind:
    """Total, symmetric classification of how two closed rectangles meet.

    Order of checks: disjoint, piercing (by projection containment, either
    direction), point (the overlap is a single point that belongs to s),
    corner (each rectangle has exactly one corner of the other strictly
    inside it, neither corner a point of s), and side for everything else.

    Two boundary conventions matter downstream and are fixed here.  First,
    piercing is decided before the degenerate-overlap cases: two rectangles
    that cross, or degenerate ones sharing a defining point while one's
    projections contain the other's, behave for every algorithm in this
    package like a piercing pair.  Second, a bare boundary touch - an
    overlap of zero area containing no point of s and with no projection
    containment - counts as disjoint: such rectangles can coexist in a
    strong matching, and treating the touch as a conflict would break the
    exactness of the per-corner candidate families on inputs with repeated
    coordinates.
    """
    lox, hix = max(r1.xmin, r2.xmin), min(r1.xmax, r2.xmax)
    loy, hiy = max(r1.ymin, r2.ymin), min(r1.ymax, r2.ymax)
    if lox > hix or loy > hiy:
        return IntersectionKind.DISJOINT
    if pierces(r1, r2) or pierces(r2, r1):
        return IntersectionKind.PIERCING
    if lox == hix or loy == hiy:
        # Zero-area overlap: a point or a boundary segment.
        if lox == hix and loy == hiy:
            if s.has_point_at(lox, loy):
                return IntersectionKind.POINT
            return IntersectionKind.DISJOINT
        if any(lox <= p.x <= hix and loy <= p.y <= hiy for p in s):
            return IntersectionKind.SIDE
        return IntersectionKind.DISJOINT
    in_1 = [c for c in _corners(r2) if _strictly_inside(r1, *c)]
    in_2 = [c for c in _corners(r1) if _strictly_inside(r2, *c)]
    if (
        len(in_1) == 1
        and len(in_2) == 1
        and not s.has_point_at(*in_1[0])
        and not s.has_point_at(*in_2[0])
    ):
        return IntersectionKind.CORNER
    return IntersectionKind.SIDE


def rects_conflict(s: PointSet, r1: Rect, r2: Rect) -> bool:
    """True iff the two rectangles cannot coexist in a strong matching."""
    return classify_intersection(s, r1, r2) is not IntersectionKind.DISJOINT


def empty_pairs(s: PointSet) -> list[tuple[int, int]]:
    """All index pairs {i, j} whose rectangle contains no third point of s.

    Directional sweep: points are scanned in (x, y) order and, for each
    anchor, later points are admitted while they beat the lowest blocker seen
    above the anchor line (resp. highest below).  Output and complexity match
    the quadratic pair filter; the scan just exits early once both sides of
    the anchor are walled off.
    """
    order = sorted(range(len(s)), key=lambda k: (s[k].x, s[k].y))
    out: list[tuple[int, int]] = []
    n = len(order)
    for pos in range(n):
        i = order[pos]
        py = s[i].y
        min_up: Coord | None = None
        max_down: Coord | None = None
        if pos > 0:
            k = order[pos - 1]
            # The nearest same-column point below the anchor precedes it in
            # the sort order yet blocks every box hanging below the anchor.
            if s[k].x == s[i].x:
                max_down = s[k].y
        for pos2 in range(pos + 1, n):
            j = order[pos2]
            qy = s[j].y
            if qy >= py:
                if min_up is None or qy < min_up:
                    out.append((i, j) if i < j else (j, i))
                    min_up = qy
                    if qy == py:
                        # A point level with the anchor blocks both sides.
                        break
            else:
                if max_down is None or qy > max_down:
                    # A point in q's own column between q and the anchor line
                    # sorts after q; its column successor is the lowest such.
                    blocked = False
                    if pos2 + 1 < n:
                        k = order[pos2 + 1]
                        if s[k].x == s[j].x and s[k].y <= py:
                            blocked = True
                    if not blocked:
                        out.append((i, j) if i < j else (j, i))
                    max_down = qy
    out.sort()
    return out


def empty_pairs_naive(s: PointSet) -> list[tuple[int, int]]:
    """Reference quadratic-pairs filter; used to cross-check the sweep."""
    out = []
    n = len(s)
    for i in range(n):
        for j in range(i + 1, n):
            r = rect_from_pair(s, i, j)
            if not any(
                contains_point(r, s[k]) for k in range(n) if k != i and k != j
            ):
                out.append((i, j))
    return out


def candidate_monochromatic(s: PointSet) -> list[Rect]:
    """All empty rectangles over same-colored pairs of s."""
    return [
        rect_from_pair(s, i, j)
        for i, j in empty_pairs(s)
        if s[i].color is s[j].color
    ]


def candidate_bichromatic(s: PointSet) -> list[Rect]:
    """All empty rectangles over differently-colored pairs of s."""
    return [
        rect_from_pair(s, i, j)
        for i, j in empty_pairs(s)
        if s[i].color is not s[j].color
    ]


def perturb(s: PointSet, n: int) -> PointSet:
    """Shear an integer point set in [0..n]^2 into general position.

    Each point (x, y) moves to (x + (x+y)/(2n+1), y + (x+y)/(2n+1)).  The
    shift is below 1, preserves colors and indices, and makes all x and all
    y coordinates pairwise distinct.
    """
    d = 2 * n + 1
    moved = []
    for p in s:
        if p.x.denominator != 1 or p.y.denominator != 1:
            raise ValueError(f"perturb needs integer coordinates, got ({p.x}, {p.y})")
        if not (0 <= p.x <= n and 0 <= p.y <= n):
            raise ValueError(f"point ({p.x}, {p.y}) outside [0..{n}]^2")
        shift = Fraction(int(p.x) + int(p.y), d)
        moved.append(ColoredPoint(p.x + shift, p.y + shift, p.color))
    return PointSet(tuple(moved))


def is_general_position(s: PointSet) -> bool:
    """True iff all x coordinates are distinct and all y coordinates are distinct."""
    xs = {p.x for p in s}
    ys = {p.y for p in s}
    return len(xs) == len(s) and len(ys) == len(s)


# ---------------------------------------------------------------------------
# Point file format: one `x y color` per line, rationals written num/den,
# '#' starts a comment.  Round-trips bit-exactly.

def dump_points(s: PointSet) -> str:
    lines = [f"{p.x} {p.y} {p.color.value}" for p in s]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_points(text: str) -> PointSet:
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'x y color', got {raw!r}")
        x, y, c = parts
        if c not in ("R", "B"):
            raise ValueError(f"line {lineno}: color must be R or B, got {c!r}")
        pts.append(point(Fraction(x), Fraction(y), c))
    return PointSet(tuple(pts))


def load_points(path) -> PointSet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_points(fh.read())


def save_points(s: PointSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_points(s))
