"""Maximum strong matchings with rectangles: 1/4-approximations and oracles.

A strong matching is a set of pairwise-disjoint empty rectangles, each
spanned by two input points.  The monochromatic solver splits the candidate
family in two by which corner holds a defining point, solves the
piercing+corner structure of each half exactly, breaks the leftover point
contacts by a two-coloring, and keeps the better half.  The bichromatic
solver splits four ways and each quarter is solved exactly outright.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from rectmatch.errors import GuardError
from rectmatch.geometry import (
    Color,
    PointSet,
    Rect,
    candidate_bichromatic,
    candidate_monochromatic,
    empty_pairs,
    rect_from_pair,
)
from rectmatch.independent_set import (
    IndependentSet,
    RectFamily,
    build_graph,
    corner_elimination,
    forest_two_color,
    max_antichain,
    piercing_order,
)

ORACLE_GUARD_ENV = "RECTMATCH_ORACLE_GUARD"
DEFAULT_ORACLE_GUARD = 16


class MatchMode(Enum):
    MONO = "monochromatic"
    BI = "bichromatic"


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    mode: MatchMode

    def __post_init__(self):
        canon = tuple(sorted((min(i, j), max(i, j)) for i, j in self.pairs))
        object.__setattr__(self, "pairs", canon)
        used = [i for p in canon for i in p]
        if len(used) != len(set(used)):
            raise ValueError("a point appears in more than one pair")

    def __len__(self) -> int:
        return len(self.pairs)

    def covers(self, n: int) -> bool:
        return 2 * len(self.pairs) == n


@dataclass
class SolveReport:
    matching: Matching
    algorithm: str
    candidate_count: int
    family_sizes: tuple[int, ...]
    optimal_size: int | None = None
    ratio: Fraction | None = None


def oracle_guard(default: int = DEFAULT_ORACLE_GUARD) -> int:
    """Oracle point-count guard; the environment variable overrides."""
    value = os.environ.get(ORACLE_GUARD_ENV)
    if value is None:
        return default
    return int(value)


# ---------------------------------------------------------------------------
# Family splits

def _defining_at(f_base: PointSet, r: Rect, x, y) -> Color | None:
    """Color of a defining point of r sitting exactly at (x, y), if any."""
    for idx in (r.a, r.b):
        p = f_base[idx]
        if p.x == x and p.y == y:
            return p.color
    return None


def split_families_mono(f: RectFamily) -> tuple[RectFamily, RectFamily]:
    """Split same-color candidates: the first family takes blue rectangles
    with a defining point in the bottom-left corner and red ones with a
    defining point in the bottom-right corner; the second the mirror
    orientation.  Degenerate segments satisfy both corner descriptions, so
    they land in both families."""
    first, second = [], []
    for r in f.rects:
        bl = _defining_at(f.base, r, r.xmin, r.ymin)
        br = _defining_at(f.base, r, r.xmax, r.ymin)
        if bl is Color.BLUE or br is Color.RED:
            first.append(r)
        if br is Color.BLUE or bl is Color.RED:
            second.append(r)
    return RectFamily(f.base, tuple(first)), RectFamily(f.base, tuple(second))


def split_families_bi(f: RectFamily) -> tuple[RectFamily, RectFamily, RectFamily, RectFamily]:
    """Split mixed candidates by the color of the defining point in the
    bottom-left / bottom-right corner; segments may satisfy several."""
    fams: tuple[list[Rect], ...] = ([], [], [], [])
    for r in f.rects:
        bl = _defining_at(f.base, r, r.xmin, r.ymin)
        br = _defining_at(f.base, r, r.xmax, r.ymin)
        if bl is Color.BLUE:
            fams[0].append(r)
        if bl is Color.RED:
            fams[1].append(r)
        if br is Color.BLUE:
            fams[2].append(r)
        if br is Color.RED:
            fams[3].append(r)
    return tuple(RectFamily(f.base, tuple(rs)) for rs in fams)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Approximation pipeline

def exact_independent_rects(fam: RectFamily) -> IndependentSet:
    """Exact maximum piercing+corner-independent subfamily: eliminate corner
    pairs, then take a maximum antichain of the piercing order.  Member
    indices refer to `fam.rects`."""
    reduced = corner_elimination(fam)
    dag = piercing_order(reduced)
    anti = max_antichain(dag)
    back = {r.key: i for i, r in enumerate(fam.rects)}
    members = frozenset(back[reduced.rects[i].key] for i in anti.members)
    return IndependentSet(members, len(members))


def half_approx_family(fam: RectFamily) -> IndependentSet:
    """At least half of the family's maximum independent set, genuinely
    pairwise disjoint: solve the piercing+corner structure exactly, then
    two-color the remaining contact graph and keep the larger class."""
    anti = exact_independent_rects(fam)
    chosen = sorted(anti.members)
    sub = RectFamily(fam.base, tuple(fam.rects[i] for i in chosen))
    g = build_graph(sub)
    side_a, side_b = forest_two_color(g)
    side = side_a if len(side_a) >= len(side_b) else side_b
    members = frozenset(chosen[i] for i in side)
    return IndependentSet(members, len(members))


def _matching_from_rects(rects: Iterable[Rect], mode: MatchMode) -> Matching:
    return Matching(tuple(r.key for r in rects), mode)


def approx_mmrm(s: PointSet) -> SolveReport:
    """Monochromatic matching of size at least a quarter of the optimum."""
    candidates = candidate_monochromatic(s)
    f = RectFamily(s, tuple(candidates))
    fam1, fam2 = split_families_mono(f)
    best_rects: list[Rect] = []
    sizes = []
    best = None
    for fam in (fam1, fam2):
        ind = half_approx_family(fam)
        sizes.append(len(fam))
        if best is None or ind.certificate_size > best.certificate_size:
            best = ind
            best_rects = [fam.rects[i] for i in sorted(ind.members)]
    matching = _matching_from_rects(best_rects, MatchMode.MONO)
    return SolveReport(matching, "quarter_approx", len(candidates), tuple(sizes))


def approx_mbrm(s: PointSet) -> SolveReport:
    """Bichromatic matching of size at least a quarter of the optimum; each
    of the four corner families is solved exactly."""
    candidates = candidate_bichromatic(s)
    f = RectFamily(s, tuple(candidates))
    fams = split_families_bi(f)
    best_rects: list[Rect] = []
    sizes = []
    best = None
    for fam in fams:
        ind = exact_independent_rects(fam)
        sizes.append(len(fam))
        if best is None or ind.certificate_size > best.certificate_size:
            best = ind
            best_rects = [fam.rects[i] for i in sorted(ind.members)]
    matching = _matching_from_rects(best_rects, MatchMode.BI)
    return SolveReport(matching, "quarter_approx", len(candidates), tuple(sizes))


def with_oracle(s: PointSet, report: SolveReport, *, guard: int | None = None) -> SolveReport:
    """Attach the exact optimum and the achieved ratio when the instance is
    small enough for the oracle."""
    mode = report.matching.mode
    opt = brute_force_max_matching(s, mode, max_points=guard)
    report.optimal_size = len(opt)
    if report.optimal_size:
        report.ratio = Fraction(len(report.matching), report.optimal_size)
    return report


# ---------------------------------------------------------------------------
# Exact oracle

def _mode_pairs(s: PointSet, mode: MatchMode) -> list[tuple[int, int]]:
    same = mode is MatchMode.MONO
    return [
        (i, j) for i, j in empty_pairs(s)
        if (s[i].color is s[j].color) == same
    ]


def _box_conflict(s: PointSet, b1, b2) -> bool:
    """Conflict test on (xmin, xmax, ymin, ymax) tuples, mirroring
    classify_intersection: overlaps of positive area, crossings, and
    zero-area overlaps through an input point conflict; bare boundary
    touches do not."""
    lox, hix = max(b1[0], b2[0]), min(b1[1], b2[1])
    loy, hiy = max(b1[2], b2[2]), min(b1[3], b2[3])
    if lox > hix or loy > hiy:
        return False
    if lox < hix and loy < hiy:
        return True
    p1 = b1[0] <= b2[0] and b2[1] <= b1[1] and b2[2] <= b1[2] and b1[3] <= b2[3]
    p2 = b2[0] <= b1[0] and b1[1] <= b2[1] and b1[2] <= b2[2] and b2[3] <= b1[3]
    if p1 or p2:
        return True
    return any(lox <= p.x <= hix and loy <= p.y <= hiy for p in s)


class _SearchSpace:
    def __init__(self, s: PointSet, mode: MatchMode):
        self.s = s
        self.n = len(s)
        self.pairs = _mode_pairs(s, mode)
        self.box = {}
        self.partners = [[] for _ in range(self.n)]
        for i, j in self.pairs:
            r = rect_from_pair(s, i, j)
            self.box[(i, j)] = (r.xmin, r.xmax, r.ymin, r.ymax)
            self.partners[i].append(j)
            self.partners[j].append(i)
        for lst in self.partners:
            lst.sort()

    def box_of(self, i: int, j: int):
        return self.box[(i, j) if i < j else (j, i)]

    def conflicts(self, box, chosen) -> bool:
        # Candidate rectangles contain no third input point, so a zero-area
        # overlap through an input point would mean a shared endpoint, which
        # the vertex-disjointness of the search already rules out; the
        # point-scan branch of the general conflict test cannot fire here.
        x1, x2, y1, y2 = box
        for b1, b2, b3, b4 in chosen:
            lox = x1 if x1 > b1 else b1
            hix = x2 if x2 < b2 else b2
            if lox > hix:
                continue
            loy = y1 if y1 > b3 else b3
            hiy = y2 if y2 < b4 else b4
            if loy > hiy:
                continue
            if lox < hix and loy < hiy:
                return True
            if x1 <= b1 and b2 <= x2 and b3 <= y1 and y2 <= b4:
                return True
            if b1 <= x1 and x2 <= b2 and y1 <= b3 and b4 <= y2:
                return True
        return False


def brute_force_max_matching(
    s: PointSet,
    mode: MatchMode,
    *,
    max_points: int | None = None,
    forced_pairs: Sequence[tuple[int, int]] = (),
) -> Matching:
    """Exact maximum strong matching by depth-first pairing search.

    Processes the lowest unprocessed point first, trying partners in
    ascending order before leaving the point unmatched, so the first optimum
    found is the lexicographically least pair set among all maxima; a
    counting bound prunes branches that cannot beat the incumbent.

    `forced_pairs` pre-commits pairs (they count toward the result).
    Refuses instances larger than the guard (default 16, overridable via
    the RECTMATCH_ORACLE_GUARD environment variable or `max_points`).
    """
    limit = max_points if max_points is not None else oracle_guard()
    if len(s) > limit:
        raise GuardError(
            f"{len(s)} points exceeds the oracle guard of {limit}; raise "
            f"max_points or set {ORACLE_GUARD_ENV}"
        )
    space = _SearchSpace(s, mode)
    used = [False] * space.n
    chosen_boxes = []
    base_pairs = []
    pair_keys = set(space.pairs)
    for i, j in forced_pairs:
        key = (min(i, j), max(i, j))
        if key not in pair_keys:
            raise ValueError(f"forced pair {key} is not a candidate pair")
        box = space.box[key]
        if space.conflicts(box, chosen_boxes):
            raise ValueError(f"forced pair {key} conflicts with another forced pair")
        if used[key[0]] or used[key[1]]:
            raise ValueError(f"forced pair {key} reuses a point")
        used[key[0]] = used[key[1]] = True
        chosen_boxes.append(box)
        base_pairs.append(key)

    best_size = -1
    best_pairs: tuple[tuple[int, int], ...] = ()
    free_count = space.n - 2 * len(base_pairs)
    stack_pairs: list[tuple[int, int]] = []

    def search(lowest: int, matched: int, free: int) -> None:
        nonlocal best_size, best_pairs
        if matched + free // 2 <= best_size:
            return
        i = lowest
        while i < space.n and used[i]:
            i += 1
        if i == space.n:
            if matched > best_size:
                best_size = matched
                best_pairs = tuple(base_pairs + stack_pairs)
            return
        used[i] = True
        for j in space.partners[i]:
            if used[j]:
                continue
            box = space.box_of(i, j)
            if space.conflicts(box, chosen_boxes):
                continue
            used[j] = True
            chosen_boxes.append(box)
            stack_pairs.append((i, j) if i < j else (j, i))
            search(i + 1, matched + 1, free - 2)
            stack_pairs.pop()
            chosen_boxes.pop()
            used[j] = False
        search(i + 1, matched, free - 1)
        used[i] = False

    search(0, len(base_pairs), free_count)
    return Matching(best_pairs, mode)


def decide_perfect(
    s: PointSet,
    mode: MatchMode,
    *,
    max_points: int | None = None,
    forced_pairs: Sequence[tuple[int, int]] = (),
) -> bool:
    """Is there a perfect strong matching covering every point?

    Parity and, for the bichromatic mode, color counts are checked first;
    the same size guard as the maximum oracle applies.
    """
    limit = max_points if max_points is not None else oracle_guard()
    if len(s) > limit:
        raise GuardError(
            f"{len(s)} points exceeds the oracle guard of {limit}; raise "
            f"max_points or set {ORACLE_GUARD_ENV}"
        )
    if len(s) % 2 != 0:
        return False
    if mode is MatchMode.BI and s.count(Color.RED) != s.count(Color.BLUE):
        return False
    return _perfect_search_rec(s, mode, forced_pairs)


def _perfect_search_rec(s: PointSet, mode: MatchMode, forced_pairs) -> bool:
    space = _SearchSpace(s, mode)
    used = [False] * space.n
    chosen: list[tuple] = []
    pair_keys = set(space.pairs)
    for i, j in forced_pairs:
        key = (min(i, j), max(i, j))
        if key not in pair_keys:
            return False
        box = space.box[key]
        if used[key[0]] or used[key[1]] or space.conflicts(box, chosen):
            return False
        used[key[0]] = used[key[1]] = True
        chosen.append(box)

    # Explicit stack of (point, partner_position, box_or_None); avoids
    # recursion limits on large structured instances.
    stack: list[list] = []

    def next_free(after: int) -> int:
        i = after
        while i < space.n and used[i]:
            i += 1
        return i

    i = next_free(0)
    if i == space.n:
        return True
    stack.append([i, 0])
    used[i] = True
    while stack:
        frame = stack[-1]
        i, pos = frame
        partners = space.partners[i]
        placed = False
        while pos < len(partners):
            j = partners[pos]
            pos += 1
            if used[j]:
                continue
            box = space.box_of(i, j)
            if space.conflicts(box, chosen):
                continue
            frame[1] = pos
            frame.append(j)
            frame.append(box)
            used[j] = True
            chosen.append(box)
            nxt = next_free(i + 1)
            if nxt == space.n:
                return True
            stack.append([nxt, 0])
            used[nxt] = True
            placed = True
            break
        if placed:
            continue
        # Exhausted partners for i: unwind.
        used[i] = False
        stack.pop()
        if stack:
            top = stack[-1]
            j, box = top[2], top[3]
            used[j] = False
            chosen.pop()
            del top[2:]
    return False


def count_perfect_matchings(
    s: PointSet,
    mode: MatchMode,
    *,
    max_points: int | None = None,
    allowed_pairs: Sequence[tuple[int, int]] | None = None,
) -> int:
    """Number of distinct perfect strong matchings (guarded like the other
    oracles).  `allowed_pairs` restricts the usable pairs, for counting the
    matchings of a sub-structure whose blocking context lives elsewhere."""
    limit = max_points if max_points is not None else oracle_guard()
    if len(s) > limit:
        raise GuardError(
            f"{len(s)} points exceeds the oracle guard of {limit}"
        )
    if len(s) % 2 != 0:
        return 0
    if mode is MatchMode.BI and s.count(Color.RED) != s.count(Color.BLUE):
        return 0
    space = _SearchSpace(s, mode)
    if allowed_pairs is not None:
        keep = {(min(i, j), max(i, j)) for i, j in allowed_pairs}
        space.pairs = [p for p in space.pairs if p in keep]
        space.partners = [
            [j for j in partners if (min(i, j), max(i, j)) in keep]
            for i, partners in enumerate(space.partners)
        ]
    used = [False] * space.n
    chosen: list[tuple] = []
    count = 0

    def go(lowest: int) -> None:
        nonlocal count
        i = lowest
        while i < space.n and used[i]:
            i += 1
        if i == space.n:
            count += 1
            return
        used[i] = True
        for j in space.partners[i]:
            if used[j]:
                continue
            box = space.box_of(i, j)
            if space.conflicts(box, chosen):
                continue
            used[j] = True
            chosen.append(box)
            go(i + 1)
            chosen.pop()
            used[j] = False
        used[i] = False

    go(0)
    return count


# ---------------------------------------------------------------------------
# Verification and serialization

@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witnesses: tuple

    def __str__(self) -> str:
        flag = "pass" if self.ok else "FAIL"
        extra = f" {list(self.witnesses)}" if self.witnesses else ""
        return f"{self.name}: {flag}{extra}"


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[Check, ...]
    perfect: bool

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __str__(self) -> str:
        lines = [str(c) for c in self.checks]
        lines.append(f"perfect: {'yes' if self.perfect else 'no'}")
        return "\n".join(lines)


def verify_matching(s: PointSet, m: Matching) -> VerificationReport:
    """Check a claimed matching: pair validity and candidacy, the color rule
    of its mode, pairwise disjointness of the spanned rectangles, and report
    whether it is perfect.  Failures are recorded with witnesses, never
    raised."""
    bad_index = tuple(
        (i, j) for i, j in m.pairs
        if not (0 <= i < len(s) and 0 <= j < len(s) and i != j)
    )
    valid_pairs = [p for p in m.pairs if p not in set(bad_index)]
    empty = set(empty_pairs(s))
    not_candidates = tuple(p for p in valid_pairs if p not in empty)
    candidacy = Check(
        "pairs_are_candidates", not bad_index and not not_candidates,
        bad_index + not_candidates,
    )

    same = m.mode is MatchMode.MONO
    bad_color = tuple(
        (i, j) for i, j in valid_pairs
        if (s[i].color is s[j].color) != same
    )
    color = Check("color_rule", not bad_color, bad_color)

    rects = [rect_from_pair(s, i, j) for i, j in valid_pairs]
    overlaps = []
    for a in range(len(rects)):
        for b in range(a + 1, len(rects)):
            ra, rb = rects[a], rects[b]
            if _box_conflict(
                s,
                (ra.xmin, ra.xmax, ra.ymin, ra.ymax),
                (rb.xmin, rb.xmax, rb.ymin, rb.ymax),
            ):
                overlaps.append((valid_pairs[a], valid_pairs[b]))
    disjoint = Check("rects_pairwise_disjoint", not overlaps, tuple(overlaps))

    return VerificationReport(
        (candidacy, color, disjoint), perfect=m.covers(len(s))
    )


def report_to_dict(report: SolveReport) -> dict:
    return {
        "mode": report.matching.mode.value,
        "algorithm": report.algorithm,
        "pairs": [list(p) for p in report.matching.pairs],
        "size": len(report.matching),
        "optimal": report.optimal_size,
        "candidateCount": report.candidate_count,
        "familySizes": list(report.family_sizes),
    }


def report_to_json(report: SolveReport) -> str:
    return json.dumps(report_to_dict(report), indent=2) + "\n"


def matching_from_dict(d: dict) -> Matching:
    mode = MatchMode(d["mode"])
    return Matching(tuple((int(i), int(j)) for i, j in d["pairs"]), mode)
