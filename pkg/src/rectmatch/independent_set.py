"""Independent sets in families of empty rectangles.

A rectangle family lives over a base point set; every member must contain
exactly its two defining points.  The conflict structure splits by
intersection kind: piercing and corner conflicts form the subgraph that can
be solved exactly (corner pairs are eliminated one rectangle at a time, the
piercing leftovers form a strict partial order whose maximum antichain is
computed by minimum chain cover), while point contacts are handled later by
a two-coloring of what remains.  A branch-and-bound oracle provides ground
truth at desk scale.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from rectmatch.errors import ContractError, GuardError
from rectmatch.geometry import (
    IntersectionKind,
    PointSet,
    Rect,
    classify_intersection,
    contains_point,
    pierces,
)


@dataclass(frozen=True)
class RectFamily:
    base: PointSet
    rects: tuple[Rect, ...]

    def __post_init__(self):
        keys = set()
        for r in self.rects:
            if r.key in keys:
                raise ValueError(f"duplicate rectangle {r.key}")
            keys.add(r.key)

    @classmethod
    def checked(cls, base: PointSet, rects: Iterable[Rect]) -> "RectFamily":
        """Build a family, verifying each member contains only its two points."""
        rects = tuple(rects)
        for r in rects:
            for k, p in enumerate(base):
                if k != r.a and k != r.b and contains_point(r, p):
                    raise ValueError(
                        f"rect {r.key} is not empty: contains point {k} at ({p.x}, {p.y})"
                    )
        return cls(base, rects)

    def __len__(self) -> int:
        return len(self.rects)

    def keys(self) -> frozenset[tuple[int, int]]:
        return frozenset(r.key for r in self.rects)


@dataclass(frozen=True)
class IntersectionGraph:
    n: int
    edges: tuple[tuple[int, int, IntersectionKind], ...]

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class PiercingDag:
    """Arcs u -> v mean rectangle v pierces rectangle u; transitively closed."""

    n: int
    arcs: frozenset[tuple[int, int]]


@dataclass(frozen=True)
class IndependentSet:
    members: frozenset[int]
    certificate_size: int

    def __post_init__(self):
        if self.certificate_size != len(self.members):
            raise ValueError("certificate size disagrees with member count")


def pairwise_kinds(f: RectFamily) -> dict[tuple[int, int], IntersectionKind]:
    kinds = {}
    m = len(f.rects)
    for u in range(m):
        for v in range(u + 1, m):
            kinds[(u, v)] = classify_intersection(f.base, f.rects[u], f.rects[v])
    return kinds


def build_graph(f: RectFamily) -> IntersectionGraph:
    edges = tuple(
        (u, v, kind)
        for (u, v), kind in sorted(pairwise_kinds(f).items())
        if kind is not IntersectionKind.DISJOINT
    )
    return IntersectionGraph(len(f.rects), edges)


def gpc_subgraph(g: IntersectionGraph) -> IntersectionGraph:
    """Keep only piercing and corner edges."""
    kept = tuple(
        e for e in g.edges
        if e[2] in (IntersectionKind.PIERCING, IntersectionKind.CORNER)
    )
    return IntersectionGraph(g.n, kept)


def _crossing_keys(f: RectFamily, u: int, v: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """For a corner-intersecting pair, the defining pairs of the two
    rectangles that cross through the shared region: left point of one with
    right point of the other."""
    def left_right(r: Rect) -> tuple[int, int]:
        pa, pb = f.base[r.a], f.base[r.b]
        if (pa.x, pa.y) <= (pb.x, pb.y):
            return r.a, r.b
        return r.b, r.a

    l1, r1 = left_right(f.rects[u])
    l2, r2 = left_right(f.rects[v])
    k1 = (l1, r2) if l1 < r2 else (r2, l1)
    k2 = (l2, r1) if l2 < r1 else (r1, l2)
    return k1, k2


def complete_witness(f: RectFamily) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """A corner pair missing one of its crossing rectangles, or None."""
    keys = f.keys()
    for (u, v), kind in pairwise_kinds(f).items():
        if kind is IntersectionKind.CORNER:
            k1, k2 = _crossing_keys(f, u, v)
            if k1 not in keys or k2 not in keys:
                missing = k1 if k1 not in keys else k2
                return (u, v), missing
    return None


def verify_complete(f: RectFamily) -> bool:
    """True iff every corner-intersecting pair has both of its crossing
    rectangles present in the family."""
    return complete_witness(f) is None


def corner_elimination(
    f: RectFamily,
    on_step: Callable[[RectFamily], None] | None = None,
) -> RectFamily:
    """Discard one rectangle of each corner-intersecting pair until none
    remain, preserving the maximum independent set of the piercing+corner
    subgraph.  Requires a complete family.

    Deterministic rule: corner pairs are processed in lexicographic order of
    their defining-index pairs, and the rectangle whose defining pair is
    lexicographically larger is the one dropped.  `on_step` sees the family
    after each removal (test hook).
    """
    witness = complete_witness(f)
    if witness is not None:
        (u, v), missing = witness
        raise ContractError(
            f"family is not complete: corner pair {f.rects[u].key} / "
            f"{f.rects[v].key} lacks crossing rectangle {missing}"
        )
    kinds = pairwise_kinds(f)
    corner_pairs = {p for p, k in kinds.items() if k is IntersectionKind.CORNER}
    alive = set(range(len(f.rects)))
    while True:
        live_pairs = [
            (u, v) for (u, v) in corner_pairs if u in alive and v in alive
        ]
        if not live_pairs:
            break
        u, v = min(
            live_pairs,
            key=lambda p: tuple(sorted((f.rects[p[0]].key, f.rects[p[1]].key))),
        )
        drop = u if f.rects[u].key > f.rects[v].key else v
        alive.remove(drop)
        if on_step is not None:
            on_step(RectFamily(f.base, tuple(f.rects[i] for i in sorted(alive))))
    return RectFamily(f.base, tuple(f.rects[i] for i in sorted(alive)))


def piercing_order(f: RectFamily) -> PiercingDag:
    """Orient the piercing relation of a corner-free family into a strict
    partial order and verify it is one.

    An arc u -> v records that rectangle v pierces rectangle u (the pair
    necessarily intersects).  Mutual piercing would need two rectangles with
    identical projections, which distinct defining points rule out; if it is
    ever observed, or if transitivity or acyclicity fails, the comparability
    structure this solver relies on is broken and a ContractError reports
    the witness.
    """
    kinds = pairwise_kinds(f)
    for (u, v), kind in kinds.items():
        if kind is IntersectionKind.CORNER:
            raise ContractError(
                f"piercing_order requires a corner-free family; pair "
                f"{f.rects[u].key} / {f.rects[v].key} has a corner intersection"
            )
    m = len(f.rects)
    out = [0] * m  # bitmask of successors
    arcs = set()
    for u in range(m):
        for v in range(u + 1, m):
            fwd = pierces(f.rects[u], f.rects[v])  # v pierces u
            bwd = pierces(f.rects[v], f.rects[u])  # u pierces v
            if fwd and bwd:
                raise ContractError(
                    f"mutual piercing between {f.rects[u].key} and {f.rects[v].key}"
                )
            if fwd:
                arcs.add((u, v))
                out[u] |= 1 << v
            elif bwd:
                arcs.add((v, u))
                out[v] |= 1 << u
    for u in range(m):
        rest = out[u]
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if (out[v] >> u) & 1:
                raise ContractError(
                    f"piercing order has a cycle through "
                    f"{f.rects[u].key} and {f.rects[v].key}"
                )
            missing = out[v] & ~out[u] & ~(1 << u)
            if missing:
                w = (missing & -missing).bit_length() - 1
                raise ContractError(
                    f"piercing order not transitive on rectangles "
                    f"({f.rects[u].key}, {f.rects[v].key}, {f.rects[w].key})"
                )
    return PiercingDag(m, frozenset(arcs))


def _kuhn_matching(n: int, adj: Sequence[Sequence[int]]) -> dict[int, int]:
    """Maximum bipartite matching (left u -> right v) by augmenting paths."""
    match_right: dict[int, int] = {}
    match_left: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or try_augment(match_right[v], seen):
                match_right[v] = u
                match_left[u] = v
                return True
        return False

    for u in range(n):
        if adj[u]:
            try_augment(u, set())
    return match_left


def max_antichain(d: PiercingDag) -> IndependentSet:
    """A maximum antichain of the piercing order.

    Split every element into a left and a right copy, connect u_left to
    v_right for each arc u -> v, and take a maximum matching: the order's
    minimum chain cover has size n minus the matching, and by the chain
    decomposition that is also the maximum antichain size.  The antichain
    itself falls out of the matching's minimum vertex cover: keep the
    elements with neither copy covered.
    """
    n = d.n
    adj = [sorted(v for (u, v) in d.arcs if u == x) for x in range(n)]
    match_left = _kuhn_matching(n, adj)
    match_right = {v: u for u, v in match_left.items()}

    # Alternating reachability from unmatched left copies.
    reach_left = {u for u in range(n) if u not in match_left}
    reach_right: set[int] = set()
    frontier = list(reach_left)
    while frontier:
        u = frontier.pop()
        for v in adj[u]:
            if v in reach_right:
                continue
            if match_left.get(u) == v:
                continue
            reach_right.add(v)
            w = match_right.get(v)
            if w is not None and w not in reach_left:
                reach_left.add(w)
                frontier.append(w)

    # Vertex cover is (L \ reach_left) + (R ∩ reach_right); an element is in
    # the antichain iff neither of its copies is covered.
    members = frozenset(
        x for x in range(n)
        if (x in reach_left or x not in match_left) and x not in reach_right
    )
    if len(members) != n - len(match_left):
        raise ContractError(
            f"chain cover identity failed: antichain {len(members)}, "
            f"matching {len(match_left)}, n {n}"
        )
    for u in members:
        for v in members:
            if u != v and (u, v) in d.arcs:
                raise ContractError(f"antichain members {u}, {v} are comparable")
    return IndependentSet(members, len(members))


def _greedy_independent(n: int, adj_mask: list[int]) -> int:
    taken = 0
    forbidden = 0
    for v in sorted(range(n), key=lambda x: bin(adj_mask[x]).count("1")):
        if not (forbidden >> v) & 1:
            taken |= 1 << v
            forbidden |= adj_mask[v] | (1 << v)
    return taken


def mis_of_graph(n: int, conflict_pairs: Iterable[tuple[int, int]]) -> IndependentSet:
    """Exact maximum independent set of an arbitrary conflict graph by
    branch and bound (greedy seed, popcount bound, max-degree pivot)."""
    adj = [0] * n
    for u, v in conflict_pairs:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    seed = _greedy_independent(n, adj)
    best_mask = seed
    best_size = bin(seed).count("1")

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def expand(cand: int, cur_mask: int, cur_size: int) -> None:
        nonlocal best_mask, best_size
        if cur_size + popcount(cand) <= best_size:
            return
        if cand == 0:
            best_mask, best_size = cur_mask, cur_size
            return
        # Pivot on the candidate with most candidate-neighbours.
        pivot, pivot_deg = -1, -1
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            deg = popcount(adj[v] & cand)
            if deg > pivot_deg:
                pivot, pivot_deg = v, deg
        bit = 1 << pivot
        expand(cand & ~bit & ~adj[pivot], cur_mask | bit, cur_size + 1)
        expand(cand & ~bit, cur_mask, cur_size)

    expand((1 << n) - 1, 0, 0)
    members = frozenset(v for v in range(n) if (best_mask >> v) & 1)
    return IndependentSet(members, best_size)


def brute_force_mis(
    f: RectFamily, *, max_rects: int = 32, force: bool = False
) -> IndependentSet:
    """Exact maximum independent set of the full intersection graph, where
    every non-disjoint pair conflicts.  Guarded: refuses families larger
    than `max_rects` unless `force` is set."""
    if len(f.rects) > max_rects and not force:
        raise GuardError(
            f"{len(f.rects)} rectangles exceeds the oracle guard of "
            f"{max_rects}; pass force=True to run anyway"
        )
    conflicts = [
        (u, v) for (u, v), k in pairwise_kinds(f).items()
        if k is not IntersectionKind.DISJOINT
    ]
    result = mis_of_graph(len(f.rects), conflicts)
    conflict_set = set(conflicts)
    for u in result.members:
        for v in result.members:
            if u < v and (u, v) in conflict_set:
                raise ContractError(f"oracle output not independent: {u}, {v}")
    return result


def forest_two_color(g: IntersectionGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Proper 2-coloring of an acyclic graph: (even layer, odd layer) per
    BFS from each component's least vertex.  A cycle contradicts the
    structural guarantee of the callers and raises with the cycle."""
    adj = g.adjacency()
    color: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    for start in range(g.n):
        if start in color:
            continue
        color[start] = 0
        parent[start] = None
        queue = [start]
        while queue:
            u = queue.pop(0)
            for v in sorted(adj[u]):
                if v not in color:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v and parent.get(v) != u:
                    cycle = _reconstruct_cycle(u, v, parent)
                    raise ContractError(
                        f"conflict graph contains a cycle: {cycle}"
                    )
    side_a = tuple(v for v in range(g.n) if color.get(v, 0) == 0)
    side_b = tuple(v for v in range(g.n) if color.get(v) == 1)
    return side_a, side_b


def _reconstruct_cycle(u: int, v: int, parent: dict[int, int | None]) -> list[int]:
    def path_to_root(x: int) -> list[int]:
        out = [x]
        while parent.get(out[-1]) is not None:
            out.append(parent[out[-1]])
        return out

    pu, pv = path_to_root(u), path_to_root(v)
    common = set(pu) & set(pv)
    cut_u = next(i for i, x in enumerate(pu) if x in common)
    cut_v = next(i for i, x in enumerate(pv) if x in common)
    return pu[: cut_u + 1] + pv[:cut_v][::-1]


def dump_edges(g: IntersectionGraph) -> str:
    """Debug dump: one `i j KIND` line per edge."""
    return "".join(f"{u} {v} {k.name}\n" for u, v, k in g.edges)
