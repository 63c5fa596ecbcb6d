from itertools import combinations

import pytest

from rectmatch.errors import ContractError
from rectmatch.geometry import (
    Color,
    PointSet,
    candidate_monochromatic,
    empty_pairs,
    is_general_position,
    perturb,
)
from rectmatch.matching import (
    MatchMode,
    brute_force_max_matching,
    count_perfect_matchings,
    decide_perfect,
)
from rectmatch.gadgets import (
    Formula,
    LegAnchor,
    blocking_gadget,
    build_gadget,
    build_layout,
    clause_gadget,
    compile_planar_1in3,
    eval_one_in_three,
    forced_variable_pairs,
    formula_from_dict,
    formula_to_dict,
    greens_of,
    monochromatize,
    bichromatize,
    one_in_three_satisfiable,
    random_instance,
    red_vertical_pairs,
    sidecar_to_dict,
    variable_gadget,
    variable_matching_pairs,
)

BIG = 10 ** 7


def formula(vars, *clauses):
    return formula_from_dict({
        "variables": list(vars),
        "clauses": [
            {"literals": [{"var": v, "neg": bool(n)} for v, n in lits], "side": side}
            for lits, side in clauses
        ],
    })


class TestRandomInstance:
    def test_empty(self):
        assert len(random_instance(0, 5, 0.5, seed=1)) == 0

    def test_deterministic(self):
        a = random_instance(9, 10, 0.3, seed=42)
        b = random_instance(9, 10, 0.3, seed=42)
        assert a == b
        c = random_instance(9, 10, 0.3, seed=43)
        assert a != c

    def test_full_grid(self):
        s = random_instance(16, 3, 0.5, seed=7)
        assert len(s) == 16

    def test_infeasible(self):
        with pytest.raises(ValueError):
            random_instance(17, 3, 0.5, seed=7)


class TestBlockingGadget:
    def test_exact_coordinates(self):
        s = blocking_gadget()
        coords = {(int(p.x), int(p.y)) for p in s}
        assert coords == {
            (0, 0), (5, 0), (5, 5), (0, 5),
            (1, 3), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (4, 2),
        }
        assert all(p.color is Color.BLUE for p in s)

    def test_scaled_translated(self):
        s = blocking_gadget(origin=(10, 20), scale=2, color=Color.RED)
        assert (min(p.x for p in s), min(p.y for p in s)) == (10, 20)
        assert (max(p.x for p in s), max(p.y for p in s)) == (20, 30)

    def test_perfect(self):
        assert decide_perfect(blocking_gadget(), MatchMode.MONO)

    def test_oracle_finds_six_pairs(self):
        m = brute_force_max_matching(blocking_gadget(), MatchMode.MONO)
        assert len(m) == 6

    def test_all_outer_subset_removals_imperfect(self):
        s = blocking_gadget()
        outer = list(range(4))
        removed_count = 0
        for r in range(1, 5):
            for drop in combinations(outer, r):
                kept = tuple(
                    p for i, p in enumerate(s) if i not in set(drop)
                )
                assert not decide_perfect(PointSet(kept), MatchMode.MONO)
                removed_count += 1
        assert removed_count == 15


class TestVariableGadget:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_point_count(self, d):
        pts, segs = variable_gadget(d)
        assert len(pts) == 4 + 6 * d
        assert len(segs) == len(pts)

    def test_numbering_starts_top_left(self):
        pts, _ = variable_gadget(1)
        assert pts[0] == (0, 4)
        assert pts[1] == (2, 4)
        assert pts[-1] == (0, 2)

    def test_spacing(self):
        pts, segs = variable_gadget(2)
        for i, j in segs:
            (x1, y1), (x2, y2) = pts[i], pts[j]
            assert abs(x1 - x2) + abs(y1 - y2) == 2

    @pytest.mark.parametrize("d", [1, 2])
    def test_exactly_two_perfect_matchings_after_fill(self, d):
        # Matchings of the boundary points using the pairs that survive the
        # red fill (exactly the consecutive-pair segments).
        pts, segs = variable_gadget(d)
        g = build_gadget(pts, segs, {"recipe": "variable", "degree": d})
        assert count_perfect_matchings(
            g.blues(), MatchMode.MONO, max_points=BIG,
            allowed_pairs=g.allowed_segments,
        ) == 2

    def test_the_two_matchings_are_the_cyclic_ones(self):
        pts, segs = variable_gadget(1)
        g = build_gadget(pts, segs, {"recipe": "variable"})
        for assignment in (True, False):
            forced = variable_matching_pairs(1, assignment)
            assert decide_perfect(g.points, MatchMode.MONO, max_points=BIG,
                                  forced_pairs=forced)


class TestRedFill:
    def fill_variable(self):
        pts, segs = variable_gadget(1)
        return build_gadget(pts, segs, {"recipe": "variable"})

    def test_candidates_equal_designated_segments(self):
        g = self.fill_variable()
        nb = g.blue_count
        blue_pairs = sorted(
            r.key for r in candidate_monochromatic(g.points)
            if r.key[0] < nb and r.key[1] < nb
        )
        assert blue_pairs == sorted(g.allowed_segments)

    def test_single_segment_survives(self):
        g = build_gadget([(0, 0), (0, 1), (1, 0), (2, 1)], [(0, 1)], {})
        nb = g.blue_count
        blue_pairs = [
            r.key for r in candidate_monochromatic(g.points)
            if r.key[0] < nb and r.key[1] < nb
        ]
        assert blue_pairs == [(0, 1)]

    def test_red_vertical_matching(self):
        g = self.fill_variable()
        pairs = red_vertical_pairs(g)
        reds = [i for i, p in enumerate(g.points) if p.color is Color.RED]
        assert sorted(i for pair in pairs for i in pair) == reds
        # the vertical red pairing coexists with a full blue matching
        from rectmatch.gadgets import variable_matching_pairs
        forced = pairs + variable_matching_pairs(1, True)
        assert decide_perfect(
            g.points, MatchMode.MONO, max_points=BIG, forced_pairs=forced
        )

    def test_reds_alone_perfect(self):
        g = self.fill_variable()
        reds = PointSet(tuple(p for p in g.points if p.color is Color.RED))
        assert decide_perfect(reds, MatchMode.MONO, max_points=BIG)

    def test_non_integer_rejected(self):
        from fractions import Fraction
        with pytest.raises(ValueError):
            from rectmatch.gadgets import red_fill
            red_fill([(Fraction(1, 2), 0)], [])


class TestClauseGadget:
    def test_anchor_validation(self):
        with pytest.raises(ValueError):
            LegAnchor(2, 4, number=3, positive=True, side="above")
        LegAnchor(2, 4, number=2, positive=True, side="above")
        with pytest.raises(ValueError):
            clause_gadget([
                LegAnchor(2, 4, 2, True, "above"),
                LegAnchor(4, 4, 3, False, "above"),
                LegAnchor(8, 4, 5, False, "above"),
            ])  # middle anchor only 2 away

    def test_point_and_segment_counts(self):
        anchors = [
            LegAnchor(2, 4, 2, True, "above"),
            LegAnchor(10, 4, 2, True, "above"),
            LegAnchor(20, 4, 2, True, "above"),
        ]
        pts, segs = clause_gadget(anchors)
        assert len(pts) == 18
        assert len(set(pts)) == 18
        assert len(segs) == 19


def truth_table_holds(g, f, names):
    for bits in range(8):
        asg = {names[k]: bool((bits >> k) & 1) for k in range(3)}
        forced = forced_variable_pairs(g, asg)
        got = decide_perfect(
            g.points, MatchMode.MONO, max_points=BIG, forced_pairs=forced
        )
        want = eval_one_in_three(f, asg)
        if got != want:
            return False, asg
    return True, None


class TestClauseTruthTable:
    def test_all_positive_above(self):
        f = formula("uvw", ([("u", 0), ("v", 0), ("w", 0)], "above"))
        g = compile_planar_1in3(f)
        ok, bad = truth_table_holds(g, f, "uvw")
        assert ok, bad

    def test_mixed_signs_below(self):
        f = formula("uvw", ([("u", 1), ("v", 0), ("w", 1)], "below"))
        g = compile_planar_1in3(f)
        ok, bad = truth_table_holds(g, f, "uvw")
        assert ok, bad


class TestTwoClauseComposition:
    def test_truth_table_over_both_clauses(self):
        # Nested same-side pair; forcing all four variables must reproduce
        # the one-in-three evaluation of the whole formula.
        f = formula("uvwx",
                    ([("u", 0), ("v", 1), ("x", 0)], "above"),
                    ([("v", 0), ("w", 0), ("x", 1)], "above"))
        g = compile_planar_1in3(f)
        names = "uvwx"
        for bits in range(16):
            asg = {names[k]: bool((bits >> k) & 1) for k in range(4)}
            got = decide_perfect(
                g.points, MatchMode.MONO, max_points=BIG,
                forced_pairs=forced_variable_pairs(g, asg),
            )
            assert got == eval_one_in_three(f, asg), asg

    def test_nested_below_side(self):
        f = formula("uvwx",
                    ([("u", 1), ("v", 0), ("x", 1)], "below"),
                    ([("v", 1), ("w", 1), ("x", 0)], "below"))
        g = compile_planar_1in3(f)
        assert decide_perfect(g.points, MatchMode.MONO, max_points=BIG) \
            == one_in_three_satisfiable(f)


class TestCompile:
    def test_single_clause_satisfiable(self):
        f = formula("uvw", ([("u", 0), ("v", 0), ("w", 0)], "above"))
        g = compile_planar_1in3(f)
        assert decide_perfect(g.points, MatchMode.MONO, max_points=BIG)

    def test_crossing_layout_rejected(self):
        f = formula("uvwx",
                    ([("u", 0), ("v", 0), ("w", 0)], "above"),
                    ([("v", 0), ("w", 0), ("x", 0)], "above"))
        with pytest.raises(ValueError, match="cross"):
            compile_planar_1in3(f)

    def test_unsat_two_clause(self):
        f = formula("uvw",
                    ([("u", 0), ("v", 0), ("w", 0)], "above"),
                    ([("u", 1), ("v", 1), ("w", 1)], "below"))
        assert not one_in_three_satisfiable(f)
        g = compile_planar_1in3(f)
        assert not decide_perfect(g.points, MatchMode.MONO, max_points=BIG)

    def test_grid_bound_reported(self):
        f = formula("uvw", ([("u", 0), ("v", 0), ("w", 0)], "above"))
        g = compile_planar_1in3(f)
        n = g.provenance["gridN"]
        assert all(0 <= p.x <= n and 0 <= p.y <= n for p in g.points)

    def test_formula_round_trip(self):
        f = formula("uvw", ([("u", 0), ("v", 1), ("w", 0)], "below"))
        assert formula_from_dict(formula_to_dict(f)) == f

    def test_sidecar_shape(self):
        pts, segs = variable_gadget(1)
        g = build_gadget(pts, segs, {"recipe": "variable"})
        d = sidecar_to_dict(g)
        assert set(d) == {"allowedSegments", "provenance"}
        assert d["provenance"]["blueCount"] == 10


class TestPerturbOnGadgets:
    def test_matchable_structure_preserved(self):
        # The shear keeps the blue pair relation identical and the red
        # vertical pairs matchable; blocked blue pairs stay blocked.
        pts, segs = variable_gadget(1)
        g = build_gadget(pts, segs, {"recipe": "variable"})
        n = g.provenance["gridN"]
        s, sp = g.points, perturb(g.points, n)

        def blue_pairs(ps):
            return {
                (i, j) for i, j in empty_pairs(ps)
                if ps[i].color is Color.BLUE and ps[j].color is Color.BLUE
            }

        assert blue_pairs(s) == blue_pairs(sp) == set(g.allowed_segments)
        assert set(red_vertical_pairs(g)) <= set(empty_pairs(sp))

    def test_general_position_after(self):
        pts, segs = variable_gadget(2)
        g = build_gadget(pts, segs, {"recipe": "variable"})
        assert is_general_position(perturb(g.points, g.provenance["gridN"]))


MICRO_BLUES = [(0, 0), (0, 1), (1, 0), (1, 1)]
MICRO_SEGS = [(0, 1), (2, 3)]


class TestMonochromatize:
    def micro(self):
        return build_gadget(MICRO_BLUES, MICRO_SEGS, {"recipe": "micro"})

    def test_single_cluster_alone_perfect(self):
        g = self.micro()
        mono = monochromatize(g)
        nb = g.blue_count
        cluster = PointSet(mono.points[nb:nb + 12])
        assert decide_perfect(cluster, MatchMode.MONO)

    def test_all_one_color(self):
        mono = monochromatize(self.micro())
        assert all(p.color is Color.BLUE for p in mono)

    def test_perfectness_preserved(self):
        g = self.micro()
        assert decide_perfect(g.points, MatchMode.MONO, max_points=BIG)
        mono = monochromatize(g)
        assert decide_perfect(mono, MatchMode.MONO, max_points=BIG)

    def test_imperfectness_preserved(self):
        g = build_gadget(
            MICRO_BLUES + [(3, 0), (3, 1), (0, 3)],
            MICRO_SEGS + [(4, 5)],
            {"recipe": "micro-odd"},
        )
        assert not decide_perfect(g.points, MatchMode.MONO, max_points=BIG)
        assert not decide_perfect(monochromatize(g), MatchMode.MONO, max_points=BIG)

    def test_desk_scale_variable_gadget(self):
        pts, segs = variable_gadget(1)
        g = build_gadget(pts, segs, {"recipe": "variable"})
        mono = monochromatize(g)
        assert decide_perfect(mono, MatchMode.MONO, max_points=BIG)

    def test_escapes_only_via_outer_points(self):
        g = self.micro()
        mono = monochromatize(g)
        nb = g.blue_count
        for i, j in empty_pairs(mono):
            oi = -1 if i < nb else (i - nb) // 12
            oj = -1 if j < nb else (j - nb) // 12
            if oi == oj:
                continue
            for k, o in ((i, oi), (j, oj)):
                if o >= 0:
                    assert (k - nb) % 12 <= 3


class TestBichromatize:
    def micro(self):
        return build_gadget(MICRO_BLUES, MICRO_SEGS, {"recipe": "micro"})

    def test_cluster_alone(self):
        g = self.micro()
        bi = bichromatize(g)
        nb = g.blue_count
        cluster = PointSet(bi.points[nb:nb + 8])
        assert count_perfect_matchings(cluster, MatchMode.BI) == 2

    def test_general_position(self):
        assert is_general_position(bichromatize(self.micro()))

    def test_each_segment_gets_one_red(self):
        g = self.micro()
        bi = bichromatize(g)
        for i, j in g.allowed_segments:
            assert {bi[i].color, bi[j].color} == {Color.RED, Color.BLUE}

    def test_perfectness_preserved(self):
        g = self.micro()
        assert decide_perfect(bichromatize(g), MatchMode.BI, max_points=BIG)

    def test_imperfectness_preserved(self):
        g = build_gadget(
            MICRO_BLUES + [(3, 0), (3, 1), (0, 3)],
            MICRO_SEGS + [(4, 5)],
            {"recipe": "micro-odd"},
        )
        assert not decide_perfect(bichromatize(g), MatchMode.BI, max_points=BIG)

    def test_desk_scale_variable_gadget(self):
        pts, segs = variable_gadget(1)
        g = build_gadget(pts, segs, {"recipe": "variable"})
        assert decide_perfect(bichromatize(g), MatchMode.BI, max_points=BIG)

    def test_cluster_reds_never_reach_outside(self):
        g = self.micro()
        bi = bichromatize(g)
        nb = g.blue_count
        for i, j in empty_pairs(bi):
            oi = -1 if i < nb else (i - nb) // 8
            oj = -1 if j < nb else (j - nb) // 8
            if oi == oj:
                continue
            for k, o in ((i, oi), (j, oj)):
                if o >= 0:
                    assert bi[k].color is Color.BLUE


class TestLayoutValidation:
    def test_two_middles_rejected(self):
        f = formula("uvwxy",
                    ([("u", 0), ("w", 0), ("y", 0)], "above"),
                    ([("u", 1), ("w", 1), ("y", 1)], "above"))
        with pytest.raises(ValueError):
            build_layout(f)

    def test_nested_ok(self):
        f = formula("uvwx",
                    ([("u", 0), ("v", 1), ("x", 0)], "above"),
                    ([("v", 0), ("w", 0), ("x", 1)], "above"))
        layout = build_layout(f)
        assert layout.levels[0] == 1 and layout.levels[1] == 0

    def test_opposite_sides_never_cross(self):
        f = formula("uvw",
                    ([("u", 0), ("v", 0), ("w", 0)], "above"),
                    ([("u", 1), ("v", 1), ("w", 1)], "below"))
        build_layout(f)
