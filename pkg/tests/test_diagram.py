"""Diagram construction, states, adequacy graphs, and twist editing."""

import itertools
import json
import random

import pytest

from skeinkit import (
    DiagramError,
    LinkDiagram,
    PDSyntaxError,
    State,
    TwistRegion,
    apply_state,
    is_adequate,
    is_minus_adequate,
    minus_graph,
    parse_pd,
    plus_graph,
    pretzel,
    reduced_minus_graph,
    relabel_arcs,
    set_twists,
    smooth_region,
)

UNKNOT = LinkDiagram((), free_loops=1)


def pd_text(diagram: LinkDiagram) -> str:
    body = ",".join("X[%d,%d,%d,%d]" % x for x in diagram.crossings)
    return f"PD[{body}]"


def is_alternating(diagram: LinkDiagram) -> bool:
    """Each arc must leave one crossing over and enter the next under.

    Slots 0 and 2 lie on the under-strand, 1 and 3 on the over-strand, so
    an arc alternates exactly when its two occurrences have different slot
    parities.
    """
    parity: dict[int, list[int]] = {}
    for x in diagram.crossings:
        for slot, arc in enumerate(x):
            parity.setdefault(arc, []).append(slot % 2)
    return all(sorted(p) == [0, 1] for p in parity.values())


def graph_canon(graph):
    """Canonical form of a small multigraph under vertex permutation."""
    n = graph.vertex_count
    edges = [(u, v) for u, v, _ in graph.edges]
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in edges))
        if best is None or key < best:
            best = key
    return (n, best)


class TestValidation:
    def test_arc_label_appearing_three_times(self):
        with pytest.raises(DiagramError, match="exactly twice"):
            LinkDiagram(((1, 1, 2, 2), (2, 3, 3, 4)))

    def test_crossing_needs_four_labels(self):
        with pytest.raises(DiagramError, match="4 arc labels"):
            LinkDiagram(((1, 2, 3),))  # type: ignore[arg-type]

    def test_duplicate_region_ids(self):
        with pytest.raises(DiagramError, match="duplicate"):
            LinkDiagram(
                ((1, 1, 2, 2), (3, 3, 4, 4)),
                (TwistRegion(1, (0,), 1), TwistRegion(1, (1,), 1)),
            )

    def test_regions_must_be_disjoint(self):
        with pytest.raises(DiagramError, match="two twist regions"):
            LinkDiagram(
                ((1, 1, 2, 2),),
                (TwistRegion(1, (0,), 1), TwistRegion(2, (0,), 1)),
            )

    def test_count_must_match_chain_length(self):
        with pytest.raises(DiagramError, match="declares"):
            LinkDiagram(((1, 1, 2, 2),), (TwistRegion(1, (0,), 2),))

    def test_positive_bigon_is_not_a_twist_region(self):
        # Crossings 0 and 1 share arcs {2, 3} but only through B-pairs, so
        # stacking them is a positive twist and must be rejected.
        crossings = ((1, 2, 3, 4), (2, 5, 6, 3), (4, 1, 5, 6))
        with pytest.raises(DiagramError, match="negative-twist bigon"):
            LinkDiagram(crossings, (TwistRegion(1, (0, 1), 2),))
        LinkDiagram(crossings)  # fine without the bogus region

    def test_rails_must_sit_on_two_through_arcs(self):
        with pytest.raises(DiagramError, match="rails"):
            LinkDiagram(
                ((1, 1, 2, 2),),
                (TwistRegion(1, (), 0, rails=((0, 0), (0, 2), (0, 1), (0, 3))),),
            )

    def test_free_loops_nonnegative(self):
        with pytest.raises(DiagramError, match="free_loops"):
            LinkDiagram((), free_loops=-1)


class TestPretzel:
    def test_one_crossing_unknot_shape(self):
        d = pretzel([1])
        assert d.crossing_count == 1
        x = d.crossings[0]
        assert x[0] == x[1] and x[2] == x[3]  # the X[1,1,2,2] pattern

    def test_trefoil_counts(self):
        d = pretzel([1, 1, 1])
        assert d.crossing_count == 3
        assert len(d.twist_regions) == 3
        assert [r.count for r in d.twist_regions] == [1, 1, 1]

    def test_large_pretzel_is_alternating(self):
        d = pretzel([8, 6, 3])
        assert d.crossing_count == 17
        assert is_alternating(d)
        assert [r.count for r in d.twist_regions] == [8, 6, 3]
        for reg in d.twist_regions:
            assert list(reg.crossings) == sorted(reg.crossings)

    def test_every_positive_pretzel_is_alternating(self):
        for counts in ([2, 3], [1, 2, 3], [4, 1, 1, 2], [5]):
            assert is_alternating(pretzel(counts))

    def test_zero_region_is_materialized(self):
        d = pretzel([2, 0, 2])
        assert d.crossing_count == 4
        reg = d.region(2)
        assert reg.count == 0 and reg.crossings == ()
        assert reg.rails is not None
        assert d.free_loops == 0

    def test_all_zero_pretzel_is_unlink(self):
        d = pretzel([0, 0, 0])
        assert d.crossing_count == 0
        assert d.free_loops == 3
        assert [r.count for r in d.twist_regions] == [0, 0, 0]

    def test_single_zero_region(self):
        d = pretzel([0])
        assert d.crossing_count == 0 and d.free_loops == 1

    def test_name(self):
        assert pretzel([8, 6, 3]).name == "P(8,6,3)"
        assert pretzel([2], name="clasp").name == "clasp"

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(DiagramError, match="at least one"):
            pretzel([])
        with pytest.raises(DiagramError, match="nonnegative"):
            pretzel([2, -1])


class TestParsePD:
    def test_hopf_auto_detects_one_region(self):
        d = parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]")
        assert d.crossing_count == 2
        assert len(d.twist_regions) == 1
        assert d.twist_regions[0].crossings == (0, 1)

    def test_arity_error(self):
        with pytest.raises(PDSyntaxError, match="4 arc labels"):
            parse_pd("PD[X[1,2,3]]")

    def test_curl_is_valid(self):
        d = parse_pd("PD[X[1,1,2,2]]")
        assert d.crossing_count == 1
        assert len(d.twist_regions) == 1

    def test_position_reporting(self):
        with pytest.raises(PDSyntaxError, match="position 0"):
            parse_pd("QD[X[1,1,2,2]]")
        err = None
        try:
            parse_pd("PD[X[1,1,2,a]]")
        except PDSyntaxError as e:
            err = e
        assert err is not None and err.position == 11

    def test_trailing_input(self):
        with pytest.raises(PDSyntaxError, match="trailing"):
            parse_pd("PD[X[1,1,2,2]] junk")

    def test_multiplicity_violation(self):
        with pytest.raises(DiagramError, match="appears 3 times"):
            parse_pd("PD[X[1,1,2,2],X[2,3,3,4],X[4,5,5,6]]")

    def test_whitespace_tolerated(self):
        d = parse_pd("  PD[ X[ 1, 4 ,2,3]\n, X[3,2,4,1] ]  ")
        assert d.crossing_count == 2

    def test_empty_link(self):
        d = parse_pd("PD[]")
        assert d.crossing_count == 0 and d.free_loops == 0

    def test_pretzel_round_trip_through_pd(self):
        src = pretzel([2, 2, 2])
        d = parse_pd(pd_text(src))
        assert sorted(r.count for r in d.twist_regions) == [2, 2, 2]
        chains = {r.crossings for r in d.twist_regions}
        assert chains == {r.crossings for r in src.twist_regions}

    def test_explicit_regions(self):
        d = parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]", regions=[[0, 1]])
        assert len(d.twist_regions) == 1
        d2 = parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]", regions=[])
        assert d2.twist_regions == ()

    def test_json_round_trip(self):
        for d in (pretzel([2, 0, 2]), pretzel([3, 1]), UNKNOT):
            assert LinkDiagram.from_json(d.to_json()) == d
        blob = json.loads(pretzel([2, 0, 2]).to_json())
        assert blob["regions"][1]["count"] == 0


class TestApplyState:
    def test_crossingless_unknot(self):
        assert apply_state(UNKNOT, State({})) == 1

    def test_curl_states(self):
        d = parse_pd("PD[X[1,1,2,2]]")
        assert apply_state(d, State.all_plus(d)) == 2
        assert apply_state(d, State.all_minus(d)) == 1

    def test_trefoil_states(self):
        d = pretzel([1, 1, 1])
        assert apply_state(d, State.all_minus(d)) == 3
        assert apply_state(d, State.all_plus(d)) == 2

    def test_pretzel_minus_state_counts_regions(self):
        # The all-negative state of a positive pretzel passes every region
        # straight through, leaving one circle per region.
        for counts in ([2, 3], [2, 2, 2], [8, 6, 3], [1, 2, 3, 4]):
            d = pretzel(counts)
            assert apply_state(d, State.all_minus(d)) == len(counts)

    def test_plain_mapping_accepted(self):
        d = pretzel([1, 1, 1])
        assert apply_state(d, {0: -1, 1: -1, 2: 1}) == 2

    def test_partial_state_rejected(self):
        d = pretzel([1, 1, 1])
        with pytest.raises(DiagramError, match="does not assign"):
            apply_state(d, {0: -1, 1: -1})

    def test_extra_assignment_rejected(self):
        with pytest.raises(DiagramError, match="missing crossing"):
            apply_state(parse_pd("PD[X[1,1,2,2]]"), {0: 1, 5: 1})

    def test_bad_value_rejected(self):
        with pytest.raises(DiagramError, match="use -1 or"):
            apply_state(parse_pd("PD[X[1,1,2,2]]"), {0: 0})

    def test_colored_state_rejected(self):
        d = parse_pd("PD[X[1,1,2,2]]")
        with pytest.raises(DiagramError, match="colored"):
            apply_state(d, State({0: 1}, color=2))

    def test_relabel_invariance(self):
        rng = random.Random(11)
        d = pretzel([2, 1, 3])
        arcs = sorted(d.arcs())
        shuffled = arcs[:]
        rng.shuffle(shuffled)
        mapping = dict(zip(arcs, (a + 100 for a in shuffled)))
        d2 = relabel_arcs(d, mapping)
        for _ in range(20):
            s = {i: rng.choice((-1, 1)) for i in range(d.crossing_count)}
            assert apply_state(d, s) == apply_state(d2, s)

    def test_relabel_must_be_injective(self):
        with pytest.raises(DiagramError, match="injective"):
            relabel_arcs(pretzel([1, 1]), {1: 2})


class TestStateGraphs:
    def test_minus_graph_shape(self):
        g = minus_graph(pretzel([2, 2, 2]))
        assert g.vertex_count == 3
        assert len(g.edges) == 6
        assert not g.has_loop

    def test_reduced_merges_parallel_edges(self):
        g = reduced_minus_graph(pretzel([2, 2, 2]))
        assert g.reduced and len(g.edges) == 3
        # each surviving edge keeps the smallest crossing id of its class
        assert sorted(cid for _, _, cid in g.edges) == [0, 2, 4]

    def test_reduced_graph_independent_of_twisting(self):
        forms = {
            graph_canon(reduced_minus_graph(pretzel(c)))
            for c in ([2, 2, 2], [3, 4, 2], [5, 2, 3])
        }
        assert len(forms) == 1

    def test_two_region_pretzel_graph(self):
        g = minus_graph(pretzel([2, 3]))
        assert g.vertex_count == 2 and len(g.edges) == 5
        assert len(reduced_minus_graph(pretzel([2, 3])).edges) == 1

    def test_curl_is_one_sided(self):
        d = parse_pd("PD[X[1,1,2,2]]")
        assert not is_minus_adequate(d)
        assert not plus_graph(d).has_loop
        assert not is_adequate(d)

    def test_reduced_alternating_pretzel_is_adequate(self):
        assert is_adequate(pretzel([2, 3, 2]))
        assert is_adequate(pretzel([8, 6, 3]))

    def test_crossingless_unknot_is_adequate(self):
        assert is_adequate(UNKNOT)
        assert minus_graph(UNKNOT).vertex_count == 1

    def test_single_region_closure_is_plus_adequate_only(self):
        # P(k) closes a lone twist region on itself: its negative state is
        # one circle with every crossing a loop, while the positive state
        # splits into k+1 circles.
        d = pretzel([3])
        assert not is_minus_adequate(d)
        assert not plus_graph(d).has_loop
        assert plus_graph(d).vertex_count == 4

    def test_pipeline_counts_are_consistent(self):
        # diagram -> all-negative state -> minus graph -> reduced graph
        d = pretzel([2, 2, 2])
        circles = apply_state(d, State.all_minus(d))
        g = minus_graph(d)
        assert g.vertex_count == circles
        assert len(g.edges) == d.crossing_count
        assert len(reduced_minus_graph(d).edges) <= len(g.edges)

    def test_free_loops_become_isolated_vertices(self):
        g = minus_graph(pretzel([0, 0, 0]))
        assert g.vertex_count == 3 and g.free_circles == 3
        assert g.edges == ()

    def test_dot_output(self):
        dot = reduced_minus_graph(pretzel([2, 2, 2])).to_dot("g")
        assert dot.startswith("graph g {")
        assert dot.count(" -- ") == 3
        assert "loop" in minus_graph(pretzel([0])).to_dot()


def weak_iso(a: LinkDiagram, b: LinkDiagram) -> bool:
    """Cheap isomorphism surrogate: counts that any relabeling preserves."""
    return (
        a.crossing_count == b.crossing_count
        and a.free_loops == b.free_loops
        and sorted(r.count for r in a.twist_regions)
        == sorted(r.count for r in b.twist_regions)
        and apply_state(a, State.all_minus(a)) == apply_state(b, State.all_minus(b))
        and apply_state(a, State.all_plus(a)) == apply_state(b, State.all_plus(b))
        and is_alternating(a) == is_alternating(b)
        and graph_canon(minus_graph(a)) == graph_canon(minus_graph(b))
    )


class TestSetTwists:
    def test_grow_matches_fresh_pretzel(self):
        grown = set_twists(pretzel([8, 6, 3]), {3: 1})
        assert weak_iso(grown, pretzel([8, 6, 4]))
        assert grown.region(3).count == 4

    def test_shrink_to_zero_matches_fresh_pretzel(self):
        shrunk = set_twists(pretzel([2, 2, 2]), {2: -2})
        assert weak_iso(shrunk, pretzel([2, 0, 2]))
        assert shrunk.region(2).rails is not None

    def test_zero_round_trip(self):
        regrown = set_twists(pretzel([2, 0, 2]), {2: 2})
        assert weak_iso(regrown, pretzel([2, 2, 2]))
        assert is_alternating(regrown)

    def test_shrink_grow_round_trip_on_trefoil(self):
        d = pretzel([1, 1, 1])
        back = set_twists(set_twists(d, {1: -1}), {1: 1})
        assert weak_iso(back, d)

    def test_negative_count_rejected(self):
        with pytest.raises(DiagramError, match="negative count"):
            set_twists(pretzel([2, 2, 2]), {2: -5})

    def test_unknown_region_rejected(self):
        with pytest.raises(DiagramError, match="no twist region"):
            set_twists(pretzel([2, 2]), {9: 1})

    def test_anonymous_site_cannot_regrow(self):
        with pytest.raises(DiagramError, match="anonymous"):
            set_twists(pretzel([0, 0, 0]), {1: 2})

    def test_multi_region_deltas(self):
        d = set_twists(pretzel([2, 2, 2]), {1: 1, 2: -1, 3: 2})
        assert weak_iso(d, pretzel([3, 1, 4]))

    def test_closed_up_region_grows(self):
        hopf = parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]")
        bigger = set_twists(hopf, {1: 1})
        assert bigger.crossing_count == 3
        assert bigger.region(1).count == 3
        assert is_alternating(bigger)

    def test_minus_circle_count_stable_under_extra_twist(self):
        # |s_-| does not change when a marked region gains a crossing.
        for counts in ([2, 3, 2], [8, 6, 1], [4, 2]):
            d = pretzel(counts)
            grown = set_twists(d, {len(counts): 1})
            assert apply_state(grown, State.all_minus(grown)) == apply_state(
                d, State.all_minus(d)
            )

    def test_positive_smoothing_drops_one_circle(self):
        # Positively smoothing one crossing of a marked region and
        # untwisting merges two circles of the all-negative state.
        for counts in ([2, 3, 2], [3, 1, 2], [4, 2]):
            d = pretzel(counts)
            smoothed = smooth_region(d, len(counts), +1)
            assert apply_state(smoothed, State.all_minus(smoothed)) == (
                apply_state(d, State.all_minus(d)) - 1
            )
            assert all(r.rid != len(counts) for r in smoothed.twist_regions)

    def test_negative_smoothing_keeps_region(self):
        d = smooth_region(pretzel([2, 2, 2]), 2, -1)
        assert d.region(2).count == 0

    def test_bad_smoothing_sign(self):
        with pytest.raises(DiagramError, match="sign"):
            smooth_region(pretzel([2, 2]), 1, 0)

    def test_smoothing_an_empty_region(self):
        with pytest.raises(DiagramError, match="already smoothed"):
            smooth_region(pretzel([2, 0, 2]), 2, +1)

    def test_grown_pretzel_stays_adequate(self):
        d = set_twists(pretzel([2, 3, 2]), {2: 2})
        assert is_adequate(d)
        assert is_alternating(d)
