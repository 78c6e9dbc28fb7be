"""Diagram engine tests: matchings, projectors, networks, programs.

Closed-form values from the algebra module serve as the independent
oracle for every network evaluated here by honest diagram expansion.
"""

import itertools
import random

import pytest

from skeinkit.algebra import (
    ONE,
    ZERO,
    AdmissibilityError,
    LaurentPoly,
    RationalFn,
    delta,
    fusion_coeff,
    tet,
    theta,
    twist_coeff,
)
from skeinkit.planar import (
    Matching,
    SliceError,
    SliceProgram,
    TLMorphism,
    boxed,
    cabled_crossing,
    capnest,
    channel_element,
    closure,
    compose,
    crossing_morphism,
    cupnest,
    drum,
    evaluate,
    jones_wenzl,
    plat_caps,
    plat_cups,
    set_cache_dir,
    tensor,
    tet_program,
    theta_program,
    turnback,
    vertex_morphism,
)


def rf(x):
    return x if isinstance(x, RationalFn) else RationalFn.from_poly(x)


@pytest.fixture(autouse=True)
def no_disk_cache():
    set_cache_dir("")
    yield
    set_cache_dir("")


# -- matchings and raw plumbing ---------------------------------------


class TestMatching:
    def test_identity_matching(self):
        m = Matching(2, 2, (3, 2, 1, 0))
        assert m.arcs() == [(0, 3), (1, 2)]

    def test_rejects_non_involution(self):
        with pytest.raises(ValueError, match="involution"):
            Matching(2, 2, (1, 2, 3, 0))

    def test_rejects_fixed_point(self):
        with pytest.raises(ValueError, match="involution"):
            Matching(1, 1, (0, 1))

    def test_rejects_crossing_arcs(self):
        # bottom 0-top 0 and bottom 1-top 1 cross as drawn: nodes (0,2),(1,3)
        with pytest.raises(ValueError, match="crossing"):
            Matching(2, 2, (2, 3, 0, 1))

    def test_rejects_wrong_length(self):
        with pytest.raises(ValueError, match="nodes"):
            Matching(2, 2, (1, 0))


# -- composition, tensor, closure -------------------------------------


class TestCompose:
    def test_identity_composes_to_identity(self):
        i2 = TLMorphism.identity(2)
        assert compose(i2, i2) == i2

    def test_hook_squares_to_delta_hook(self):
        e = TLMorphism.hook(2, 0)
        assert compose(e, e) == e.scaled(delta(1))

    def test_arity_mismatch_raises(self):
        with pytest.raises(ValueError, match="compose"):
            compose(TLMorphism.identity(2), TLMorphism.identity(4))

    def test_tensor_of_identities(self):
        i1 = TLMorphism.identity(1)
        assert tensor(i1, i1) == TLMorphism.identity(2)

    def test_tensor_associative(self):
        rng = random.Random(7)
        pool = [
            TLMorphism.identity(1),
            TLMorphism.hook(2, 0),
            TLMorphism.cap(2, 0),
            TLMorphism.cup(1, 1),
            jones_wenzl(2),
        ]
        for _ in range(15):
            f, g, h = (rng.choice(pool) for _ in range(3))
            assert tensor(tensor(f, g), h) == tensor(f, tensor(g, h))

    def test_closure_of_strand_is_loop(self):
        assert closure(TLMorphism.identity(1)).to_poly() == delta(1)

    def test_closure_of_hook_is_loop(self):
        assert closure(TLMorphism.hook(2, 0)).to_poly() == delta(1)

    def test_closure_needs_equal_arities(self):
        with pytest.raises(ValueError, match="close"):
            closure(TLMorphism.cap(2, 0))


# -- Jones-Wenzl projectors --------------------------------------------


class TestJonesWenzl:
    def test_first_projector_is_strand(self):
        assert jones_wenzl(1) == TLMorphism.identity(1)

    def test_second_projector_expansion(self):
        expect = TLMorphism.identity(2) + TLMorphism.hook(2, 0).scaled(
            RationalFn(LaurentPoly({0: 1}), LaurentPoly({2: 1, -2: 1}))
        )
        assert jones_wenzl(2) == expect

    def test_third_projector_has_all_catalan_matchings(self):
        assert len(jones_wenzl(3).nums) == 5

    @pytest.mark.parametrize("n", range(1, 7))
    def test_idempotent(self, n):
        f = jones_wenzl(n)
        assert compose(f, f) == f

    @pytest.mark.parametrize("n", range(2, 7))
    def test_hook_annihilation(self, n):
        f = jones_wenzl(n)
        for i in range(n - 1):
            cap = boxed(TLMorphism.cap(2, 0), i, n - i - 2)
            assert compose(f, cap).is_zero()
            cup = boxed(TLMorphism.cup(0, 0), i, n - i - 2)
            assert compose(cup, f).is_zero()

    @pytest.mark.parametrize("n", range(1, 7))
    def test_closure_is_loop_value(self, n):
        assert closure(jones_wenzl(n)).to_poly() == delta(n)

    def test_identity_coefficient_is_one(self):
        for n in range(1, 7):
            f = jones_wenzl(n)
            ident = tuple(2 * n - 1 - i for i in range(2 * n))
            assert f.coeff(ident) == rf(ONE)

    def test_tensor_of_strands_is_not_projector(self):
        assert tensor(jones_wenzl(1), jones_wenzl(1)) != jones_wenzl(2)

    @pytest.mark.parametrize("m,k", [(1, 1), (1, 2), (2, 2), (2, 3), (1, 4), (3, 3)])
    def test_absorption(self, m, k):
        big = jones_wenzl(m + k)
        small = tensor(jones_wenzl(m), jones_wenzl(k))
        assert compose(small, big) == big
        assert compose(big, small) == big


# -- trivalent vertices and closed networks ----------------------------


class TestVertex:
    def test_simple_vertex_single_term(self):
        v = vertex_morphism(1, 1, 2, "up")
        assert v.bot == 2 and v.top == 2
        assert v == jones_wenzl(2)

    def test_inadmissible_vertex_raises(self):
        with pytest.raises(AdmissibilityError):
            vertex_morphism(1, 1, 3)

    def test_zero_leg_vertex_is_capnest(self):
        v = vertex_morphism(1, 1, 0, "up")
        assert v == capnest(1)
        assert vertex_morphism(1, 1, 0, "down") == cupnest(1)


THETA_TRIPLES = [
    (a, b, c)
    for a in range(5)
    for b in range(a + 1)
    for c in range(b + 1)
    if (a, b, c) != (0, 0, 0)
    and (a + b + c) % 2 == 0
    and a <= b + c
]


class TestThetaNetworks:
    @pytest.mark.parametrize("a,b,c", THETA_TRIPLES)
    def test_theta_program_matches_closed_form(self, a, b, c):
        assert evaluate(theta_program(a, b, c)) == rf(theta(a, b, c))

    def test_all_odd_internal_theta_is_rational(self):
        val = evaluate(theta_program(2, 2, 2))
        assert not val.den.is_one()
        assert val == rf(theta(2, 2, 2))

    def test_theta_of_zero_edge_is_loop_value(self):
        for n in (1, 2, 3):
            assert evaluate(theta_program(n, n, 0)).to_poly() == delta(n)


TET_SMALL = [
    colors
    for colors in itertools.product(range(4), repeat=6)
    if all(
        (sum(t) % 2 == 0 and max(t) * 2 <= sum(t))
        for t in (
            (colors[0], colors[1], colors[2]),
            (colors[1], colors[3], colors[5]),
            (colors[3], colors[4], colors[2]),
            (colors[0], colors[4], colors[5]),
        )
    )
]


class TestTetNetworks:
    def test_small_grid_matches_closed_form(self):
        # exhaustive colors <= 3: 181 admissible labelings
        assert len(TET_SMALL) == 181
        for a, b, e, c, d, f in TET_SMALL:
            net = evaluate(tet_program(a, b, e, c, d, f))
            assert net == tet(a, b, e, c, d, f), (a, b, e, c, d, f)

    @pytest.mark.parametrize("n", (1, 2))
    def test_channel_family(self, n):
        for p, q in itertools.product(range(n + 1), repeat=2):
            colors = (n, n, 2 * p, n, n, 2 * q)
            assert evaluate(tet_program(*colors)) == tet(*colors)

    def test_larger_spot_checks(self):
        for colors in ((2, 3, 5, 4, 3, 3), (4, 4, 4, 4, 4, 4), (5, 3, 4, 3, 5, 2)):
            assert evaluate(tet_program(*colors)) == tet(*colors)

    def test_formula_symmetry(self):
        # relabelings induced by permuting the four vertices
        # V1=(a,b,e) V2=(b,c,f) V3=(c,d,e) V4=(a,d,f)
        base = (1, 2, 1, 2, 3, 2)
        a, b, e, c, d, f = base
        images = [
            (c, b, f, a, d, e),   # (V1 V2)(V3 V4)
            (d, c, e, b, a, f),   # (V1 V3)
            (b, c, f, d, a, e),   # (V1 V2 V3 V4)
        ]
        val = tet(*base)
        for img in images:
            assert tet(*img) == val, img

    def test_zero_edge_collapse_to_theta(self):
        for a, b, e in ((1, 1, 2), (2, 2, 2), (3, 1, 2), (2, 2, 4)):
            assert tet(a, b, e, b, a, 0) == rf(theta(a, b, e))

    def test_inadmissible_raises(self):
        with pytest.raises(AdmissibilityError):
            tet(1, 1, 3, 1, 1, 0)


# -- crossings, cables, fusion -----------------------------------------


class TestCrossings:
    def test_kauffman_expansion_shape(self):
        x = crossing_morphism(-1)
        assert len(x.nums) == 2

    def test_region_crossing_channel_eigenvalues(self):
        x = crossing_morphism(-1)
        e = TLMorphism.hook(2, 0)
        assert compose(x, e) == e.scaled(twist_coeff(1, 1, 0))
        f2 = jones_wenzl(2)
        assert compose(x, f2) == f2.scaled(twist_coeff(1, 1, 2))

    def test_signs_are_mirror_inverses(self):
        x, y = crossing_morphism(-1), crossing_morphism(1)
        assert compose(x, y) == TLMorphism.identity(2)

    @pytest.mark.parametrize("n", (1, 2, 3))
    def test_colored_kauffman_relation(self, n):
        ff = tensor(jones_wenzl(n), jones_wenzl(n))
        x = compose(compose(ff, cabled_crossing(n, -1)), ff)
        acc = TLMorphism.zero(2 * n, 2 * n)
        for i in range(n + 1):
            smoothing = compose(compose(ff, turnback(n, i)), ff)
            acc = acc + smoothing.scaled(fusion_coeff(n, i))
        assert x == acc

    @pytest.mark.parametrize("n", (1, 2))
    def test_fusion_completeness(self, n):
        ff = tensor(jones_wenzl(n), jones_wenzl(n))
        acc = TLMorphism.zero(2 * n, 2 * n)
        for p in range(n + 1):
            w = rf(delta(2 * p)) / rf(theta(n, n, 2 * p))
            acc = acc + channel_element(n, p).scaled(w)
        assert acc == ff

    def test_fusion_completeness_under_markov_closure(self):
        for n in (1, 2, 3):
            total = rf(ZERO)
            for p in range(n + 1):
                w = rf(delta(2 * p)) / rf(theta(n, n, 2 * p))
                total = total + w * closure(channel_element(n, p))
            two_cables = tensor(jones_wenzl(n), jones_wenzl(n))
            assert total == closure(two_cables)

    @pytest.mark.parametrize("n", (1, 2))
    def test_vertical_fusion_of_twist_regions(self, n):
        ff = tensor(jones_wenzl(n), jones_wenzl(n))
        xk = ff
        for k in (1, 2, 3):
            xk = compose(xk, cabled_crossing(n, -1))
            acc = TLMorphism.zero(2 * n, 2 * n)
            for p in range(n + 1):
                w = rf(delta(2 * p)) / rf(theta(n, n, 2 * p))
                mu = twist_coeff(n, n, 2 * p)
                acc = acc + channel_element(n, p).scaled(w * rf(mu**k))
            assert compose(xk, ff) == acc, (n, k)

    def test_channel_elements_are_orthogonal_idempotents_up_to_scale(self):
        for n in (1, 2):
            for p in range(n + 1):
                tp = channel_element(n, p)
                th = rf(theta(n, n, 2 * p)) / rf(delta(2 * p))
                assert compose(tp, tp) == tp.scaled(th)
                for q in range(p):
                    assert compose(tp, channel_element(n, q)).is_zero()

    @pytest.mark.parametrize("n", (1, 2, 3))
    def test_cabled_curl_values(self, n):
        f = jones_wenzl(n)
        curls = {}
        for sign in (-1, 1):
            lifted = compose(f, boxed(cupnest(n), n, 0))
            crossed = compose(lifted, boxed(cabled_crossing(n, sign), 0, n))
            curls[sign] = compose(crossed, boxed(capnest(n), n, 0))
        m = n * n + 2 * n
        sgn = -1 if n % 2 else 1
        vals = {
            s: f.scaled(LaurentPoly.monomial(e, sgn)) for s, e in ((-1, -m), (1, m))
        }
        assert curls == vals


# -- pretzel-shaped networks -------------------------------------------


class TestDrum:
    def test_needs_rungs(self):
        with pytest.raises(ValueError):
            drum(1, [])

    def test_odd_rung_color_rejected(self):
        with pytest.raises(AdmissibilityError):
            drum(1, [1])

    def test_inadmissible_rung_rejected(self):
        with pytest.raises(AdmissibilityError):
            drum(1, [4])

    @pytest.mark.parametrize("n", (1, 2))
    def test_single_rung_dumbbell(self, n):
        # one column closes onto itself: only the turn-back channel survives
        for p in range(n + 1):
            v = evaluate(drum(n, [2 * p]))
            want = delta(n) * delta(n) if p == 0 else ZERO
            assert v.to_poly() == want

    @pytest.mark.parametrize("n", (1, 2))
    @pytest.mark.parametrize("r", (1, 2, 3))
    def test_all_zero_rungs_leave_two_cycles(self, n, r):
        assert evaluate(drum(n, [0] * r)).to_poly() == delta(n) * delta(n)

    @pytest.mark.parametrize("n", (1, 2))
    def test_matches_channel_mixing_sum(self, n):
        ys = [
            [rf(tet(n, n, 2 * p, n, n, 2 * q)) / rf(theta(n, n, 2 * q))
             for q in range(n + 1)]
            for p in range(n + 1)
        ]
        for r in (1, 2, 3):
            for tup in itertools.product(range(n + 1), repeat=r):
                want = rf(ZERO)
                for q in range(n + 1):
                    term = rf(delta(2 * q))
                    for p in tup:
                        term = term * ys[p][q]
                    want = want + term
                assert evaluate(drum(n, [2 * p for p in tup])) == want, (n, tup)

    def test_frozen_three_rung_value(self):
        d2 = delta(2)
        num = d2 * LaurentPoly({4: 1, -4: 1})
        assert evaluate(drum(1, [2, 2, 2])) == RationalFn(num, delta(1))


def pretzel_program(ks, n=1):
    """Raw-crossing pretzel bracket program at cable width n = 1."""
    r = len(ks)
    prog = SliceProgram()
    prog.morphism(plat_cups(r, n), 0)
    for i, k in enumerate(ks):
        for _ in range(k):
            prog.crossing(-1, 2 * i)
    prog.morphism(plat_caps(r, n), 0)
    return prog


class TestPretzelFusion:
    """Raw plat evaluation against the fused channel formula, n = 1."""

    def fused(self, ks, n=1):
        ys = [
            [rf(tet(n, n, 2 * p, n, n, 2 * q)) / rf(theta(n, n, 2 * q))
             for q in range(n + 1)]
            for p in range(n + 1)
        ]
        ws = [rf(delta(2 * p)) / rf(theta(n, n, 2 * p)) for p in range(n + 1)]
        mus = [twist_coeff(n, n, 2 * p) for p in range(n + 1)]
        total = rf(ZERO)
        for q in range(n + 1):
            prod = rf(delta(2 * q))
            for k in ks:
                b = rf(ZERO)
                for p in range(n + 1):
                    b = b + ws[p] * rf(mus[p] ** k) * ys[p][q]
                prod = prod * b
            total = total + prod
        return total

    @pytest.mark.parametrize(
        "ks",
        [(1,), (3,), (1, 1), (2, 3), (1, 1, 1), (2, 2, 2), (2, 3, 2),
         (8, 6, 2), (2, 0, 3), (0, 0, 0), (1, 2, 3, 4), (2, 2, 2, 2)],
    )
    def test_raw_equals_fused(self, ks):
        assert evaluate(pretzel_program(list(ks))) == self.fused(list(ks))

    def test_trefoil_value(self):
        got = evaluate(pretzel_program([1, 1, 1])).to_poly()
        assert got == LaurentPoly({7: 1, 3: 1, -1: 1, -9: -1})

    def test_unlink_value(self):
        assert evaluate(pretzel_program([0, 0, 0])).to_poly() == delta(1) ** 3

    def test_torus_link_collapse(self):
        # a two-region pretzel is the (2, k1+k2) torus link
        for k1, k2 in ((1, 2), (2, 2), (3, 4)):
            a = evaluate(pretzel_program([k1, k2]))
            b = evaluate(pretzel_program([k1 + k2, 0]))
            # the k=0 region leaves a loop-free clasped pass-through
            assert a == b, (k1, k2)


# -- slice program machinery --------------------------------------------


class TestSlicePrograms:
    def test_cup_cap_loop(self):
        prog = SliceProgram().cup(0).cap(0)
        assert evaluate(prog).to_poly() == delta(1)

    def test_arity_violation_names_slice(self):
        prog = SliceProgram().cup(0).cap(3)
        with pytest.raises(SliceError, match="slice 1"):
            evaluate(prog)

    def test_open_program_rejected(self):
        prog = SliceProgram().cup(0)
        with pytest.raises(SliceError, match="open"):
            evaluate(prog)

    def test_commuting_slices_reorder_freely(self):
        rng = random.Random(23)
        for _ in range(12):
            width = 4
            prog = SliceProgram()
            for i in range(width):
                prog.cup(i)
            body = []
            for _ in range(6):
                kind = rng.choice(["crossing", "projector", "hook"])
                pos = rng.randrange(width * 2 - 2)
                if kind == "crossing":
                    body.append(("crossing", rng.choice((-1, 1)), pos))
                elif kind == "projector":
                    body.append(("projector", 2, pos))
                else:
                    body.append(("morphism", TLMorphism.hook(2, 0), pos))
            prog.slices.extend(body)
            for i in range(width - 1, -1, -1):
                prog.cap(2 * i)
            # swap the first adjacent commuting pair in the body
            swapped = None
            for j in range(len(body) - 1):
                a, b = body[j], body[j + 1]
                pa, pb = a[-1], b[-1]
                if pa + 2 <= pb or pb + 2 <= pa:
                    swapped = list(prog.slices)
                    ja = width + j
                    swapped[ja], swapped[ja + 1] = swapped[ja + 1], swapped[ja]
                    break
            if swapped is None:
                continue
            other = SliceProgram(swapped)
            try:
                v1 = evaluate(prog)
            except SliceError:
                continue
            assert v1 == evaluate(other)

    def test_projector_slice_matches_direct_closure(self):
        prog = SliceProgram()
        for i in range(3):
            prog.cup(i)
        prog.projector(3, 0)
        for i in range(2, -1, -1):
            prog.cap(i)
        assert evaluate(prog).to_poly() == delta(3)


# -- persistent projector cache -----------------------------------------


class TestProjectorCache:
    def test_round_trip(self, tmp_path):
        import skeinkit.planar as planar

        set_cache_dir(str(tmp_path))
        want = jones_wenzl(4)
        planar._save_jw_cache()
        assert (tmp_path / "projectors.txt").exists()
        saved = dict(planar._JW_CACHE)
        planar._JW_CACHE.clear()
        got = jones_wenzl(4)
        assert got == want
        planar._JW_CACHE.clear()
        planar._JW_CACHE.update(saved)

    def test_corrupt_cache_recomputed(self, tmp_path):
        import skeinkit.planar as planar

        path = tmp_path / "projectors.txt"
        path.write_text("not a cache file\nat all\n")
        set_cache_dir(str(tmp_path))
        planar._JW_CACHE.clear()
        assert closure(jones_wenzl(3)).to_poly() == delta(3)

    def test_wrong_version_header_ignored(self, tmp_path):
        import skeinkit.planar as planar

        path = tmp_path / "projectors.txt"
        path.write_text("skeinkit-jw v0 loop=something-else\n")
        set_cache_dir(str(tmp_path))
        planar._JW_CACHE.clear()
        assert closure(jones_wenzl(2)).to_poly() == delta(2)
