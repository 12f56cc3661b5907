import itertools
import random

import pytest

from tiltlab import CubeSubquiver, PreconditionError, Quiver
from tiltlab.fixtures import kronecker, point, star4, triangle
from tiltlab.quiver import classify, sinks
from tiltlab.structure import (
    amalgam,
    complete,
    cube_amalgam,
    cube_from_json_dict,
    decompose,
    digraph_isomorphic,
    eligible_arrows,
    equivalent,
    is_completion_image,
    is_in_script_L,
    leadsto_step,
    meet_join,
    normal_form,
    phi,
    psi,
    psi_inverse,
    remove_arrow,
    same_tp,
    verify_commute,
    window_prefix_isomorphic,
)

from oracles import digraph_iso_brute, rand_quiver, rand_single_source

CHAIN01 = CubeSubquiver(2, frozenset({(0, 0), (1, 0), (1, 1)}))
CHAIN10 = CubeSubquiver(2, frozenset({(0, 0), (0, 1), (1, 1)}))
FULL2 = CubeSubquiver(2, frozenset({(0, 0), (0, 1), (1, 0), (1, 1)}))


def rand_a_circ(rng, n):
    """Random completed single-source quiver (a member of the studied class)."""
    return complete(rand_single_source(rng, n))


def script_l_members(dim):
    """Every cube subquiver of the given dimension passing the three conditions."""
    corners = {(0,) * dim, (1,) * dim}
    middle = [v for v in itertools.product((0, 1), repeat=dim) if v not in corners]
    out = []
    for r in range(len(middle) + 1):
        for extra in itertools.combinations(middle, r):
            K = CubeSubquiver(dim, frozenset(corners) | set(extra))
            if is_in_script_L(K)[0]:
                out.append(K)
    return out


class TestCubeSubquiver:
    def test_validation(self):
        with pytest.raises(PreconditionError):
            CubeSubquiver(2, frozenset({(0, 0), (2, 1)}))
        with pytest.raises(PreconditionError):
            CubeSubquiver(2, frozenset({(0,)}))

    def test_edges_are_unit_increments(self):
        assert sorted(FULL2.edges) == [
            ((0, 0), (0, 1)), ((0, 0), (1, 0)),
            ((0, 1), (1, 1)), ((1, 0), (1, 1)),
        ]
        assert sorted(CHAIN01.edges) == [((0, 0), (1, 0)), ((1, 0), (1, 1))]

    def test_json_roundtrip(self):
        for K in (CHAIN01, FULL2, psi(star4())):
            assert cube_from_json_dict(K.to_json_dict()) == K

    def test_meet_join(self):
        assert meet_join((0, 1, 0), (1, 0, 0)) == ((0, 0, 0), (1, 1, 0))
        assert meet_join((1, 1), (1, 1)) == ((1, 1), (1, 1))


class TestComplete:
    def test_single_arrow_becomes_kronecker(self):
        assert complete(Quiver(2, ((1, 0),))).same_arrows(kronecker())

    def test_chain_becomes_triangle(self):
        assert complete(Quiver(3, ((1, 0), (2, 1)))).same_arrows(triangle())

    def test_star_needs_parallel_arrows(self):
        got = complete(Quiver(4, ((3, 0), (3, 1), (3, 2))))
        assert got.same_arrows(star4())

    def test_point_unchanged(self):
        assert complete(point()).same_arrows(point())

    def test_completing_twice_keeps_adding(self):
        t3 = triangle()
        again = complete(t3)
        assert sorted(again.arrows) == [(1, 0), (2, 0), (2, 0), (2, 1)]

    def test_random_completions_land_in_class(self):
        rng = random.Random(3030)
        for _ in range(60):
            p = rand_single_source(rng, rng.randrange(2, 7))
            c = complete(p)
            # one new arrow from the source to each sink, nothing else
            extra = list(c.arrows)
            for a in p.arrows:
                extra.remove(a)
            assert sorted(extra) == [(p.n - 1, y) for y in sinks(p)]
            assert is_completion_image(c)
            flags = classify(c)
            assert flags.l_le_1 and flags.in_A_circ, (p.arrows, c.arrows)


class TestCompletionImage:
    def test_members(self):
        for q in (point(), kronecker(), triangle(), star4()):
            assert is_completion_image(q)
        # three parallel arrows complete the double arrow
        assert is_completion_image(Quiver(2, ((1, 0), (1, 0), (1, 0))))

    def test_non_members(self):
        assert not is_completion_image(Quiver(2, ((1, 0),)))
        assert not is_completion_image(Quiver(3, ((2, 0), (2, 1))))
        assert not is_completion_image(Quiver(3, ((1, 0), (1, 0))))  # disconnected
        assert not is_completion_image(
            Quiver(4, ((1, 0), (2, 0), (3, 1), (3, 2))))  # no source->sink arrow


class TestAmalgam:
    def test_point_chain(self):
        assert amalgam(point(), point()).arrows == ((1, 0),)

    def test_kronecker_tower(self):
        got = amalgam(kronecker(), kronecker())
        assert sorted(got.arrows) == [(1, 0), (1, 0), (2, 1), (3, 2), (3, 2)]

    def test_mixed(self):
        assert sorted(amalgam(point(), kronecker()).arrows) == [(1, 0), (1, 0), (2, 1)]
        assert sorted(amalgam(kronecker(), point()).arrows) == [(1, 0), (2, 1), (2, 1)]

    def test_literal_mode_differs(self):
        got = amalgam(kronecker(), kronecker(), mode="literal")
        assert sorted(got.arrows) == [(1, 0), (1, 0), (3, 0), (3, 2), (3, 2)]
        # the literal wiring leaves a second source behind
        assert not classify(got).unique_source

    def test_plural_wiring(self):
        # a two-source lower part receives one arrow per source
        got = amalgam(point(), Quiver(2, ()))
        assert sorted(got.arrows) == [(2, 0), (2, 1)]

    def test_mode_validation(self):
        with pytest.raises(PreconditionError):
            amalgam(point(), point(), mode="sideways")


class TestPhi:
    def test_fixture_values(self):
        q, ok = phi(point(), kronecker())
        assert sorted(q.arrows) == [(1, 0), (1, 0), (2, 0), (2, 1)] and ok
        q, ok = phi(kronecker(), point())
        assert sorted(q.arrows) == [(1, 0), (2, 0), (2, 1), (2, 1)] and ok
        q, ok = phi(point(), point())
        assert q.same_arrows(kronecker()) and ok
        q, ok = phi(kronecker(), kronecker())
        assert sorted(q.arrows) == [(1, 0), (1, 0), (2, 1), (3, 0), (3, 2), (3, 2)]
        assert ok

    def test_literal_mode_leaves_class(self):
        q, ok = phi(kronecker(), kronecker(), mode="literal")
        assert not ok
        assert not classify(q).unique_source

    def test_random_closure(self):
        rng = random.Random(660)
        for _ in range(40):
            q1 = rand_a_circ(rng, rng.randrange(1, 4))
            q2 = rand_a_circ(rng, rng.randrange(1, 4))
            q, ok = phi(q1, q2)
            assert ok, (q1.arrows, q2.arrows)
            assert is_completion_image(q)
            assert classify(q).l_le_1


Q6 = complete(Quiver(4, ((2, 0), (3, 1), (3, 2))))
K6 = frozenset({(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1)})


class TestPsi:
    def test_fixture_values(self):
        assert psi(point()) == CubeSubquiver(0, frozenset({()}))
        assert psi(kronecker()) == CubeSubquiver(1, frozenset({(0,), (1,)}))
        assert psi(triangle()) == CHAIN01
        cube = psi(star4())
        assert cube.dim == 3 and len(cube.nodes) == 8 and len(cube.edges) == 12

    def test_label_sensitivity(self):
        flipped = Quiver(3, ((0, 1), (2, 0), (2, 1)))
        assert psi(flipped) == CHAIN10
        assert psi(triangle()) != psi(flipped)

    def test_six_node_member(self):
        assert psi(Q6).nodes == K6

    def test_gate(self):
        from tiltlab.fixtures import diamond
        with pytest.raises(PreconditionError):
            psi(diamond())

    def test_lands_in_script_L(self):
        rng = random.Random(11)
        for _ in range(50):
            q = rand_a_circ(rng, rng.randrange(1, 6))
            ok, why = is_in_script_L(psi(q))
            assert ok, (q.arrows, why)


class TestScriptL:
    def test_examples(self):
        assert is_in_script_L(CHAIN01) == (True, None)
        assert is_in_script_L(CHAIN10) == (True, None)
        assert is_in_script_L(FULL2) == (True, None)
        assert is_in_script_L(CubeSubquiver(2, frozenset({(0, 0), (1, 1)}))) == \
            (False, "reachability")
        assert is_in_script_L(CubeSubquiver(1, frozenset({(0,)}))) == \
            (False, "corners")
        bad_closure = CubeSubquiver(3, frozenset(
            {(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0),
             (1, 0, 1), (0, 1, 1), (1, 1, 1)}))
        assert is_in_script_L(bad_closure) == (False, "closure")

    def test_census(self):
        assert len(script_l_members(1)) == 1
        assert len(script_l_members(2)) == 3
        assert len(script_l_members(3)) == 19


class TestPsiInverse:
    def test_fixture_values(self):
        assert sorted(psi_inverse(CHAIN01).arrows) == [(1, 0), (2, 0), (2, 1)]
        assert sorted(psi_inverse(CHAIN10).arrows) == [(0, 1), (2, 0), (2, 1)]
        assert sorted(psi_inverse(FULL2).arrows) == [(2, 0), (2, 0), (2, 1), (2, 1)]
        assert psi_inverse(CubeSubquiver(0, frozenset({()}))).same_arrows(point())
        assert psi_inverse(psi(kronecker())).same_arrows(kronecker())
        assert psi_inverse(CubeSubquiver(3, K6)).same_arrows(Q6)

    def test_gate(self):
        with pytest.raises(PreconditionError):
            psi_inverse(CubeSubquiver(2, frozenset({(0, 0), (1, 1)})))

    def test_right_inverse_exhaustive(self):
        # psi(psi_inverse(K)) recovers the node set exactly, for every member
        for dim in (0, 1, 2, 3):
            members = (script_l_members(dim) if dim
                       else [CubeSubquiver(0, frozenset({()}))])
            for K in members:
                q = psi_inverse(K)
                assert psi(q).nodes == K.nodes, sorted(K.nodes)
                assert leadsto_step(q) is None

    def test_left_inverse_on_irreducibles(self):
        for q in (point(), kronecker(), triangle(), star4(), Q6):
            assert psi_inverse(psi(q)).same_arrows(q)


class TestReduction:
    def test_irreducible_fixtures(self):
        for q in (point(), kronecker(), triangle(), star4(), Q6):
            assert eligible_arrows(q) == []
            assert leadsto_step(q) is None

    def test_parallel_triple_reduces(self):
        k3 = Quiver(2, ((1, 0), (1, 0), (1, 0)))
        assert eligible_arrows(k3) == [0, 1, 2]
        assert leadsto_step(k3).same_arrows(kronecker())

    def test_composite_reduces_to_triangle(self):
        q, _ = phi(point(), kronecker())
        assert leadsto_step(q).same_arrows(triangle())
        assert normal_form(q).same_arrows(triangle())
        q2, _ = phi(kronecker(), point())
        assert normal_form(q2).same_arrows(triangle())

    def test_normal_form_idempotent(self):
        rng = random.Random(92)
        for _ in range(40):
            q = rand_a_circ(rng, rng.randrange(1, 6))
            nf = normal_form(q)
            assert normal_form(nf).same_arrows(nf)
            assert eligible_arrows(nf) == []

    def test_confluence_over_random_orders(self):
        # any order of eligible removals reaches the same normal form
        rng = random.Random(93)
        for _ in range(25):
            q = rand_a_circ(rng, rng.randrange(1, 5))
            q, _ = phi(q, rand_a_circ(rng, rng.randrange(1, 4)))
            target = normal_form(q)
            for _ in range(8):
                cur = q
                while True:
                    ids = eligible_arrows(cur)
                    if not ids:
                        break
                    cur = remove_arrow(cur, rng.choice(ids))
                assert cur.same_arrows(target), (q.arrows, cur.arrows)

    def test_psi_constant_along_reduction(self):
        rng = random.Random(94)
        for _ in range(20):
            q, _ = phi(rand_a_circ(rng, rng.randrange(1, 4)),
                       rand_a_circ(rng, rng.randrange(1, 4)))
            image = psi(q)
            cur = q
            while True:
                step = leadsto_step(cur)
                if step is None:
                    break
                cur = step
                assert psi(cur) == image


class TestEquivalent:
    def test_same_labels(self):
        q, _ = phi(point(), kronecker())
        assert equivalent(q, triangle()) == (True, "labeled")

    def test_same_size_never_falls_back_to_isomorphism(self):
        flipped = Quiver(3, ((0, 1), (2, 0), (2, 1)))
        same, mode = equivalent(triangle(), flipped)
        assert mode == "labeled"
        assert not same

    def test_different_sizes_compare_up_to_isomorphism(self):
        assert equivalent(kronecker(), triangle()) == (False, "isomorphism")

    def test_reflexive_symmetric(self):
        rng = random.Random(95)
        for _ in range(20):
            q1 = rand_a_circ(rng, rng.randrange(1, 5))
            q2 = rand_a_circ(rng, rng.randrange(1, 5))
            assert equivalent(q1, q1)[0]
            assert equivalent(q1, q2)[0] == equivalent(q2, q1)[0]


class TestCubeAmalgam:
    def test_chains_concatenate(self):
        got = cube_amalgam(psi(kronecker()), psi(kronecker()))
        assert got.dim == 3
        assert sorted(got.nodes) == [
            (0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1)]

    def test_point_is_neutral_shape(self):
        pt = psi(point())
        chain = psi(kronecker())
        got = cube_amalgam(pt, chain)
        assert got.dim == 2 and got.nodes == CHAIN01.nodes


class TestCommute:
    def test_all_fixture_pairs(self):
        blocks = (point(), kronecker(), triangle(), star4(), Q6)
        for q1 in blocks:
            for q2 in blocks:
                assert verify_commute(q1, q2), (q1.arrows, q2.arrows)

    def test_random_pairs(self):
        rng = random.Random(96)
        for _ in range(25):
            q1 = rand_a_circ(rng, rng.randrange(1, 5))
            q2 = rand_a_circ(rng, rng.randrange(1, 5))
            assert verify_commute(q1, q2), (q1.arrows, q2.arrows)


class TestDecompose:
    def test_chain_splits_into_points(self):
        d = decompose(CHAIN01)
        assert len(d.pieces) == 3
        assert all(p.dim == 0 for p in d.pieces)
        assert d.glues == (0, 1)

    def test_full_cubes_are_atoms(self):
        for K in (FULL2, psi(star4()), CubeSubquiver(3, K6)):
            d = decompose(K)
            assert len(d.pieces) == 1
            assert d.pieces[0].nodes == K.nodes

    def test_first_cut_only(self):
        d = decompose(psi(triangle()), maximal=False)
        assert len(d.pieces) == 2

    def test_pieces_stay_in_script_L(self):
        rng = random.Random(97)
        for _ in range(25):
            q, _ = phi(rand_a_circ(rng, rng.randrange(1, 4)),
                       rand_a_circ(rng, rng.randrange(1, 4)))
            d = decompose(psi(q))
            assert len(d.glues) == len(d.pieces) - 1
            total = 0
            for p in d.pieces:
                assert is_in_script_L(p)[0]
                total += p.dim
            assert total + len(d.glues) == psi(q).dim
            # maximal pieces do not decompose further
            for p in d.pieces:
                assert len(decompose(p).pieces) == 1


class TestSameTp:
    def test_fixture_verdicts(self):
        assert same_tp(triangle(), kronecker())
        assert not same_tp(star4(), kronecker())
        assert not same_tp(star4(), triangle())
        assert same_tp(star4(), star4())
        assert not same_tp(Q6, kronecker())

    def test_equivalence_implies_same_windows(self):
        q, _ = phi(point(), kronecker())
        assert same_tp(q, triangle())
        q2, _ = phi(kronecker(), point())
        assert same_tp(q2, triangle())

    def test_without_cross_check(self):
        assert same_tp(triangle(), kronecker(), cross_check=False)
        assert not same_tp(star4(), kronecker(), cross_check=False)

    def test_window_prefixes(self):
        assert window_prefix_isomorphic(triangle(), kronecker()) is True
        assert window_prefix_isomorphic(star4(), kronecker()) is False
        assert window_prefix_isomorphic(point(), point()) is None


def test_digraph_isomorphism_matches_bruteforce():
    # the library routine compares simple digraphs, so dedupe parallel arrows
    rng = random.Random(98)
    for _ in range(80):
        n = rng.randrange(2, 5)
        e1 = sorted(set(rand_quiver(rng, n, rng.randrange(1, 2 * n)).arrows))
        if rng.random() < 0.5:
            perm = list(range(n))
            rng.shuffle(perm)
            e2 = [(perm[a], perm[b]) for a, b in e1]
        else:
            e2 = sorted(set(rand_quiver(rng, n, rng.randrange(1, 2 * n)).arrows))
        got = digraph_isomorphic(n, e1, n, e2)
        assert got == digraph_iso_brute(n, e1, n, e2)
