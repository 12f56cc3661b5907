import random

import pytest

from tiltlab import (
    ParseError,
    Quiver,
    ValidationError,
    classify,
    format_quiver,
    is_isomorphic,
    normalize,
    parse_quiver,
    quiver_to_json,
)
from tiltlab.fixtures import ALL, diamond, kronecker, point, star4, triangle
from tiltlab.quiver import (
    doubled,
    find_cycle,
    is_connected,
    is_normalized,
    min_degree_failure,
    sinks,
    sources,
    vertex_star,
)

from oracles import quiver_iso_brute, rand_quiver, shuffled_copy


class TestConstruction:
    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            Quiver(0, ())

    def test_rejects_loop(self):
        with pytest.raises(ValidationError):
            Quiver(2, ((0, 0),))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            Quiver(2, ((2, 0),))
        with pytest.raises(ValidationError):
            Quiver(2, ((1, -1),))

    def test_same_arrows_ignores_order_and_name(self):
        a = Quiver(3, ((2, 0), (1, 0)), name="x")
        b = Quiver(3, ((1, 0), (2, 0)), name="y")
        assert a.same_arrows(b)
        assert not a.same_arrows(Quiver(3, ((1, 0), (2, 0), (2, 0))))

    def test_multiplicity(self):
        assert star4().multiplicity() == {(3, 0): 2, (3, 1): 2, (3, 2): 2}
        assert set(triangle().multiplicity().values()) == {1}


class TestParsing:
    def test_text_roundtrip(self):
        for q in ALL.values():
            assert parse_quiver(format_quiver(q)) == q

    def test_json_roundtrip(self):
        for q in ALL.values():
            assert parse_quiver(quiver_to_json(q)) == q

    def test_comments_and_blank_lines(self):
        q = parse_quiver("# a quiver\n\nvertices 2\n# body\narrow 1 0\n")
        assert q == Quiver(2, ((1, 0),))

    def test_error_carries_line_number(self):
        with pytest.raises(ParseError) as exc:
            parse_quiver("vertices 2\narrow 1 5\n")
        assert "line 2" in str(exc.value)

    def test_unknown_directive(self):
        with pytest.raises(ParseError) as exc:
            parse_quiver("junk\n")
        assert "line 1" in str(exc.value)

    def test_arrow_before_vertices(self):
        with pytest.raises(ParseError):
            parse_quiver("arrow 1 0\nvertices 2\n")

    def test_bad_json(self):
        # a missing arrows key is fine, a malformed pair is not
        assert parse_quiver('{"n": 2}') == Quiver(2, ())
        with pytest.raises(ParseError):
            parse_quiver('{"n": 2, "arrows": [[0]]}')


class TestSourcesSinks:
    def test_fixture_sources_and_sinks(self):
        assert sources(triangle()) == [2]
        assert sinks(triangle()) == [0]
        assert sources(star4()) == [3]
        assert sinks(star4()) == [0, 1, 2]
        assert sources(point()) == [0]
        assert sinks(point()) == [0]

    def test_vertex_star_indexes_arrows(self):
        q = triangle()
        star = vertex_star(q)
        for v in range(q.n):
            for i in star.out_ids[v]:
                assert q.arrows[i][0] == v
            for i in star.in_ids[v]:
                assert q.arrows[i][1] == v
        total = sum(len(star.out_ids[v]) + len(star.in_ids[v]) for v in range(q.n))
        assert total == 2 * len(q.arrows)

    def test_connectivity(self):
        assert is_connected(triangle())
        assert not is_connected(Quiver(4, ((1, 0), (3, 2))))


class TestCycles:
    def test_acyclic_fixtures(self):
        for q in ALL.values():
            assert find_cycle(q) is None

    def test_reports_a_cycle(self):
        q = Quiver(3, ((0, 1), (1, 2), (2, 0)))
        cyc = find_cycle(q)
        assert cyc is not None
        assert cyc[0] == cyc[-1]
        for a, b in zip(cyc, cyc[1:]):
            assert (a, b) in q.arrows

    def test_normalize_rejects_cycles(self):
        with pytest.raises(ValidationError):
            normalize(Quiver(2, ((0, 1), (1, 0))))


class TestNormalize:
    def test_fixtures_already_normal(self):
        for q in ALL.values():
            qn, perm = normalize(q)
            assert qn.same_arrows(q)
            assert perm == tuple(range(q.n))

    def test_relabels_flipped_triangle(self):
        qn, perm = normalize(Quiver(3, ((0, 1), (2, 0), (2, 1))))
        assert qn.arrows == ((1, 0), (2, 0), (2, 1))
        assert perm == (1, 0, 2)

    def test_random_roundtrip_and_idempotence(self):
        rng = random.Random(901)
        for _ in range(200):
            n = rng.randrange(2, 7)
            q = shuffled_copy(rng, rand_quiver(rng, n, rng.randrange(1, 2 * n)))
            qn, perm = normalize(q)
            assert is_normalized(qn)
            assert sorted(perm) == list(range(n))
            relabelled = sorted((perm[a], perm[b]) for a, b in q.arrows)
            assert relabelled == sorted(qn.arrows)
            again, perm2 = normalize(qn)
            assert again.same_arrows(qn)
            assert perm2 == tuple(range(n))


class TestIsomorphism:
    def test_matches_bruteforce(self):
        rng = random.Random(417)
        positives = 0
        for _ in range(150):
            n = rng.randrange(2, 6)
            q1 = rand_quiver(rng, n, rng.randrange(1, 2 * n))
            if rng.random() < 0.5:
                q2 = shuffled_copy(rng, q1)
            else:
                q2 = rand_quiver(rng, n, rng.randrange(1, 2 * n))
            expected = quiver_iso_brute(q1, q2)
            got = is_isomorphic(q1, q2)
            assert (got is not None) == expected, (q1.arrows, q2.arrows)
            if got is not None:
                positives += 1
                relabelled = sorted((got[a], got[b]) for a, b in q1.arrows)
                assert relabelled == sorted(q2.arrows)
        assert positives >= 40

    def test_distinguishes_multiplicity(self):
        k2 = kronecker()
        k3 = Quiver(2, ((1, 0), (1, 0), (1, 0)))
        assert is_isomorphic(k2, k3) is None

    def test_direction_matters(self):
        a = Quiver(3, ((1, 0), (2, 0), (2, 1)))
        b = Quiver(3, ((0, 1), (2, 0), (2, 1)))
        # isomorphic as quivers (swap 0 and 1) but not equal as labelled data
        assert is_isomorphic(a, b) == (1, 0, 2)
        assert a.arrows != b.arrows


class TestClassification:
    def test_fixture_flags(self):
        assert classify(point()).as_dict() == {
            "unique_source": True, "min_degree_ok": False, "connected": True,
            "l_le_1": True, "in_A_circ": True, "in_S": True,
        }
        assert classify(kronecker()).as_dict() == {
            "unique_source": True, "min_degree_ok": True, "connected": True,
            "l_le_1": True, "in_A_circ": True, "in_S": True,
        }
        assert classify(triangle()).as_dict() == {
            "unique_source": True, "min_degree_ok": True, "connected": True,
            "l_le_1": True, "in_A_circ": True, "in_S": True,
        }
        assert classify(diamond()).as_dict() == {
            "unique_source": True, "min_degree_ok": True, "connected": True,
            "l_le_1": False, "in_A_circ": False, "in_S": False,
        }
        assert classify(star4()).as_dict() == {
            "unique_source": True, "min_degree_ok": True, "connected": True,
            "l_le_1": True, "in_A_circ": True, "in_S": True,
        }

    def test_min_degree_witness(self):
        assert min_degree_failure(point()) == 0
        assert min_degree_failure(kronecker()) is None
        assert min_degree_failure(Quiver(2, ((1, 0),))) in (0, 1)


def test_doubled_has_both_directions():
    q = triangle()
    adj = doubled(q)
    for a, b in q.arrows:
        assert (b, 1) in adj[a]
        assert (a, 0) in adj[b]
    assert sum(len(nbrs) for nbrs in adj) == 2 * len(q.arrows)
