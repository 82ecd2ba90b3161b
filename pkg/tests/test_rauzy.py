import random

import pytest
from hypothesis import given, settings, strategies as st

from periodica.forbidden import reduced_system
from periodica.rauzy import (
    IdentityViolation,
    RauzyGraph,
    apply_restrictions,
    build_graph,
    census,
    evolve,
    half_step,
)
from periodica.words import BINARY, TERNARY, Necklace, enumerate_necklaces, random_necklace


def N(text, alphabet=BINARY):
    return Necklace.from_text(text, alphabet)


class TestBuildGraph:
    def test_aab_order_1(self):
        g = build_graph(N("aab"), 1)
        assert g.vertices == {"a", "b"}
        assert g.edges == {"aa", "ab", "ba"}

    def test_aab_order_3_is_cycle(self):
        g = build_graph(N("aab"), 3)
        assert g.is_simple_cycle()
        assert g.size == 3

    def test_order_0_two_letters(self):
        g = build_graph(N("aabab"), 0)
        assert g.vertices == {""}
        assert g.edges == {"a", "b"}

    def test_degree_bounds(self):
        for n in range(1, 9):
            for w in enumerate_necklaces(BINARY, n):
                for k in range(0, n + 1):
                    indeg, outdeg = build_graph(w, k).degree_maps()
                    assert all(1 <= d <= 2 for d in indeg.values())
                    assert all(1 <= d <= 2 for d in outdeg.values())


class TestHalfStep:
    def test_complete_step_from_order_0(self):
        h = half_step(build_graph(N("aabab"), 0))
        assert h.vertices == {"a", "b"}
        assert h.edges == {"aa", "ab", "ba", "bb"}

    def test_aab_order_1(self):
        h = half_step(build_graph(N("aab"), 1))
        assert h.vertices == {"aa", "ab", "ba"}
        assert h.edges == {"aaa", "aab", "aba", "baa", "bab"}

    def test_cycle_reproduces(self):
        g = build_graph(N("aab"), 3)
        h = half_step(g)
        assert h.size == g.size
        assert h.is_simple_cycle()

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=6), st.randoms(use_true_random=False))
    @settings(max_examples=80, deadline=None)
    def test_edge_count_formula(self, n, k, rnd):
        words = list(enumerate_necklaces(BINARY, n))
        w = words[rnd.randrange(len(words))]
        g = build_graph(w, k)
        indeg, outdeg = g.degree_maps()
        assert half_step(g).size == sum(indeg[v] * outdeg[v] for v in g.vertices)


class TestApplyRestrictions:
    def test_first_step_of_aab(self):
        h = half_step(build_graph(N("aab"), 0))
        g1 = apply_restrictions(h, {"bb"})
        assert g1.edges == build_graph(N("aab"), 1).edges

    def test_second_step_of_aab(self):
        h = half_step(build_graph(N("aab"), 1))
        g2 = apply_restrictions(h, {"aaa", "bab"})
        assert g2.edges == build_graph(N("aab"), 2).edges
        assert g2.is_simple_cycle()

    def test_identity_on_empty_set(self):
        h = half_step(build_graph(N("aab"), 1))
        assert apply_restrictions(h, set()).edges == h.edges

    def test_missing_restriction_raises(self):
        h = half_step(build_graph(N("aab"), 1))
        with pytest.raises(ValueError):
            apply_restrictions(h, {"bbb"})

    def test_reproduces_next_graph_with_reduced_system(self):
        for n in range(1, 9):
            for w in enumerate_necklaces(BINARY, n):
                system = reduced_system(w)
                for k in range(0, w.n):
                    got = apply_restrictions(half_step(build_graph(w, k)), system.restrictions)
                    assert got.edges == build_graph(w, k + 1).edges


class TestCensus:
    def test_aab_order_1(self):
        c = census(build_graph(N("aab"), 1))
        assert c.roads == 1 and c.c == 1 and c.f_in == 0
        assert c.d_in == 1 and c.t_in == 2

    def test_order_0_binary(self):
        c = census(build_graph(N("ab"), 0))
        assert c.c == 1 and c.d_in == 1 and c.t_in == 2

    def test_simple_cycle_has_no_forks(self):
        c = census(build_graph(N("aabab"), 5))
        assert c.d_in == 0 and c.c_pairs == 0 and c.roads == 5

    def test_binary_class_identities(self):
        for n in range(1, 9):
            for w in enumerate_necklaces(BINARY, n):
                for k in range(0, n + 1):
                    c = census(build_graph(w, k))
                    assert c.f_in == c.f_out
                    assert c.d_in == c.f_in + c.c
                    assert c.t_in == c.f_in + 2 * c.c
                    assert c.c_pairs == c.c

    def test_dangling_vertex_rejected(self):
        g = RauzyGraph(1, frozenset({"a", "b"}), frozenset({"ab"}), BINARY)
        with pytest.raises(ValueError):
            census(g)


class TestEvolve:
    def test_aab_trace(self):
        t = evolve(N("aab"))
        assert t.sizes == [2, 3, 3]
        assert t.r == [0, 1, 2]
        assert [c.c_pairs for c in t.censuses] == [1, 1, 0]
        assert [c.d_in for c in t.censuses] == [1, 1, 0]
        assert t.total_restrictions == 3

    def test_ab_trace(self):
        t = evolve(N("ab"))
        assert t.sizes == [2, 2]
        assert t.r == [0, 2]
        assert t.total_restrictions == 2

    def test_unary_trace(self):
        t = evolve(N("a"))
        assert t.k_final == 0
        assert t.r == [1]
        assert t.restrictions_found == {"b"}

    def test_collected_restrictions_are_reduced_system(self):
        for n in range(1, 10):
            for w in enumerate_necklaces(BINARY, n):
                t = evolve(w)
                assert t.restrictions_found == reduced_system(w).restrictions

    def test_terminates_by_n(self):
        rng = random.Random(3)
        for _ in range(40):
            w = random_necklace(rng, BINARY, rng.randint(1, 20))
            t = evolve(w)
            assert t.k_final <= w.n
            assert t.sizes[-1] == w.n

    def test_ternary(self):
        t = evolve(N("abc", TERNARY))
        assert t.total_restrictions == 6
        t = evolve(N("a", TERNARY))
        assert t.r == [2]

    def test_deletions_follow_crossroads(self):
        # Every deleted window's middle vertex was a crossroad one stage earlier.
        rng = random.Random(5)
        for _ in range(25):
            w = random_necklace(rng, BINARY, rng.randint(2, 14))
            system = reduced_system(w)
            for r in system.sorted_restrictions():
                if len(r) < 2:
                    continue
                k = len(r) - 2
                g = build_graph(w, k)
                indeg, outdeg = g.degree_maps()
                middle = r[1:-1]
                assert indeg[middle] == 2 and outdeg[middle] == 2

    def test_deleting_one_edge_drops_one_fork(self):
        # Restriction monotonicity, checked edge by edge along real evolutions.
        rng = random.Random(9)
        for _ in range(15):
            w = random_necklace(rng, BINARY, rng.randint(2, 12))
            system = reduced_system(w)
            for k in range(0, w.n):
                h = half_step(build_graph(w, k))
                applicable = sorted(r for r in system.restrictions if len(r) == k + 2)
                cur = h
                for r in applicable:
                    nxt = apply_restrictions(cur, {r})
                    assert census(nxt).d_in == census(cur).d_in - 1
                    cur = nxt


def test_dot_export():
    g = build_graph(N("aab"), 1)
    dot = g.to_dot()
    assert dot.startswith("digraph")
    assert '"a" -> "b" [label="ab"]' in dot
    dashed = half_step(build_graph(N("aab"), 0)).to_dot(dashed_edges={"bb"})
    assert "style=dashed" in dashed
