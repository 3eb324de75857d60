import random

import pytest
from hypothesis import given, settings, strategies as st

from evcgame.graphs import (Graph, GraphFormatError, INFINITE, SizeLimitError,
                            bipartition, classify, diameter, is_vertex_cover,
                            max_bipartite_matching, max_matching, mvc_bipartite,
                            mvc_brute, mvc_exact, parse_graph, serialize_graph,
                            two_matching_cover)
from support import (all_matchings_max, clique_graph, cycle_graph,
                     mvc_by_subsets, path_graph, random_graph, star_graph)


class TestParsing:
    def test_single_edge(self):
        g = parse_graph("graph 2\ne a b")
        assert g.n == 2 and g.ids == ("a", "b") and g.edges == ((0, 1),)

    def test_path(self):
        g = parse_graph("graph 3\ne a b\ne b c")
        assert g.n == 3 and len(g.edges) == 2

    def test_default_ids(self):
        g = parse_graph("graph 3")
        assert g.ids == ("v0", "v1", "v2")

    def test_comments_and_v_lines(self):
        text = "# hello\ngraph 2  # two vertices\nv a\nv b\ne a b\n"
        assert parse_graph(text).edges == ((0, 1),)

    @pytest.mark.parametrize("bad", [
        "graph 2\ne a a",                # self-loop
        "graph 2\ne a b\ne b a",         # duplicate edge
        "graph 2\nv a\nv b\ne a c",      # unknown id
        "graph 2\nv a\ne a b",           # v-line count mismatch
        "graph one\n",                   # malformed header
        "e a b",                         # missing header
        "graph 1\ne a b",                # too many implicit vertices
        "graph 2\nwat a b",              # unknown directive
    ])
    def test_errors(self, bad):
        with pytest.raises(GraphFormatError):
            parse_graph(bad)

    def test_roundtrip_is_identity_on_canonical_files(self):
        rng = random.Random(5)
        for _ in range(50):
            g = random_graph(rng, rng.randint(0, 9))
            text = serialize_graph(g)
            assert parse_graph(text) == g
            assert serialize_graph(parse_graph(text)) == text


class TestCovers:
    def test_is_vertex_cover_examples(self):
        p3 = path_graph(3)
        assert is_vertex_cover(p3, {1})
        assert not is_vertex_cover(p3, {0})
        c4 = cycle_graph(4)
        assert is_vertex_cover(c4, {0, 2})

    def test_mvc_examples(self):
        assert mvc_exact(clique_graph(4))[0] == 3
        assert mvc_exact(path_graph(4))[0] == 2
        assert mvc_exact(star_graph(4))[0] == 1

    def test_mvc_limit(self):
        g = Graph.from_indices(30, [(0, 1)])
        with pytest.raises(SizeLimitError):
            mvc_exact(g)

    def test_bnb_and_brute_agree(self):
        rng = random.Random(11)
        for _ in range(200):
            g = random_graph(rng, rng.randint(1, 9))
            size, witness = mvc_exact(g)
            assert size == mvc_brute(g)[0] == mvc_by_subsets(g)
            assert is_vertex_cover(g, witness) and len(witness) == size


class TestMatching:
    def test_examples(self):
        assert len(max_matching(parse_graph("graph 2\ne a b"))) == 1
        assert len(max_matching(path_graph(4))) == 2
        assert len(max_matching(cycle_graph(5))) == 2

    def test_against_exhaustive(self):
        rng = random.Random(23)
        for _ in range(120):
            g = random_graph(rng, rng.randint(2, 7))
            m = max_matching(g)
            assert len({v for e in m for v in e}) == 2 * len(m)
            assert all(g.has_edge(u, v) for u, v in m)
            assert len(m) == all_matchings_max(g)

    def test_hopcroft_karp_pairing(self):
        g = path_graph(6)
        left, right = bipartition(g)
        pair = max_bipartite_matching(g, left)
        matched = {v for v in pair if v in left}
        assert len(matched) == 3


class TestKoenig:
    def test_examples(self):
        k33 = Graph([f"l{i}" for i in range(3)] + [f"r{i}" for i in range(3)],
                    [(f"l{i}", f"r{j}") for i in range(3) for j in range(3)])
        assert mvc_bipartite(k33)[0] == 3
        assert mvc_bipartite(path_graph(4))[0] == 2
        assert mvc_bipartite(Graph(["a", "b"], [])) == (0, frozenset())

    def test_rejects_odd_cycle(self):
        with pytest.raises(GraphFormatError):
            mvc_bipartite(cycle_graph(5))

    @settings(max_examples=120, deadline=None)
    @given(st.integers(0, 10), st.randoms(use_true_random=False))
    def test_agrees_with_exact_on_bipartite(self, n, rnd):
        g = random_graph(rnd, n)
        if bipartition(g) is None:
            return
        size, witness = mvc_bipartite(g)
        assert size == mvc_exact(g)[0]
        assert is_vertex_cover(g, witness) and len(witness) == size

    def test_agrees_with_exact_500_samples(self):
        rng = random.Random(101)
        bipartite_hits = 0
        for trial in range(500):
            n = rng.randint(1, 10)
            if trial % 2:
                g = random_graph(rng, n, rng.choice((0.15, 0.3)))
            else:
                # planted bipartition so the bipartite case stays well fed
                left = rng.randint(0, n)
                edges = [(i, j) for i in range(left) for j in range(left, n)
                         if rng.random() < 0.4]
                g = Graph.from_indices(n, edges)
            if bipartition(g) is None:
                continue
            bipartite_hits += 1
            size, witness = mvc_bipartite(g)
            assert size == mvc_exact(g)[0]
            assert is_vertex_cover(g, witness) and len(witness) == size
        assert bipartite_hits >= 300


class TestTwoApprox:
    def test_examples(self):
        assert len(two_matching_cover(parse_graph("graph 2\ne a b"))) == 2
        assert len(two_matching_cover(path_graph(4))) == 4
        assert len(two_matching_cover(star_graph(4))) == 2

    def test_bounds(self):
        rng = random.Random(7)
        for _ in range(150):
            g = random_graph(rng, rng.randint(1, 9))
            cover = two_matching_cover(g)
            assert is_vertex_cover(g, cover)
            opt = mvc_exact(g)[0]
            assert opt <= len(cover) <= 2 * opt


class TestDiameterAndClassify:
    def test_diameter_examples(self):
        assert diameter(clique_graph(4)) == 1
        assert diameter(path_graph(4)) == 3
        assert diameter(Graph(["a", "b", "c", "d"],
                              [("a", "b"), ("c", "d")])) == INFINITE

    def test_classify_examples(self):
        f = classify(cycle_graph(4))
        assert f.bipartite and f.cobipartite and not f.split
        f = classify(clique_graph(4))
        assert f.split and f.cobipartite and not f.bipartite
        f = classify(cycle_graph(5))
        assert not (f.bipartite or f.split or f.cobipartite)

    def test_cobipartite_complement_duality(self):
        rng = random.Random(3)
        for _ in range(200):
            g = random_graph(rng, rng.randint(1, 8))
            assert classify(g).cobipartite == classify(g.complement()).bipartite

    def test_split_against_partition_search(self):
        # split iff some subset is a clique whose complement set is independent
        from itertools import combinations
        rng = random.Random(9)
        for _ in range(120):
            g = random_graph(rng, rng.randint(1, 7))
            expected = False
            for r in range(g.n + 1):
                for combo in combinations(range(g.n), r):
                    cl = set(combo)
                    rest = set(range(g.n)) - cl
                    if all(g.has_edge(u, v) for u in cl for v in cl if u < v) \
                            and not any(g.has_edge(u, v)
                                        for u in rest for v in rest if u < v):
                        expected = True
                        break
                if expected:
                    break
            assert classify(g).split == expected
