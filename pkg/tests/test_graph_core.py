import math

import numpy as np
import pytest
from conftest import small_graphs
from hypothesis import given
from hypothesis import strategies as st

import oracles
from quasirandom.generators import (
    Blocks,
    WeightedTemplate,
    build_four_block_counterexample,
    check_seed,
    child_seeds,
    expand_template,
    gen_gnp,
)
from quasirandom.graph import Graph, VertexSet, induced_subgraph
from quasirandom.io import (
    DuplicateEdgeError,
    MalformedLineError,
    SelfLoopError,
    VertexRangeError,
    blocks_path,
    format_graph,
    load_blocks,
    load_graph,
    parse_graph,
    save_blocks,
    save_graph,
)
from quasirandom.patterns import Pattern, complete, complete_bipartite, cycle, get_pattern, path, pattern_names


class TestVertexSet:
    def test_size_is_popcount(self):
        s = VertexSet.of([0, 3, 5])
        assert s.size == 3 == len(s) == bin(s.bits).count("1")

    def test_algebra(self):
        a, b = VertexSet.of([0, 1, 2]), VertexSet.of([2, 3])
        assert (a | b).to_list() == [0, 1, 2, 3]
        assert (a & b).to_list() == [2]
        assert (a - b).to_list() == [0, 1]
        assert not a.isdisjoint(b)
        assert VertexSet.of([1]).issubset(a)

    def test_indicator_round_trip(self):
        s = VertexSet.of([1, 4])
        assert VertexSet.of(np.flatnonzero(s.to_indicator(6))) == s


class TestGraph:
    def test_rejects_asymmetric_rows(self):
        with pytest.raises(ValueError):
            Graph(2, (0b10, 0b00))

    def test_rejects_loops(self):
        with pytest.raises(ValueError):
            Graph(2, (0b01, 0b00))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 3)])

    @given(small_graphs())
    def test_matrix_symmetric_irreflexive(self, g):
        a = oracles.adj(g)
        assert (a == a.T).all() and not a.diagonal().any()
        assert int(a.sum()) == 2 * g.edge_count

    @given(small_graphs(min_n=2), st.data())
    def test_induced_subgraph_edge_count_matches_e(self, g, data):
        keep = data.draw(st.lists(st.integers(0, g.n - 1), unique=True))
        s = VertexSet.of(keep)
        assert induced_subgraph(g, s).edge_count == g.e(s)

    def test_induced_subgraph_of_complete(self):
        sub = induced_subgraph(Graph.complete(5), VertexSet.of([0, 2, 4]))
        assert sub.n == 3 and sub.edge_count == 3

    @given(small_graphs())
    def test_induced_subgraph_full_set_is_identity(self, g):
        assert induced_subgraph(g, g.vertices) == g

    def test_e_between_counts_overlap_twice(self):
        g = Graph.complete(3)
        s = VertexSet.of([0, 1])
        assert g.e_between(s, s) == 2 * g.e(s)


class TestPatterns:
    @pytest.mark.parametrize("name", pattern_names())
    def test_girth_matches_brute_force(self, name):
        h = get_pattern(name)
        assert h.girth == oracles.girth(h.r, h.edges)

    def test_library_shapes(self):
        assert complete(4).m == 6
        assert cycle(6).girth == 6
        assert path(3).girth == math.inf
        assert complete_bipartite(3, 3).girth == 4

    def test_rejects_bad_patterns(self):
        with pytest.raises(ValueError):
            Pattern(3, ((0, 0),))
        with pytest.raises(ValueError):
            Pattern(3, ((0, 1), (1, 0)))
        with pytest.raises(ValueError):
            Pattern(11, ((0, 1),))

    def test_unknown_pattern(self):
        with pytest.raises(KeyError):
            get_pattern("nope")

    def test_pattern_from_file(self, tmp_path):
        f = tmp_path / "tri.el"
        f.write_text("3 3\n0 1\n0 2\n1 2\n")
        h = get_pattern(str(f))
        assert h.r == 3 and h.m == 3


class TestGenerators:
    def test_gnp_extremes(self):
        assert gen_gnp(5, 0, 1).edge_count == 0
        assert gen_gnp(5, 1, 1).edge_count == 10

    def test_gnp_concentration(self):
        g = gen_gnp(1000, 0.5, 42)
        pairs = math.comb(1000, 2)
        assert abs(g.edge_count - pairs / 2) <= 4 * math.sqrt(pairs * 0.25)

    def test_gnp_rejects_bad_p(self):
        with pytest.raises(ValueError):
            gen_gnp(5, 1.5, 0)

    def test_seed_range(self):
        assert check_seed(2**64 - 1) == 2**64 - 1
        with pytest.raises(ValueError):
            check_seed(-1)
        with pytest.raises(ValueError):
            check_seed(2**64)

    @given(st.integers(0, 2**64 - 1))
    def test_gnp_deterministic(self, seed):
        assert gen_gnp(12, 0.5, seed) == gen_gnp(12, 0.5, seed)

    def test_one_block_template_equals_gnp(self):
        g, _ = expand_template(WeightedTemplate(((0.3,),), (40,)), 9)
        assert g == gen_gnp(40, 0.3, 9)

    def test_deterministic_template(self):
        g, blocks = expand_template(WeightedTemplate(((1, 0), (0, 1)), (3, 3)), 0)
        assert sorted(g.edges()) == [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
        assert blocks == Blocks(((0, 1, 2), (3, 4, 5)))

    def test_template_cross_density(self):
        g, blocks = expand_template(WeightedTemplate(((0.4, 0.6), (0.6, 0.4)), (500, 500)), 3)
        a, b = blocks.as_sets()
        assert abs(g.density_between(a, b) - 0.6) < 0.03

    def test_template_validation(self):
        with pytest.raises(ValueError):
            WeightedTemplate(((0.2, 0.3), (0.4, 0.2)))
        with pytest.raises(ValueError):
            WeightedTemplate(((1.2,),))

    def test_template_matches_gnp_in_distribution(self):
        pairs = math.comb(60, 2)
        t = WeightedTemplate(((0.3, 0.3), (0.3, 0.3)), (30, 30))
        a = [expand_template(t, 1000 + s)[0].edge_count for s in range(100)]
        b = [gen_gnp(60, 0.3, 5000 + s).edge_count for s in range(100)]
        se = math.sqrt(2 * pairs * 0.3 * 0.7 / 100)
        assert abs(np.mean(a) - np.mean(b)) <= 3 * se

    def test_counterexample_forced_structure_n8(self):
        g, blocks = build_four_block_counterexample(8, 0)
        v1, v2, v3, v4 = blocks.as_sets()
        assert g.e(v1) == g.e(v2) == 1
        assert g.e(v3) == g.e(v4) == 0
        assert g.e_between(v3, v4) == 4
        assert g.e_between(v1, v2) == 0
        sub = induced_subgraph(g, v3 | v4)
        assert sorted(sub.edges()) == [(0, 2), (0, 3), (1, 2), (1, 3)]

    def test_counterexample_density_n64(self):
        g, _ = build_four_block_counterexample(64, 7)
        assert abs(g.density() - 0.5) < 0.06

    @pytest.mark.parametrize("n", [63, 4, 10])
    def test_counterexample_rejects_bad_n(self, n):
        with pytest.raises(ValueError):
            build_four_block_counterexample(n, 0)

    def test_child_seeds_prefix_stable(self):
        short = [s.generate_state(2).tolist() for s in child_seeds(5, 3)]
        long = [s.generate_state(2).tolist() for s in child_seeds(5, 6)]
        assert long[:3] == short


class TestIO:
    def test_parse_path(self):
        g = parse_graph("3 2\n0 1\n1 2")
        assert g.n == 3 and sorted(g.edges()) == [(0, 1), (1, 2)]

    def test_round_trip(self, tmp_path):
        g = gen_gnp(50, 0.3, 1)
        f = tmp_path / "g.el"
        save_graph(g, f)
        assert load_graph(f) == g
        assert f.read_bytes().endswith(b"\n") and b"\r" not in f.read_bytes()

    @given(small_graphs())
    def test_format_parse_round_trip(self, g):
        assert parse_graph(format_graph(g)) == g

    @pytest.mark.parametrize(
        "text, err, line",
        [
            ("3 1\n0 0", SelfLoopError, 2),
            ("3 1\n0 3", VertexRangeError, 2),
            ("3 2\n0 1\n1 0", DuplicateEdgeError, 3),
            ("3 1\n0 x", MalformedLineError, 2),
            ("3 2\n0 1", MalformedLineError, 3),
            ("3 1\n0 1\n1 2", MalformedLineError, 3),
            ("", MalformedLineError, 1),
            ("3\n", MalformedLineError, 1),
        ],
    )
    def test_parse_errors_name_the_line(self, text, err, line):
        with pytest.raises(err) as info:
            parse_graph(text)
        assert info.value.line == line
        assert f"line {line}" in str(info.value)

    def test_blocks_sidecar(self, tmp_path):
        b = Blocks(((0, 1), (2, 3)))
        f = blocks_path(tmp_path / "g.el")
        assert f.name == "g.el.blocks.json"
        save_blocks(b, f)
        assert load_blocks(f) == b
