import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irrdec.graph_core import (
    Decomposition,
    ExceptionFamily,
    Graph,
    canon_edge,
    complete,
    complete_bipartite,
    cycle,
    generate,
    gnp,
    is_locally_irregular,
    is_locally_irregular_decomposition,
    is_t_member,
    parse_edge_list,
    path,
    random_regular,
    recognize_exception,
    serialize_edge_list,
    spider,
    t_family,
    t_family_members,
)


class TestGraph:
    def test_canon_edge(self):
        assert canon_edge(3, 1) == (1, 3)
        with pytest.raises(ValueError):
            canon_edge(2, 2)

    def test_basics(self):
        g = Graph(4, [(0, 1), (2, 1), (2, 3)])
        assert g.m == 3
        assert g.degree(1) == 2
        assert g.degrees() == [1, 2, 2, 1]
        assert g.neighbours(2) == frozenset({1, 3})
        assert g.has_edge(1, 0) and not g.has_edge(0, 3)
        assert g.min_degree() == 1 and g.max_degree() == 2

    def test_edge_range_check(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 3)])

    def test_subgraph_ops(self):
        g = complete(4)
        h = g.without_edges([(0, 1), (2, 3)])
        assert h.n == 4 and h.m == 4
        s = g.spanning([(0, 1), (2, 3)])
        assert s.n == 4 and s.edges == frozenset({(0, 1), (2, 3)})
        assert s.union_edges(h).edges == g.edges

    def test_components(self):
        g = Graph(5, [(0, 1), (2, 3)])
        comps = sorted(map(sorted, g.components()))
        assert comps == [[0, 1], [2, 3], [4]]
        assert not g.is_connected()
        assert cycle(5).is_connected()

    def test_equality_and_hash(self):
        assert Graph(3, [(0, 1)]) == Graph(3, [(1, 0)])
        assert Graph(3, [(0, 1)]) != Graph(4, [(0, 1)])
        assert len({Graph(3, [(0, 1)]), Graph(3, [(0, 1)])}) == 1


class TestLocalIrregularity:
    def test_examples(self):
        assert is_locally_irregular(path(2))
        assert not is_locally_irregular(path(1))
        assert not is_locally_irregular(path(3))
        assert not is_locally_irregular(cycle(4))
        assert is_locally_irregular(complete_bipartite(1, 3))
        assert is_locally_irregular(Graph(3, []))

    def test_decomposition_validate(self):
        g = path(2)
        Decomposition(g, 1, {(0, 1): 1, (1, 2): 1}).validate()
        with pytest.raises(ValueError):
            Decomposition(g, 1, {(0, 1): 1}).validate()  # missing edge
        with pytest.raises(ValueError):
            Decomposition(g, 1, {(0, 1): 1, (1, 2): 2}).validate()  # colour > k
        with pytest.raises(ValueError):
            Decomposition(g, 1, {(0, 1): 1, (1, 2): 1, (0, 2): 1}).validate()

    def test_decomposition_checker(self):
        g = cycle(4)
        # adjacent edge pairs form two paths with a degree-2 middle vertex
        good = Decomposition(g, 2, {(0, 1): 1, (1, 2): 1, (2, 3): 2, (0, 3): 2})
        assert is_locally_irregular_decomposition(good)
        bad = Decomposition(g, 1, {e: 1 for e in g.edges})
        assert not is_locally_irregular_decomposition(bad)
        # a class of two disjoint single edges has equal endpoint degrees
        pairs = Decomposition(g, 2, {(0, 1): 1, (2, 3): 1, (1, 2): 2, (0, 3): 2})
        assert not is_locally_irregular_decomposition(pairs)
        # empty classes are fine
        padded = Decomposition(g, 3, {(0, 1): 1, (1, 2): 1, (2, 3): 3, (0, 3): 3})
        assert is_locally_irregular_decomposition(padded)


class TestGenerators:
    def test_shapes(self):
        assert path(0).n == 1 and path(0).m == 0
        assert path(4).degrees() == [1, 2, 2, 2, 1]
        assert cycle(5).degrees() == [2] * 5
        assert complete(5).m == 10
        g = complete_bipartite(3, 4)
        assert g.m == 12 and sorted(g.degrees()) == [3, 3, 3, 3, 4, 4, 4]

    def test_spider_profile(self):
        g = spider(2)
        assert g.n == 10 and g.m == 9
        assert sorted(g.degrees()) == [1, 1, 1, 1, 2, 2, 2, 2, 3, 3]
        assert g.is_connected()
        with pytest.raises(ValueError):
            spider(3)  # odd hanging paths change the example

    def test_gnp_deterministic(self):
        a = gnp(20, 0.3, seed=5)
        b = gnp(20, 0.3, seed=5)
        c = gnp(20, 0.3, seed=6)
        assert a == b
        assert a != c

    def test_random_regular(self):
        g = random_regular(60, 12, seed=7)
        assert g.degrees() == [12] * 60
        assert g == random_regular(60, 12, seed=7)
        with pytest.raises(ValueError):
            random_regular(5, 3, seed=1)  # odd degree sum
        with pytest.raises(ValueError):
            random_regular(4, 4, seed=1)

    @given(st.integers(min_value=0, max_value=2**32))
    @settings(max_examples=10, deadline=None)
    def test_random_regular_always_simple_regular(self, seed):
        g = random_regular(14, 5, seed=seed)
        assert g.degrees() == [5] * 14

    def test_generate_dispatch(self):
        assert generate("cycle", {"m": 6}).m == 6
        with pytest.raises(ValueError):
            generate("hypercube", {})
        with pytest.raises(ValueError):
            generate("gnp", {"n": 5, "p": 0.5})  # missing seed


class TestEdgeListFormat:
    def test_roundtrip(self):
        g = spider(2)
        assert parse_edge_list(serialize_edge_list(g)) == g

    def test_comments_and_blanks(self):
        text = "# header comment\n4\n\n0 1  # trailing\n2 3\n"
        g = parse_edge_list(text)
        assert g.n == 4 and g.edges == frozenset({(0, 1), (2, 3)})

    @pytest.mark.parametrize(
        "text,fragment",
        [
            ("", "empty"),
            ("x\n0 1\n", "1"),
            ("3\n1 0\n", "2"),          # u < v required
            ("3\n0 3\n", "2"),          # out of range
            ("3\n1 1\n", "2"),          # self loop
            ("3\n0 1\n0 1\n", "3"),     # duplicate
            ("3\n0 1 2\n", "2"),        # wrong arity
        ],
    )
    def test_errors_carry_line_numbers(self, text, fragment):
        with pytest.raises(ValueError) as err:
            parse_edge_list(text)
        assert fragment in str(err.value)


class TestExceptionFamilies:
    def test_odd_paths_and_cycles(self):
        assert recognize_exception(path(1)) is ExceptionFamily.ODD_PATH
        assert recognize_exception(path(3)) is ExceptionFamily.ODD_PATH
        assert recognize_exception(path(2)) is None
        assert recognize_exception(path(4)) is None
        assert recognize_exception(cycle(5)) is ExceptionFamily.ODD_CYCLE
        assert recognize_exception(cycle(4)) is None
        assert recognize_exception(cycle(6)) is None

    def test_triangle_reports_cycle_before_t(self):
        tri = cycle(3)
        assert is_t_member(tri)
        assert recognize_exception(tri) is ExceptionFamily.ODD_CYCLE

    def test_t_members(self):
        members = t_family_members(12)
        assert len(members) == 20
        assert sorted(g.m for g in members) == [3, 5, 7, 7, 7, 9, 9, 9, 9, 9,
                                                11, 11, 11, 11, 11, 11, 11, 11, 11, 11]
        for g in members:
            assert g.m % 2 == 1          # every member has odd size
            assert g.max_degree() <= 3
            assert is_t_member(g)
            if g.m > 3:
                assert recognize_exception(g) is ExceptionFamily.T_FAMILY

    def test_non_members(self):
        assert not is_t_member(complete(4))
        assert not is_t_member(path(4))
        assert not is_t_member(cycle(6))
        assert recognize_exception(spider(2)) is None
        assert recognize_exception(complete(4)) is None
        assert recognize_exception(Graph(1, [])) is None

    def test_t_family_script_units(self):
        base = t_family()
        assert base == cycle(3)
        bigger = [g for g in t_family_members(7) if g.m == 7]
        # appending one even path of length 2 or one odd path ending in a
        # glued triangle both give 7-edge members; both shapes must appear
        assert len(bigger) == 3

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            recognize_exception(Graph(4, [(0, 1)]))
