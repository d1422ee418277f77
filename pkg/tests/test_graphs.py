import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bundleforge import (
    automorphisms,
    compose,
    cycle_graph,
    fiber,
    find_isomorphism,
    identity_morphism,
    induced_subgraph,
    make_graph,
    make_morphism,
    neighborhood,
    preserves_edges,
    validate_morphism,
)
from bundleforge.errors import (
    DuplicateVertex,
    EnumerationBoundExceeded,
    LoopEdge,
    NotAMorphism,
    SearchBudgetExceeded,
    UnknownEndpoint,
    UnknownVertex,
)
from bundleforge.graphs import Graph, is_isomorphism, perm_label_map
from bundleforge.named import hexagonal_prism, twisted_hexagonal_ladder


class TestMakeGraph:
    def test_k3(self):
        g = make_graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
        assert g.n == 3
        assert len(g.edges) == 3

    def test_c6_labels_and_edges(self):
        g = cycle_graph(6)
        assert g.vertices == ("1", "2", "3", "4", "5", "6")
        assert g.has_edge("6", "1")
        assert len(g.edges) == 6

    def test_single_vertex(self):
        g = make_graph(["a"], [])
        assert g.vertices == ("a",)
        assert not g.edges

    def test_integer_labels_canonicalized(self):
        g = make_graph([1, 2], [(1, 2)])
        assert g.vertices == ("1", "2")

    def test_duplicate_vertex(self):
        with pytest.raises(DuplicateVertex):
            make_graph([1, 1], [])

    def test_loop_edge(self):
        with pytest.raises(LoopEdge):
            make_graph([1, 2], [(1, 1)])

    def test_unknown_endpoint(self):
        with pytest.raises(UnknownEndpoint):
            make_graph([1, 2], [(1, 3)])


class TestMorphisms:
    def test_identity_is_valid(self, k3):
        ok, bad = validate_morphism(identity_morphism(k3))
        assert ok and not bad

    def test_c6_to_c3_projection_valid(self, p_c6_c3):
        ok, bad = validate_morphism(p_c6_c3)
        assert ok and not bad

    def test_constant_collapse_is_valid(self, k2):
        f = make_morphism(k2, k2, {"1": "1", "2": "1"})
        ok, _ = validate_morphism(f)
        assert ok

    def test_invalid_morphism_reports_edges(self, k2, two_k1):
        f = make_morphism(k2, two_k1, {"1": "1", "2": "2"})
        ok, bad = validate_morphism(f)
        assert not ok
        assert bad == [("1", "2")]

    def test_totality_enforced(self, k2, k3):
        with pytest.raises(UnknownVertex):
            make_morphism(k2, k3, {"1": "1"})

    def test_preserves_edges_identity(self, c6):
        assert preserves_edges(identity_morphism(c6))

    def test_preserves_edges_constant_false(self, k2):
        f = make_morphism(k2, k2, {"1": "1", "2": "1"})
        assert not preserves_edges(f)

    def test_preserves_edges_projection(self, c6, c3, p_c6_c3):
        # Every hexagon edge must land on a triangle edge: checked directly.
        for a, b in c6.edge_list():
            assert c3.has_edge(p_c6_c3(a), p_c6_c3(b))
        assert preserves_edges(p_c6_c3)

    def test_preserves_edges_requires_morphism(self, k2, two_k1):
        f = make_morphism(k2, two_k1, {"1": "1", "2": "2"})
        with pytest.raises(NotAMorphism):
            preserves_edges(f)

    def test_composition_of_morphisms_is_morphism(self, c6, c3, p_c6_c3):
        g = make_morphism(c3, c3, {"1": "2", "2": "3", "3": "1"})
        ok, _ = validate_morphism(compose(g, p_c6_c3))
        assert ok


class TestSubgraphs:
    def test_induced_k2(self, k3):
        sub = induced_subgraph(k3, ["1", "2"])
        assert sub.vertices == ("1", "2")
        assert len(sub.edges) == 1

    def test_induced_odd_hexagon_vertices_isolated(self, c6):
        sub = induced_subgraph(c6, ["1", "3", "5"])
        assert sub.vertices == ("1", "3", "5")
        assert not sub.edges

    def test_full_subset_is_identity(self, c6):
        assert induced_subgraph(c6, c6.vertices) == c6

    def test_unknown_vertex(self, k3):
        with pytest.raises(UnknownVertex):
            induced_subgraph(k3, ["9"])

    def test_neighborhood_is_star_only(self, k3):
        star = neighborhood(k3, "1")
        assert star.vertices == ("1", "2", "3")
        # The edge between the two neighbors is excluded.
        assert len(star.edges) == 2
        assert not star.has_edge("2", "3")

    def test_neighborhood_c6(self, c6):
        star = neighborhood(c6, "1")
        assert star.vertices == ("1", "2", "6")
        assert star.has_edge("1", "2") and star.has_edge("1", "6")

    def test_neighborhood_isolated(self):
        g = make_graph(["v"], [])
        assert neighborhood(g, "v") == g


class TestFibers:
    def test_projection_fiber_is_edgeless(self, p_c6_c3):
        f = fiber(p_c6_c3, "1")
        assert f.vertices == ("3", "6")
        assert not f.edges

    def test_identity_fiber_single_vertex(self, k3):
        f = fiber(identity_morphism(k3), "2")
        assert f.vertices == ("2",)

    def test_twisted_ladder_fiber_is_an_edge(self, q_m3_c3):
        # The ladder rungs live inside the fibers, so each fiber is a K2.
        f = fiber(q_m3_c3, "1")
        assert f.vertices == ("3", "6")
        assert f.has_edge("3", "6")

    def test_fibers_partition_domain(self, p_c6_c3):
        pieces = [fiber(p_c6_c3, v).vertices for v in p_c6_c3.codomain.vertices]
        flat = sorted(itertools.chain.from_iterable(pieces))
        assert flat == sorted(p_c6_c3.domain.vertices)


REFERENCE_WITNESS = {str(i): str(i) for i in range(1, 13)}
REFERENCE_WITNESS.update({"3": "9", "9": "3", "4": "10", "10": "4", "5": "11", "11": "5"})


class TestIsomorphism:
    def test_prism_and_twisted_ladder_cover(self):
        g, h = hexagonal_prism(), twisted_hexagonal_ladder()
        found = find_isomorphism(g, h)
        assert found is not None
        assert is_isomorphism(found, g, h)
        # The three-transposition witness also validates.
        assert is_isomorphism(REFERENCE_WITNESS, g, h)

    def test_k3_equals_c3(self, k3, c3):
        found = find_isomorphism(k3, c3)
        assert found is not None

    def test_edge_count_mismatch(self, k2, two_k1):
        assert find_isomorphism(k2, two_k1) is None

    def test_found_implies_invariants_match(self, c6):
        h = make_graph([10, 20, 30, 40, 50, 60], [(10, 20), (20, 30), (30, 40), (40, 50), (50, 60), (60, 10)])
        found = find_isomorphism(c6, h)
        assert found is not None
        assert c6.degree_sequence() == h.degree_sequence()

    def test_budget_exceeded_signals_unknown(self, c6):
        with pytest.raises(SearchBudgetExceeded):
            find_isomorphism(c6, cycle_graph(6), budget=1)

    def test_deterministic_witness(self, k3, c3):
        assert find_isomorphism(k3, c3) == find_isomorphism(k3, c3)


class TestAutomorphisms:
    def test_k2(self, k2):
        assert len(automorphisms(k2)) == 2

    def test_k3_matches_brute_force(self, k3):
        # Independent oracle: filter all vertex permutations directly.
        count = 0
        for images in itertools.permutations(range(3)):
            ok = all(
                k3.has_edge(k3.vertices[images[k3.index[a]]], k3.vertices[images[k3.index[b]]])
                for a, b in k3.edge_list()
            )
            count += ok
        auts = automorphisms(k3)
        assert count == 6
        assert len(auts) == count

    def test_two_isolated_vertices(self, two_k1):
        assert len(automorphisms(two_k1)) == 2

    def test_group_closure_and_inverses(self, c4):
        auts = set(automorphisms(c4))
        assert any(p.is_identity() for p in auts)
        for p in auts:
            assert p.inverse() in auts
            for q in auts:
                assert p.compose(q) in auts

    def test_enumeration_bound(self):
        with pytest.raises(EnumerationBoundExceeded):
            automorphisms(cycle_graph(11))

    def test_label_map_roundtrip(self, c4):
        for p in automorphisms(c4):
            mapping = perm_label_map(c4, p)
            assert is_isomorphism(mapping, c4, c4)


class TestSerialization:
    def test_json_roundtrip(self, m62):
        assert Graph.from_json(m62.to_json()) == m62

    def test_edges_stored_in_vertex_order(self, c6):
        data = c6.to_json()
        assert ["1", "6"] in data["edges"]
        for a, b in data["edges"]:
            assert c6.index[a] < c6.index[b]

    def test_dot_output(self, k2):
        dot = k2.to_dot()
        assert dot.startswith("graph G {")
        assert '"1" -- "2";' in dot


@st.composite
def small_graph(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    labels = [str(i) for i in range(1, n + 1)]
    pairs = list(itertools.combinations(labels, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return make_graph(labels, [p for p, keep in zip(pairs, mask) if keep])


@given(small_graph(), small_graph(), st.data())
@settings(max_examples=60, deadline=None)
def test_random_morphism_composition_stays_valid(g1, g2, data):
    # Sample arbitrary weak morphisms and check composition stays one.
    f_map = {v: data.draw(st.sampled_from(g2.vertices)) for v in g1.vertices}
    f = make_morphism(g1, g2, f_map)
    ok, _ = validate_morphism(f)
    if not ok:
        return
    g_map = {v: data.draw(st.sampled_from(g1.vertices)) for v in g2.vertices}
    g = make_morphism(g2, g1, g_map)
    ok, _ = validate_morphism(g)
    if not ok:
        return
    composed_ok, _ = validate_morphism(compose(g, f))
    assert composed_ok
