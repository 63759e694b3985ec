import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from conftest import block_chain
from models.complex import BlockComponent, Clique, SimplicialComplex
from models.errors import ResourceLimitError, StructuralError
from services.complex_service import ComplexService
from services.detideal_service import DetIdealService
from services.groebner_service import GroebnerService


def test_from_facets_normalizes_and_validates():
    complex_ = SimplicialComplex.from_facets(3, [[3, 1, 2], [2, 3, 4], [1, 2, 3]])
    assert complex_.facets == ((1, 2, 3), (2, 3, 4))
    assert complex_.vertices == (1, 2, 3, 4)
    assert complex_.dimension == 2 and complex_.is_pure
    with pytest.raises(StructuralError):
        SimplicialComplex.from_facets(3, [[1, 2], [1, 2, 3]])
    with pytest.raises(StructuralError):
        SimplicialComplex.from_facets(2, [[1, 2, 3]])
    with pytest.raises(StructuralError):
        SimplicialComplex.from_facets(3, [[0, 1]])


def test_isolated_vertices_count_towards_the_ring():
    complex_ = SimplicialComplex.from_facets(2, [[1, 2]], universe=[5])
    assert complex_.vertices == (1, 2, 5)
    assert DetIdealService.ring_for(complex_).layout.cols == 5


def test_clique_decomposition_of_mixed_dimensions(load_document):
    complex_ = load_document("four_cliques").to_complex()
    cliques = list(ComplexService.clique_decomposition(complex_))
    assert cliques == [
        Clique((1, 2, 3, 4), 2),
        Clique((3, 4, 5), 2),
        Clique((5, 6, 7), 2),
        Clique((7, 8, 9), 1),
    ]
    assert ComplexService.is_closed(complex_).closed


def test_closed_labeling_has_no_witness(load_document):
    result = ComplexService.is_closed(load_document("closed_path").to_complex())
    assert result.closed
    assert result.witness is None
    assert len(ComplexService.clique_decomposition(load_document("closed_path").to_complex())) == 4


def test_non_closed_labeling_reports_first_witness(load_document):
    result = ComplexService.is_closed(load_document("relabeled_path").to_complex())
    assert not result.closed
    assert result.witness.to_dict() == {"B": [1, 2], "C": [1, 3, 4], "k": 1, "l": 1, "vertex": 1}


def test_closed_labeling_search(load_document):
    complex_ = load_document("relabeled_path").to_complex()
    mapping = ComplexService.find_closed_labeling(complex_)
    assert mapping is not None
    assert sorted(mapping) == sorted(mapping.values()) == list(complex_.vertices)
    assert ComplexService.is_closed(complex_.relabel(mapping)).closed


def test_closed_labeling_search_is_bounded(load_document):
    with pytest.raises(ResourceLimitError) as info:
        ComplexService.find_closed_labeling(load_document("relabeled_path").to_complex(), limit=3)
    assert info.value.limit == "perm_limit"


def test_block_structure_of_single_component(load_document):
    structure = ComplexService.block_structure(load_document("block_structure").to_complex())
    assert len(structure.components) == 1
    component = structure.components[0]
    assert component.vertices == (1, 2, 3, 4, 5, 6)
    assert component.blocks == ((1, 3), (2, 5), (4, 6))
    assert component.large_blocks(3) == [(2, 5)]


def test_block_structure_splits_union(load_document):
    structure = ComplexService.block_structure(load_document("union").to_complex())
    first, second = structure.components
    assert first == BlockComponent((1, 2, 3), ((1, 3),), 0)
    assert second.vertices == (3, 4, 5, 6, 7, 8, 9)
    assert second.blocks == ((1, 3), (2, 5), (4, 6), (5, 7))
    assert second.overlap == 1
    assert second.labels((2, 5)) == (4, 5, 6, 7)


def test_block_structure_needs_facets_of_size_m(load_document):
    with pytest.raises(StructuralError):
        ComplexService.block_structure(load_document("closed_path").to_complex())


def test_block_structure_rejects_disjoint_components():
    complex_ = SimplicialComplex.from_facets(2, [[1, 2], [3, 4]])
    with pytest.raises(StructuralError) as info:
        ComplexService.block_structure(complex_)
    assert info.value.details["overlap"] == 0


def test_cactus_intersection_graph(load_document):
    complex_ = load_document("cactus").to_complex()
    groups = ComplexService.forest_components(complex_)
    assert [g.vertices for g in groups] == [(1, 2, 3, 4), (4, 5, 6, 7), (3, 7, 8, 9), (9, 10, 11, 12)]
    graph = ComplexService.intersection_graph(groups)
    assert graph.edges == ((1, 2), (1, 3), (2, 3), (3, 4))
    assert graph.is_cactus and graph.is_connected
    assert not graph.is_forest
    assert graph.shared[(3, 4)] == (9,)


def test_clique_graph_is_a_tree(load_document):
    cliques = list(ComplexService.clique_decomposition(load_document("clique_tree").to_complex()))
    graph = ComplexService.intersection_graph(cliques)
    assert graph.edges == ((1, 2), (1, 3))
    assert graph.to_dict()["is_tree"]


def test_triangle_of_groups_fails_forest_conditions(load_document):
    complex_ = load_document("three_components").to_complex()
    groups = ComplexService.forest_components(complex_)
    assert [g.vertices for g in groups] == [(1, 2, 3, 4, 5), (4, 6, 7, 8, 9), (5, 9, 10, 11)]
    graph = ComplexService.intersection_graph(groups)
    assert graph.edges == ((1, 2), (1, 3), (2, 3))
    report = ComplexService.check_forest_conditions(complex_, groups)
    assert report.cond_a and report.cond_b
    assert [p.shared for p in report.pairs] == [(4,), (5,), (9,)]


def test_forest_conditions_flag_shared_triples():
    complex_ = SimplicialComplex.from_facets(3, [[1, 2, 3], [1, 4, 5], [1, 6, 7]])
    groups = ComplexService.forest_components(complex_)
    report = ComplexService.check_forest_conditions(complex_, groups)
    assert report.failing_triples == ((1, 2, 3),)
    assert not report.passed


def test_two_vertex_overlap_fails_condition_b():
    complex_ = SimplicialComplex.from_facets(4, [[1, 2, 3, 4], [3, 4, 5, 6]])
    groups = ComplexService.forest_components(complex_)
    assert len(groups) == 1
    report = ComplexService.check_forest_conditions(
        complex_, [SimplicialComplex.from_facets(4, [[1, 2, 3, 4]]), SimplicialComplex.from_facets(4, [[3, 4, 5, 6]])])
    assert not report.cond_b
    assert report.failing_pairs()[0].shared == (3, 4)


def test_intersection_graph_needs_components():
    with pytest.raises(StructuralError):
        ComplexService.intersection_graph([])


facet_lists = st.lists(st.sets(st.integers(1, 6), min_size=2, max_size=3), min_size=1, max_size=4)


def _antichain(sets):
    unique = {frozenset(s) for s in sets}
    return [sorted(F) for F in unique if not any(F < G for G in unique)]


def _cross_clique_coprime(complex_: SimplicialComplex) -> bool:
    ring = DetIdealService.ring_for(complex_)
    families = [
        DetIdealService.facet_ideal(SimplicialComplex.from_facets(complex_.rows, clique.facets()), ring)
        for clique in ComplexService.clique_decomposition(complex_)
    ]
    return all(
        DetIdealService.leading_terms_coprime(families[i], families[j])
        for i in range(len(families)) for j in range(i + 1, len(families))
    )


@hyp_settings(max_examples=60, deadline=None)
@given(facets=facet_lists)
def test_closedness_matches_coprime_leading_terms(facets):
    complex_ = SimplicialComplex.from_facets(3, _antichain(facets))
    assert ComplexService.is_closed(complex_).closed == _cross_clique_coprime(complex_)


@hyp_settings(max_examples=30, deadline=None)
@given(facets=facet_lists)
def test_closed_complexes_have_groebner_generators(facets):
    complex_ = SimplicialComplex.from_facets(3, _antichain(facets))
    if not ComplexService.is_closed(complex_).closed:
        return
    ring = DetIdealService.ring_for(complex_)
    assert GroebnerService.is_groebner(DetIdealService.facet_ideal(complex_, ring).polynomials).is_gb


chain_sizes = st.lists(st.integers(3, 5), min_size=1, max_size=4)


@hyp_settings(max_examples=80, deadline=None)
@given(first=chain_sizes, second=st.lists(st.integers(3, 5), max_size=3))
def test_block_structure_rebuilds_the_facets(first, second):
    blocks, facets = block_chain(first)
    n = blocks[-1][1]
    expected = [BlockComponent(tuple(range(1, n + 1)), tuple(blocks), 0)]
    if second:
        glued, more = block_chain(second, start=n)
        facets += more
        shift = n - 1
        expected.append(BlockComponent(tuple(range(n, glued[-1][1] + 1)),
                                       tuple((s - shift, e - shift) for s, e in glued), 1))
    complex_ = SimplicialComplex.from_facets(3, facets)
    structure = ComplexService.block_structure(complex_)
    assert list(structure.components) == expected
    assert structure.facets() == list(complex_.facets)
    assert structure.vertices == complex_.vertices


vertex_sets = st.lists(st.sets(st.integers(1, 8), min_size=1, max_size=3), min_size=1, max_size=6)


@hyp_settings(max_examples=100, deadline=None)
@given(sets=vertex_sets)
def test_intersection_graph_matches_pairwise_intersections(sets):
    components = [SimplicialComplex.from_facets(3, [sorted(s)]) for s in sets]
    graph = ComplexService.intersection_graph(components)
    pairs = {(i + 1, j + 1): tuple(sorted(sets[i] & sets[j]))
             for i in range(len(sets)) for j in range(i + 1, len(sets)) if sets[i] & sets[j]}
    assert set(graph.edges) == set(pairs)
    assert graph.shared == pairs

    parent = list(range(len(sets) + 1))

    def root(v):
        while parent[v] != v:
            v = parent[v]
        return v

    cycle = False
    for a, b in pairs:
        ra, rb = root(a), root(b)
        if ra == rb:
            cycle = True
        parent[ra] = rb
    assert graph.is_forest is not cycle
    assert graph.is_connected == (len({root(v) for v in range(1, len(sets) + 1)}) == 1)
