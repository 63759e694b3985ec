from itertools import combinations
from math import comb, prod

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from conftest import diagonal_initial
from models.complex import SimplicialComplex
from models.errors import (ArgumentError, LinearQuotientsError, ResourceLimitError, StructuralError,
                           UnsupportedShapeError)
from models.resolution import GradedBettiTable
from models.ring import CoefficientField, VariableLayout
from services.complex_service import ComplexService
from services.detideal_service import DetIdealService
from services.groebner_service import GroebnerService
from services.resolution_service import ResolutionService, minimal_generators


def test_eagon_northcott_numbers():
    assert ResolutionService.en_betti(3, 4).entries == {(0, 0): 1, (1, 3): 4, (2, 4): 3}
    assert ResolutionService.en_betti(2, 3).ideal_view() == {(0, 2): 3, (1, 3): 2}
    assert ResolutionService.en_betti(3, 3) == GradedBettiTable.principal(3)
    with pytest.raises(ArgumentError):
        ResolutionService.en_betti(4, 3)


def test_table_requires_unit_in_degree_zero():
    with pytest.raises(ValueError):
        GradedBettiTable({(1, 2): 3})


def test_betti_diagram_rendering():
    assert ResolutionService.en_betti(2, 3).render() == "\n".join([
        "       0 1 2",
        "total: 1 3 2",
        "    0: 1 . .",
        "    1: . 3 2",
    ])


def test_linear_quotients_of_maximal_minors():
    gens = diagonal_initial(2, 3)
    sets = ResolutionService.linear_quotients(gens)
    assert sets == [frozenset(), frozenset({4}), frozenset({0})]
    table = ResolutionService.betti_from_linear_quotients(sets, [2, 2, 2])
    assert table == ResolutionService.en_betti(2, 3)


@pytest.mark.parametrize("m,n", [(2, 4), (3, 5), (3, 6)])
def test_colon_sizes_follow_last_column(m, n):
    layout = VariableLayout(m, n)
    gens = diagonal_initial(m, n)
    sets = ResolutionService.linear_quotients(gens)
    last_columns = [layout.position(max(i for i, e in enumerate(u) if e))[1] for u in gens]
    assert [len(s) for s in sets] == [col - m for col in last_columns]


def test_non_linear_colon_is_reported():
    with pytest.raises(LinearQuotientsError) as info:
        ResolutionService.linear_quotients([(1, 1, 0, 0), (0, 0, 1, 1)])
    assert info.value.index == 1
    assert info.value.colon_generators == [[[0, 1], [1, 1]]]
    assert info.value.exit_code == 6


def test_linear_quotients_reject_repeats():
    with pytest.raises(ArgumentError):
        ResolutionService.linear_quotients([(1, 0), (1, 0)])


def test_minimal_generators_drop_multiples():
    assert minimal_generators([(1, 1, 0), (1, 0, 0), (0, 0, 2), (1, 0, 1)]) == [(1, 0, 0), (0, 0, 2)]


def test_convolution_of_clique_tables(load_document):
    table = ResolutionService.complex_convolution(load_document("skeleton_then_adjacent").to_complex())
    assert table.entries == {
        (0, 0): 1,
        (1, 3): 6,
        (2, 4): 3, (2, 6): 9,
        (3, 7): 6, (3, 9): 4,
        (4, 10): 3,
    }
    assert table.totals() == {0: 1, 1: 6, 2: 12, 3: 10, 4: 3}


def test_convolution_needs_tables():
    with pytest.raises(ArgumentError):
        ResolutionService.betti_convolution([])


def test_convolution_rejects_lower_dimensional_cliques(load_document):
    with pytest.raises(UnsupportedShapeError):
        ResolutionService.complex_convolution(load_document("four_cliques").to_complex())


shapes = st.tuples(st.integers(1, 4), st.integers(0, 3)).map(lambda p: (p[0], p[0] + p[1]))


@hyp_settings(max_examples=40, deadline=None)
@given(a=shapes, b=shapes, c=shapes)
def test_convolution_is_commutative_and_associative(a, b, c):
    A, B, C = (ResolutionService.en_betti(*s) for s in (a, b, c))
    assert ResolutionService.betti_convolution([A, B]) == ResolutionService.betti_convolution([B, A])
    assert (ResolutionService.betti_convolution([ResolutionService.betti_convolution([A, B]), C])
            == ResolutionService.betti_convolution([A, ResolutionService.betti_convolution([B, C])]))
    assert ResolutionService.betti_convolution([A, GradedBettiTable.unit()]) == A


@pytest.mark.parametrize("field_", ["prime:32003", "rational"])
def test_taylor_oracle_matches_eagon_northcott(field_):
    table = ResolutionService.taylor_strand_betti(diagonal_initial(2, 3), CoefficientField.parse(field_))
    assert table == ResolutionService.en_betti(2, 3)
    assert (2, (1, 0, 0, 0, 1, 1), 1) in table.multigraded


def test_taylor_oracle_on_three_by_four():
    assert ResolutionService.taylor_strand_betti(diagonal_initial(3, 4)) == ResolutionService.en_betti(3, 4)


def test_taylor_cap():
    with pytest.raises(ResourceLimitError) as info:
        ResolutionService.taylor_strand_betti(diagonal_initial(2, 7), cap=16)
    assert info.value.limit == "taylor_cap"
    assert info.value.details["generators"] == 21


def test_taylor_oracle_matches_convolution_of_closed_complex(load_document):
    complex_ = load_document("skeleton_then_adjacent").to_complex()
    ring = DetIdealService.ring_for(complex_)
    initial = GroebnerService.initial_ideal(DetIdealService.facet_ideal(complex_, ring).ideal())
    assert ResolutionService.taylor_strand_betti(initial) == ResolutionService.complex_convolution(complex_)


def test_hilbert_series_of_maximal_minors():
    summary = ResolutionService.hilbert_series(diagonal_initial(2, 3), 6)
    assert summary.numerator == (1, 2)
    assert summary.dimension == 4
    assert summary.multiplicity == 3
    assert summary.height == 2


def test_hilbert_series_of_coprime_generators():
    summary = ResolutionService.hilbert_series([(2, 0, 0), (0, 1, 0)], 3)
    assert summary.numerator == (1, 1)
    assert summary.dimension == 1
    assert summary.multiplicity == 2


def test_hilbert_series_rejects_unit_ideal():
    with pytest.raises(ArgumentError):
        ResolutionService.hilbert_series([(0, 0)], 2)
    with pytest.raises(ArgumentError):
        ResolutionService.hilbert_series([(1, 0)], 3)


def test_binomial_identity():
    result = ResolutionService.binomial_identity_check(8, 5)
    assert result["holds"]
    assert result["checked"] == sum(n + 1 for n in range(9)) * 6
    with pytest.raises(ArgumentError):
        ResolutionService.binomial_identity_check(-1, 2)


def test_invariants_agree_for_maximal_cliques(load_document):
    report = ResolutionService.invariants_report(load_document("skeleton_then_adjacent").to_complex())
    assert report["disagreements"] == []
    assert report["hilbert"]["e"] == 6 * 3 * 3
    assert report["hilbert"]["height"] == 4
    assert [c["height"] for c in report["cliques"]] == [2, 1, 1]


def test_invariants_need_closed_complex(load_document):
    with pytest.raises(StructuralError):
        ResolutionService.invariants_report(load_document("relabeled_path").to_complex())


def test_two_clique_multiplicity_is_a_product():
    complex_ = SimplicialComplex.from_facets(3, [[1, 2, 3], [2, 3, 4]])
    report = ResolutionService.invariants_report(complex_)
    checks = {c["name"]: c for c in report["checks"]}
    assert checks["multiplicity"]["computed"] == 9
    assert checks["hilbert_product"]["agree"]


@pytest.mark.slow
def test_lower_dimensional_clique_height_disagrees(load_document):
    report = ResolutionService.invariants_report(load_document("four_cliques").to_complex())
    assert "height" in report["disagreements"]
    last = report["cliques"][-1]
    assert last["vertices"] == [7, 8, 9]
    assert (last["height_formula"], last["height"]) == (2, 4)


def random_closed_complexes(rng, count):
    """Pure 2-dimensional complexes built from full skeletons on random vertex sets, kept when closed"""
    found = []
    for _ in range(500):
        n = rng.randint(4, 8)
        cliques = [rng.sample(range(1, n + 1), rng.randint(3, 4)) for _ in range(rng.randint(1, 3))]
        facets = {F for W in cliques for F in combinations(sorted(W), 3)}
        complex_ = SimplicialComplex.from_facets(3, facets)
        if complex_ not in found and ComplexService.is_closed(complex_).closed:
            found.append(complex_)
        if len(found) == count:
            break
    return found


def test_multiplicity_is_the_product_over_cliques(rng):
    complexes = random_closed_complexes(rng, 10)
    assert len(complexes) == 10
    for complex_ in complexes:
        ring = DetIdealService.ring_for(complex_)
        initial = GroebnerService.initial_ideal(DetIdealService.facet_ideal(complex_, ring).ideal())
        summary = ResolutionService.hilbert_series(initial, ring.layout.matrix_vars)
        cliques = ComplexService.clique_decomposition(complex_)
        assert summary.multiplicity == prod(comb(len(c.vertices), c.dim) for c in cliques), complex_.facets
