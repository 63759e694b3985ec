import pytest

from config import settings, using
from models.complex import SimplicialComplex
from models.errors import EmptyInputError, ResourceLimitError
from models.ideal import IdealPresentation
from models.ring import PolynomialRing, VariableLayout
from services.basis_cache import basis_cache
from services.detideal_service import DetIdealService
from services.groebner_service import GroebnerService


def minors_2x3(ring):
    x = ring.var
    return [
        x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1),
        x(1, 1) * x(2, 3) - x(1, 3) * x(2, 1),
        x(1, 2) * x(2, 3) - x(1, 3) * x(2, 2),
    ]


def facet_generators(rows, facets, cols):
    complex_ = SimplicialComplex.from_facets(rows, facets)
    ring = PolynomialRing(VariableLayout(rows, cols))
    return DetIdealService.facet_ideal(complex_, ring), ring


def test_normal_form_reduces_fully(ring_2x3):
    x = ring_2x3.var
    remainder = GroebnerService.normal_form(x(1, 1) * x(1, 1), [x(1, 1) - x(1, 2)])
    assert remainder == x(1, 2) * x(1, 2)


def test_normal_form_rejects_zero_divisor(ring_2x3):
    with pytest.raises(EmptyInputError):
        GroebnerService.normal_form(ring_2x3.var(1, 1), [ring_2x3.zero()])


def test_step_limit_is_enforced(ring_2x3):
    x = ring_2x3.var
    with using(settings.override(step_limit=1)):
        with pytest.raises(ResourceLimitError) as info:
            GroebnerService.normal_form(x(1, 1) * x(1, 1), [x(1, 1) - x(1, 2)])
    assert info.value.limit == "step_limit"
    assert info.value.exit_code == 5


def test_maximal_minors_are_their_own_reduced_basis(ring_2x3):
    ideal = GroebnerService.buchberger(IdealPresentation.of(minors_2x3(ring_2x3)))
    assert ideal.certified
    assert list(ideal.basis) == minors_2x3(ring_2x3)
    assert GroebnerService.initial_ideal(ideal) == [
        (1, 0, 0, 0, 1, 0),
        (1, 0, 0, 0, 0, 1),
        (0, 1, 0, 0, 0, 1),
    ]


def test_basis_cache_serves_repeat_runs(ring_2x3):
    ideal = IdealPresentation.of(minors_2x3(ring_2x3))
    GroebnerService.buchberger(ideal)
    GroebnerService.buchberger(ideal)
    stats = basis_cache.get_stats()
    assert stats["hits"] == 1
    assert stats["total_keys"] == 1


def test_basis_cache_follows_active_settings(ring_2x3):
    ideal = IdealPresentation.of(minors_2x3(ring_2x3))
    with using(settings.override(basis_cache_size=0)):
        assert basis_cache.max_entries == 0
        GroebnerService.buchberger(ideal)
        GroebnerService.buchberger(ideal)
    stats = basis_cache.get_stats()
    assert stats["total_keys"] == 0
    assert stats["hits"] == 0
    assert basis_cache.max_entries == settings.basis_cache_size


def test_buchberger_needs_generators(ring_2x3):
    with pytest.raises(EmptyInputError):
        GroebnerService.buchberger(IdealPresentation.of([], ring_2x3))


def test_is_groebner_reports_witness():
    ring = PolynomialRing(VariableLayout(2, 2))
    x = ring.var
    report = GroebnerService.is_groebner([x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1), x(1, 1)])
    assert not report.is_gb
    assert report.witness.first == 0 and report.witness.second == 1
    assert str(report.witness.remainder) == "-x[1,2]*x[2,1]"
    assert GroebnerService.is_groebner(minors_2x3(PolynomialRing(VariableLayout(2, 3)))).is_gb


def test_ideal_membership(ring_2x3):
    ideal = IdealPresentation.of(minors_2x3(ring_2x3))
    x = ring_2x3.var
    assert GroebnerService.ideal_member(x(1, 3) * minors_2x3(ring_2x3)[0], ideal)
    assert not GroebnerService.ideal_member(x(1, 1) * x(2, 2), ideal)


def test_full_minors_lie_in_column_pair_minors():
    J, ring = facet_generators(3, [[1, 2, 3], [2, 3, 4]], 4)
    column_pair = DetIdealService.facet_ideal(SimplicialComplex.from_facets(3, [[2, 3]]), ring)
    assert GroebnerService.ideal_contains(column_pair.ideal(), J.ideal())
    assert not GroebnerService.ideal_contains(J.ideal(), column_pair.ideal())


def test_intersection_recovers_two_facet_ideal():
    J, ring = facet_generators(3, [[1, 2, 3], [2, 3, 4]], 4)
    column_pair = DetIdealService.facet_ideal(SimplicialComplex.from_facets(3, [[2, 3]]), ring)
    skeleton = DetIdealService.facet_ideal(
        SimplicialComplex.from_facets(3, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]), ring)
    meet = GroebnerService.ideal_intersect([column_pair.ideal(), skeleton.ideal()])
    assert GroebnerService.ideal_equal(meet, J.ideal())


def test_intersection_needs_two_ideals(ring_2x3):
    with pytest.raises(EmptyInputError):
        GroebnerService.ideal_intersect([IdealPresentation.of(minors_2x3(ring_2x3))])


@pytest.mark.parametrize("field_", ["prime:32003", "prime:101", "rational"])
def test_closed_facet_ideal_is_already_a_basis(field_):
    complex_ = SimplicialComplex.from_facets(3, [[1, 2], [2, 3, 4], [4, 5, 6], [6, 7]])
    ring = DetIdealService.ring_for(complex_, settings.override(field=field_).coefficient_field)
    J = DetIdealService.facet_ideal(complex_, ring)
    assert len(J) == 8
    assert len(GroebnerService.buchberger(J.ideal()).basis) == 8
