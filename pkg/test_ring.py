from fractions import Fraction

import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from models.errors import ConfigurationError, LayoutError
from models.ring import (CoefficientField, FieldMode, Ordering, PolynomialRing, TermOrder, VariableLayout,
                         compare_monomials)

RATIONAL = CoefficientField(FieldMode.RATIONAL)
SMALL_PRIME = CoefficientField(FieldMode.MODULAR, 7)


def test_layout_is_row_major():
    layout = VariableLayout(2, 3)
    assert layout.index(1, 1) == 0
    assert layout.index(2, 1) == 3
    assert layout.position(5) == (2, 3)
    assert layout.name(4) == "x[2,2]"
    with pytest.raises(LayoutError):
        layout.index(3, 1)


def test_aux_variables_follow_the_matrix():
    layout = VariableLayout(2, 2).with_aux()
    assert layout.nvars == 5
    assert layout.aux_index() == 4
    assert layout.name(4) == "t"
    assert layout.position(4) is None


def test_field_parsing():
    assert CoefficientField.parse("rational").is_rational
    assert CoefficientField.parse("prime:7").modulus == 7
    assert str(CoefficientField.parse("prime:32003")) == "prime:32003"
    for bad in ("prime:4", "prime:2", "prime:x", "reals"):
        with pytest.raises(ConfigurationError):
            CoefficientField.parse(bad)


def test_modular_elements():
    assert SMALL_PRIME.element(Fraction(1, 2)) == 4
    assert SMALL_PRIME.display(6) == -1
    assert SMALL_PRIME.mul(SMALL_PRIME.inv(3), 3) == 1
    with pytest.raises(ConfigurationError):
        SMALL_PRIME.element(Fraction(1, 7))


def test_two_by_two_determinant_prints_diagonal_first(ring_2x3):
    det = ring_2x3.var(1, 1) * ring_2x3.var(2, 2) - ring_2x3.var(1, 2) * ring_2x3.var(2, 1)
    assert str(det) == "x[1,1]*x[2,2] - x[1,2]*x[2,1]"
    assert det.degree() == 2
    assert det.leading_monomial == (1, 0, 0, 0, 1, 0)


def test_rational_coefficients_display_as_fractions():
    ring = PolynomialRing(VariableLayout(1, 2), RATIONAL)
    f = ring.var(1, 1) * Fraction(1, 2) + ring.var(1, 2)
    assert str(f) == "1/2*x[1,1] + x[1,2]"
    assert str(f.monic()) == "x[1,1] + 2*x[1,2]"


def test_mixing_fields_is_rejected(ring_2x3):
    other = ring_2x3.with_field(RATIONAL)
    with pytest.raises(ConfigurationError):
        ring_2x3.var(1, 1) + other.var(1, 1)


def test_term_order_must_be_a_permutation():
    with pytest.raises(ConfigurationError):
        TermOrder((0, 0, 1))


def test_column_permutation_order():
    layout = VariableLayout(2, 3)
    order = TermOrder.from_column_permutation(layout, [3, 1, 2])
    assert order.perm == (2, 0, 1, 5, 3, 4)
    with pytest.raises(ConfigurationError):
        TermOrder.from_column_permutation(layout, [1, 2])


def test_graded_order_compares_degree_first():
    lex = TermOrder((0, 1))
    graded = TermOrder((0, 1), graded=True)
    assert compare_monomials((1, 0), (0, 2), lex) is Ordering.GREATER
    assert compare_monomials((1, 0), (0, 2), graded) is Ordering.LESS


def test_elimination_ranks_aux_first(ring_2x3):
    extended = ring_2x3.eliminating(1)
    t = extended.aux_var()
    assert extended.order.perm[0] == 6
    assert (t + extended.var(1, 1)).leading_monomial == extended.layout.generator(6)


def test_project_rejects_aux_terms(ring_2x3):
    extended = ring_2x3.eliminating(1)
    with pytest.raises(LayoutError):
        extended.aux_var().project(ring_2x3)
    assert extended.var(1, 2).project(ring_2x3) == ring_2x3.var(1, 2)


terms = st.lists(
    st.tuples(st.integers(-5, 5), st.tuples(*[st.integers(0, 2)] * 4)),
    max_size=5,
)


@pytest.mark.parametrize("field_", [RATIONAL, SMALL_PRIME], ids=["rational", "prime7"])
@hyp_settings(max_examples=40, deadline=None)
@given(a=terms, b=terms, c=terms)
def test_multiplication_distributes(field_, a, b, c):
    ring = PolynomialRing(VariableLayout(2, 2), field_)
    f, g, h = ring.from_terms(a), ring.from_terms(b), ring.from_terms(c)
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f - f).is_zero()
