from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from apps.core.exceptions import AmbientMismatchError, DegreeError, GraphHypothesisError, SingularMapError
from apps.exalg.services import linalg
from apps.exalg.services.multivector import MultiVector, interior, symplectic_form, wedge
from apps.exalg.services.subspace import (
    LinearMap, full_space, graph_extract, image, intersect, kernel, span_sum, subspace_from,
)

small = st.integers(min_value=-4, max_value=4)


def multivectors(degree, n=6):
    return st.lists(small, min_size=comb(n, degree), max_size=comb(n, degree)).map(
        lambda coords: MultiVector.from_coordinates(n, degree, coords)
    )


def e(*indices):
    return MultiVector.basis(6, *indices)


class TestMultiVector:
    def test_basis_sorts_with_sign(self):
        assert e(2, 1) == -e(1, 2)
        assert e(3, 1, 2) == e(1, 2, 3)

    def test_repeated_index_is_zero(self):
        assert MultiVector.from_terms(6, 2, {(1, 1): 5}).is_zero()

    def test_explicit_zero_rejected(self):
        with pytest.raises(ValueError):
            MultiVector(6, 1, (((1,), Fraction(0)),))

    def test_adding_different_degrees(self):
        with pytest.raises(AmbientMismatchError):
            e(1) + e(1, 2)

    def test_coordinates_follow_lex_order(self):
        v = e(1, 3) * 2 + e(5, 6)
        coords = v.coordinates()
        assert coords[1] == 2 and coords[-1] == 1 and sum(coords) == 3

    def test_str(self):
        assert str(e(1, 2) * Fraction(1, 2) + e(3, 4)) == "1/2*e12 + e34"

    def test_json_keeps_rationals(self):
        v = e(1, 2, 3) * Fraction(-7, 3)
        assert MultiVector.from_json(v.to_json()) == v


class TestWedge:
    def test_basic_products(self):
        assert wedge(e(1), e(2)) == e(1, 2)
        assert wedge(e(2), e(1)) == -e(1, 2)
        assert wedge(e(1, 2), e(1)).is_zero()

    def test_overflow(self):
        with pytest.raises(DegreeError):
            wedge(e(1, 2, 3, 4), e(1, 5, 6))

    def test_ambient_mismatch(self):
        with pytest.raises(AmbientMismatchError):
            wedge(MultiVector.basis(4, 1), e(2))

    @given(multivectors(1))
    def test_vector_squares_to_zero(self, v):
        assert wedge(v, v).is_zero()

    @given(multivectors(1), multivectors(2))
    def test_graded_commutativity(self, a, b):
        assert wedge(a, b) == wedge(b, a)

    @given(multivectors(1), multivectors(1))
    def test_anticommutativity(self, a, b):
        assert wedge(a, b) == -wedge(b, a)

    @given(multivectors(1), multivectors(2), multivectors(1))
    def test_associativity(self, a, b, c):
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))

    @given(multivectors(1), multivectors(2), st.integers(min_value=1, max_value=6))
    def test_interior_is_a_derivation(self, a, b, i):
        left = interior((i,), wedge(a, b))
        right = wedge(interior((i,), a), b) - wedge(a, interior((i,), b))
        assert left == right


class TestSymplecticForm:
    def test_normalisation(self):
        assert symplectic_form(e(1, 2, 3), e(4, 5, 6)) == 1
        assert symplectic_form(e(4, 5, 6), e(1, 2, 3)) == -1
        assert symplectic_form(e(1, 2, 3), e(1, 4, 5)) == 0

    def test_rejects_wrong_degree(self):
        with pytest.raises(DegreeError):
            symplectic_form(e(1, 2), e(3, 4))

    @given(multivectors(3), multivectors(3))
    def test_skew(self, a, b):
        assert symplectic_form(a, b) == -symplectic_form(b, a)


class TestLinalg:
    def test_determinant_and_inverse(self):
        m = [[2, 1], [1, 1]]
        assert linalg.determinant(m) == 1
        assert linalg.matmul(linalg.to_rows(m), linalg.inverse(m)) == linalg.identity(2)

    def test_singular_inverse(self):
        with pytest.raises(SingularMapError):
            linalg.inverse([[1, 2], [2, 4]])

    def test_rref_pivots(self):
        reduced, pivots = linalg.rref([[0, 2, 4], [0, 1, 2], [1, 0, 1]])
        assert pivots == (0, 1)
        assert reduced == [[1, 0, 1], [0, 1, 2]]

    def test_solve_inconsistent(self):
        assert linalg.solve([[1, 1], [1, 1]], [1, 2]) is None

    @given(st.lists(st.lists(small, min_size=5, max_size=5), min_size=1, max_size=5))
    def test_rank_nullity(self, rows):
        assert linalg.rank(rows) + len(linalg.nullspace(rows, 5)) == 5


class TestSubspace:
    def test_echelon_form_is_canonical(self):
        a = subspace_from([e(1) + e(2), e(1) - e(2)])
        b = subspace_from([e(2), e(1)])
        assert a == b
        assert a.pivots == (0, 1)

    def test_membership(self):
        space = subspace_from([e(1, 2) + e(3, 4), e(5, 6)])
        assert e(1, 2) + e(3, 4) + e(5, 6) * 3 in space
        assert e(1, 2) not in space
        assert space.coordinates_of(e(1, 2) * 2 + e(3, 4) * 2) == [2, 0]

    def test_empty_span_needs_ambient(self):
        with pytest.raises(AmbientMismatchError):
            subspace_from([])
        assert subspace_from([], n=6, degree=3).dim == 0

    @given(st.lists(multivectors(1), max_size=4), st.lists(multivectors(1), max_size=4))
    def test_grassmann_dimension_formula(self, xs, ys):
        a = subspace_from(xs, 6, 1)
        b = subspace_from(ys, 6, 1)
        assert intersect(a, b).dim + span_sum(a, b).dim == a.dim + b.dim

    @given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
    def test_kernel_and_image(self, matrix):
        domain = full_space(4, 1)
        f = LinearMap.from_function(
            domain, lambda b: MultiVector.vector(linalg.matvec(matrix, b.coordinates()))
        )
        assert kernel(f).dim + image(f).dim == 4
        assert all(f(v).is_zero() for v in kernel(f).basis)


class TestGraphExtract:
    def setup_method(self):
        self.e1 = subspace_from([MultiVector.basis(4, 1), MultiVector.basis(4, 2)])
        self.e2 = subspace_from([MultiVector.basis(4, 3), MultiVector.basis(4, 4)])

    def test_recovers_the_map(self):
        x1, x2, x3, x4 = (MultiVector.basis(4, i) for i in range(1, 5))
        w = subspace_from([x1 + x3 * 2, x2 + x3 + x4])
        f = graph_extract(w, self.e1, self.e2)
        assert f(x1) == x3 * 2
        assert f(x2) == x3 + x4

    def test_reports_failed_hypothesis(self):
        with pytest.raises(GraphHypothesisError) as err:
            graph_extract(self.e1, self.e1, self.e2)
        assert err.value.hypothesis == 'meets_first_summand'

        with pytest.raises(GraphHypothesisError) as err:
            graph_extract(subspace_from([MultiVector.basis(4, 1)]), self.e1, self.e2)
        assert err.value.hypothesis == 'equal_dimensions'

        with pytest.raises(GraphHypothesisError) as err:
            graph_extract(self.e1, self.e1, self.e1)
        assert err.value.hypothesis == 'direct_sum'
