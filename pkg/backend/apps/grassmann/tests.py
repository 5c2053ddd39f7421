import numpy as np
import pytest
from hypothesis import assume, example, given, strategies as st

from apps.core.exceptions import DegreeError, ZeroVectorError
from apps.exalg.services.multivector import MultiVector, wedge_all
from apps.exalg.services.subspace import subspace_from
from apps.grassmann.services.decomposability import (
    DecompVerdict, annihilator, contraction_criterion, decomposable_witness_in, is_decomposable,
)

vectors = st.lists(st.integers(min_value=-3, max_value=3), min_size=6, max_size=6).map(MultiVector.vector)
decomposables = st.lists(vectors, min_size=3, max_size=3).map(wedge_all)


def _sum(pair):
    return pair[0] + pair[1]


sums_of_two = st.tuples(decomposables, decomposables).map(_sum)


def _trivector(coords):
    return MultiVector.from_coordinates(6, 3, coords)


uniform = st.lists(st.integers(min_value=-2, max_value=2), min_size=20, max_size=20).map(_trivector)


def e(*indices):
    return MultiVector.basis(6, *indices)


def test_coordinate_plane_is_decomposable():
    verdict = is_decomposable(e(1, 2, 3))
    assert verdict.decomposable
    assert verdict.witness_plane == subspace_from([e(1), e(2), e(3)])


def test_sum_of_complementary_planes_is_not():
    alpha = e(1, 2, 3) + e(4, 5, 6)
    verdict = is_decomposable(alpha)
    assert not verdict.decomposable
    assert verdict.witness_plane is None
    assert annihilator(alpha).dim == 0
    assert not contraction_criterion(alpha)


def test_partially_factorable_vector():
    # e1 ∧ (e23 + e45) has a one-dimensional annihilator
    alpha = e(1, 2, 3) + e(1, 4, 5)
    assert annihilator(alpha).dim == 1
    assert not is_decomposable(alpha).decomposable


def test_rejects_bad_input():
    with pytest.raises(ZeroVectorError):
        is_decomposable(MultiVector.zero(6, 3))
    with pytest.raises(DegreeError):
        is_decomposable(e(1, 2))


def test_verdict_requires_consistent_witness():
    with pytest.raises(ValueError):
        DecompVerdict(True, None)


@given(vectors, vectors, vectors)
def test_wedge_of_three_vectors_is_decomposable(a, b, c):
    alpha = wedge_all([a, b, c])
    assume(not alpha.is_zero())
    verdict = is_decomposable(alpha)
    assert verdict.decomposable
    assert all(v in verdict.witness_plane for v in (a, b, c))


@given(decomposables)
def test_decomposables_pass_both_criteria(alpha):
    assume(not alpha.is_zero())
    assert contraction_criterion(alpha)
    assert annihilator(alpha).dim == 3


@given(st.one_of(decomposables, sums_of_two, uniform))
@example(MultiVector.basis(6, 1, 2, 3) + MultiVector.basis(6, 1, 4, 5))
@example(MultiVector.basis(6, 1, 2, 3) + MultiVector.basis(6, 4, 5, 6))
@example(MultiVector.basis(6, 1, 2, 3) + MultiVector.basis(6, 1, 2, 4))
def test_criteria_agree(alpha):
    assume(not alpha.is_zero())
    assert contraction_criterion(alpha) == (annihilator(alpha).dim == 3)


class TestWitnessSearch:
    def test_finds_witness_in_decomposable_line(self):
        witness = decomposable_witness_in(subspace_from([e(1, 2, 3)]), budget=20, seed=0)
        assert witness is not None
        assert is_decomposable(witness).decomposable

    def test_nothing_in_generic_line(self):
        assert decomposable_witness_in(subspace_from([e(1, 2, 3) + e(4, 5, 6)]), budget=10, seed=0) is None

    def test_deterministic(self):
        space = subspace_from([e(1, 2, 3), e(1, 2, 4) + e(3, 5, 6)])
        first = decomposable_witness_in(space, budget=20, seed=3)
        assert first == decomposable_witness_in(space, budget=20, seed=3)

    @pytest.mark.parametrize('seed', range(6))
    def test_weights_come_from_numpy_generator(self, seed):
        weight = int(np.random.default_rng(seed).integers(-7, 7, size=1, endpoint=True)[0])
        witness = decomposable_witness_in(subspace_from([e(1, 2, 3)]), budget=1, seed=seed)
        if weight == 0:
            assert witness is None
        else:
            assert witness == e(1, 2, 3) * weight

    def test_zero_space(self):
        with pytest.raises(ZeroVectorError):
            decomposable_witness_in(subspace_from([], n=6, degree=3), budget=1, seed=0)
