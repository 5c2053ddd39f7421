from fractions import Fraction

import pytest
import sympy

from apps.census.services.cross_validate import cross_validate, matching_case
from apps.census.services.fano import (
    NONSINGULAR_FLOOR,
    X,
    Y,
    CubicData,
    Eisenstein,
    cubic_gradient_floor,
    embed_line,
    fano_cubic,
    fano_census,
    fano_fixed_k3_equation,
    fano_involution_table,
    fermat_27_lines,
    fiber_degeneracy,
    invariant_moduli_count,
    involution_action_on_lines,
    lies_on_fermat,
    residue_sign,
    sample_fermat_points,
)
from apps.census.services.hilbert import HilbertCensusInput, hilbert_census, hilbert_invariant_dims
from apps.core.exceptions import DegreeError, ParityError, SignatureError, VerificationError
from apps.core.services.report import KIND_ISOLATED_POINT, CensusReport, ProvenanceItem
from apps.lefschetz.services.classification import solve_classification


def points_only(label, n):
    return CensusReport(label, n, 0, 0, items=(ProvenanceItem(KIND_ISOLATED_POINT, n, 'test'),))


class TestHilbert:
    def test_census(self):
        report = hilbert_census(HilbertCensusInput())
        assert report.counts == (28, 1, 0)
        assert report.passed

    def test_invariant_dims(self):
        dims = hilbert_invariant_dims(HilbertCensusInput())
        assert (dims.dim_s, dims.dim_x, dims.tau_x) == (12, 13, 5)
        assert dims.deformation_dim == 13

    def test_rejects_bad_input(self):
        with pytest.raises(VerificationError):
            HilbertCensusInput(k=-1)
        with pytest.raises(VerificationError):
            HilbertCensusInput(tau_s=22)
        with pytest.raises(VerificationError):
            hilbert_census(HilbertCensusInput(k=1))
        with pytest.raises(ParityError):
            hilbert_invariant_dims(HilbertCensusInput(tau_s=3))

    def test_two_fixed_points_give_one_pair(self):
        report = hilbert_census(HilbertCensusInput(k=2))
        assert report.counts == (1, 1, 0)
        assert report.passed


class TestEisenstein:
    def test_zeta_is_a_cube_root_of_unity(self):
        zeta = Eisenstein.zeta_power(1)
        assert zeta ** 3 == Eisenstein(1)
        assert (Eisenstein(1) + zeta + zeta ** 2).is_zero()
        assert zeta.conjugate() == zeta ** 2

    def test_inverse(self):
        x = Eisenstein(Fraction(2, 3), -5)
        assert x * x.inverse() == Eisenstein(1)
        assert x / x == Eisenstein(1)
        with pytest.raises(ZeroDivisionError):
            Eisenstein().inverse()

    def test_complex_embedding(self):
        assert abs(Eisenstein.zeta_power(1).to_complex() ** 3 - 1) < 1e-12


class TestFermatLines:
    def test_twenty_seven_distinct_lines(self):
        lines = fermat_27_lines()
        assert len(lines) == 27
        assert len({line.plucker() for line in lines}) == 27

    def test_lines_lie_on_the_surface(self):
        assert all(lies_on_fermat(line) for line in fermat_27_lines())

    def test_sampled_points_are_on_the_surface(self):
        for point in sample_fermat_points(5, seed=1):
            assert abs(sum(y ** 3 for y in point)) < 1e-9


class TestInvolutionAction:
    @pytest.mark.parametrize('k,action', [(1, 'antisymplectic'), (2, 'symplectic'), (3, 'antisymplectic')])
    def test_residue_sign(self, k, action):
        assert residue_sign(k) == action

    def test_unsupported_signature(self):
        with pytest.raises(SignatureError):
            residue_sign(4)

    def test_table(self):
        table = fano_involution_table()
        assert [row['k'] for row in table] == [1, 2, 3]
        assert all(row['invariant'] for row in table)
        assert [row['action'] for row in table] == ['antisymplectic', 'symplectic', 'antisymplectic']

    def test_moduli_count(self):
        assert invariant_moduli_count(2) == 12

    def test_symplectic_involution_fixes_every_fermat_line(self):
        assert involution_action_on_lines(fermat_27_lines(), 2) == (True, 27)

    def test_signature_3_moves_every_fermat_line(self):
        preserved, fixed = involution_action_on_lines(fermat_27_lines(), 3)
        assert not preserved
        assert fixed == 0

    def test_embedding_keeps_lines_distinct(self):
        assert len({embed_line(line).plucker() for line in fermat_27_lines()}) == 27


class TestInvariantCubic:
    def test_default_cubic(self):
        cubic = fano_cubic()
        expected = X[0] ** 2 * X[2] + X[1] ** 2 * X[3] + X[0] * X[1] * X[4] + sum(x ** 3 for x in X[2:])
        assert cubic.signature == 2
        assert sympy.expand(cubic.form - expected) == 0

    def test_rejects_non_invariant_form(self):
        with pytest.raises(SignatureError):
            CubicData(X[0] ** 2 * X[1] + X[2] ** 3, 2)

    def test_rejects_non_cubic(self):
        with pytest.raises(DegreeError):
            CubicData(X[2] ** 2 + X[3] ** 2, 2)

    def test_smooth_cubic_passes_spot_check(self):
        assert cubic_gradient_floor(fano_cubic(), lines=5, seed=0) > NONSINGULAR_FLOOR

    def test_double_plane_fails_spot_check(self):
        assert cubic_gradient_floor(CubicData(X[2] ** 2 * X[3], 2), lines=5, seed=0) < NONSINGULAR_FLOOR


class TestFixedK3:
    def test_bidegree(self):
        equation = fano_fixed_k3_equation(Y[0], Y[1], Y[2])
        assert equation.bidegree == (2, 1)
        assert sympy.expand(equation.discriminant() - (Y[2] ** 2 - 4 * Y[0] * Y[1])) == 0

    def test_whole_fiber(self):
        equation = fano_fixed_k3_equation(Y[0], Y[1], Y[0] + Y[1])
        assert fiber_degeneracy(equation, (0, 0, 1, -1)) == 'whole_fiber'

    def test_ramified_fiber(self):
        equation = fano_fixed_k3_equation(Y[0], Y[1], Y[2])
        assert fiber_degeneracy(equation, (1, 1, 2, -(10 ** (1 / 3)))) == 'ramified'

    def test_census(self):
        report = fano_census()
        assert report.counts == (28, 1, 0)
        assert report.passed
        assert report.details['invariant_moduli'] == 12
        names = [c.name for c in report.certificates]
        assert {'fermat_lines_fixed_by_involution', 'cubic_nonsingular_samples'} <= set(names)
        assert 'X0**2*X2' in report.details['cubic']


class TestCrossValidation:
    def test_agreeing_censuses(self):
        reports = [hilbert_census(HilbertCensusInput()), fano_census(samples=5)]
        certs = cross_validate(reports, solve_classification())
        assert [c.name for c in certs] == ['hilbert_matches_classification', 'fano_matches_classification',
                                           'censuses_agree']
        assert all(c.passed for c in certs)

    def test_matching_case(self):
        assert matching_case(hilbert_census(HilbertCensusInput()), solve_classification()).tau == 5
        assert matching_case(points_only('bogus', 20), solve_classification()) is None

    def test_disagreement(self):
        reports = [hilbert_census(HilbertCensusInput()), points_only('bogus', 20)]
        failed = [c.name for c in cross_validate(reports, solve_classification()) if not c.passed]
        assert failed == ['bogus_matches_classification', 'censuses_agree']
