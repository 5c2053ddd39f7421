from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from apps.core.exceptions import ParityError, UnsupportedSheafError, VerificationError
from apps.lefschetz.services.classification import (
    K_SYM,
    N_SYM,
    ClassificationSolution,
    HodgeData,
    assemble_system,
    corollary_check,
    enumerate_traces,
    general_solution,
    lefschetz_numbers,
    solve_classification,
    trace_S2,
    trace_S2_bruteforce,
)
from apps.lefschetz.services.graded import GradedClass, invert_unit, todd_surface
from apps.lefschetz.services.local_terms import SUM_A, point_local_term, surface_contribution, surface_local_term

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


class TestGradedRing:
    def test_invert_unit(self):
        assert invert_unit(GradedClass(4, 1, -1)) == GradedClass(Fraction(1, 4), Fraction(-1, 16), Fraction(1, 16))

    def test_todd_times_inverse_denominator(self):
        product = todd_surface() * invert_unit(GradedClass(4, 1, -1))
        assert product == GradedClass(Fraction(1, 4), Fraction(-1, 24), Fraction(1, 16))

    def test_todd_surface(self):
        assert todd_surface() == GradedClass(1, Fraction(1, 12), 0)

    def test_degree_four_squares_vanish(self):
        assert GradedClass(0, 3, 2) * GradedClass(0, 5, 7) == GradedClass()

    def test_non_unit(self):
        with pytest.raises(VerificationError):
            invert_unit(GradedClass(0, 1, 1))

    @given(rationals, rationals, rationals)
    def test_inverse_is_exact(self, constant, c2y, a):
        assume(constant != 0)
        x = GradedClass(constant, c2y, a)
        assert x * invert_unit(x) == GradedClass(1)
        assert x / x == GradedClass(1)

    def test_to_sympy(self):
        assert str(GradedClass(Fraction(1, 4), 0, Fraction(3, 8))) == '3*a/8 + 1/4'


class TestLocalTerms:
    @pytest.mark.parametrize('sheaf,expected', [
        ('O', Fraction(1, 16)),
        ('Omega1', Fraction(-1, 4)),
        ('Omega2', Fraction(3, 8)),
    ])
    def test_point(self, sheaf, expected):
        assert point_local_term(sheaf) == expected

    @pytest.mark.parametrize('sheaf,expected', [
        ('O', GradedClass(Fraction(1, 4), Fraction(-1, 24), Fraction(1, 16))),
        ('Omega1', GradedClass(0, Fraction(-1, 2), Fraction(1, 4))),
        ('Omega2', GradedClass(Fraction(-1, 2), Fraction(1, 12), Fraction(3, 8))),
    ])
    def test_surface(self, sheaf, expected):
        assert surface_local_term(sheaf) == expected

    def test_surface_contribution(self):
        assert surface_contribution('K3', 'O') == (-1, Fraction(1, 16))
        assert surface_contribution('abelian', 'Omega2') == (0, Fraction(3, 8))

    def test_unsupported(self):
        with pytest.raises(UnsupportedSheafError):
            point_local_term('Omega3')
        with pytest.raises(UnsupportedSheafError):
            surface_contribution('enriques', 'O')


class TestTraces:
    def test_known_values(self):
        assert trace_S2(5) == 24
        assert trace_S2(-3) == 16
        assert trace_S2(21) == 1 + 21 * 22 // 2

    def test_parity(self):
        with pytest.raises(ParityError):
            trace_S2(4)
        with pytest.raises(ParityError):
            trace_S2(23)

    @pytest.mark.parametrize('h', range(1, 13))
    def test_closed_form_matches_bruteforce(self, h):
        for tau in range(-h, h + 1, 2):
            assert trace_S2(tau, h) == trace_S2_bruteforce(tau, h) == 1 + Fraction(h, 2) + Fraction(tau * tau, 2)

    @pytest.mark.parametrize('tau,expected', [(5, (3, -10, 26)), (-3, (3, 6, 18)), (3, (3, -6, 18))])
    def test_lefschetz_numbers(self, tau, expected):
        numbers = lefschetz_numbers(tau)
        assert (numbers.O, numbers.Omega1, numbers.Omega2) == expected

    def test_hodge_diamond(self):
        hodge = HodgeData()
        assert hodge.b2 == 23
        assert hodge.h22 == 232
        assert hodge.is_symmetric()
        assert sum(hodge.diamond().values()) == 1 + 23 + 276 + 23 + 1


class TestClassification:
    def test_general_solution(self):
        tau = sympy.Symbol('tau')
        n_expr, k_expr, _ = general_solution()
        assert sympy.expand(n_expr - (-tau ** 2 + 4 * tau + 33)) == 0
        assert sympy.expand(16 * k_expr - (tau ** 2 - 9)) == 0

    def test_three_cases(self):
        rows = [(s.tau, s.N, s.K, s.sum_a) for s in solve_classification()]
        assert rows == [(-3, 12, 0, 36), (3, 36, 0, 12), (5, 28, 1, 36)]

    def test_solutions_satisfy_the_system(self):
        for sol in solve_classification():
            values = {N_SYM: sol.N, K_SYM: sol.K, SUM_A: sympy.Rational(sol.sum_a.numerator, sol.sum_a.denominator)}
            for eq in assemble_system(sol.tau):
                assert sympy.simplify(eq.lhs.subs(values) - eq.rhs) == 0

    def test_seven_is_excluded_both_ways(self):
        _, excluded = enumerate_traces()
        reasons = {e.tau: e.reasons for e in excluded}
        assert any('16' in r for r in reasons[7])
        assert 'N < 0' in reasons[-7]
        assert 'K < 0' in reasons[1]

    def test_even_trace_rejected(self):
        with pytest.raises(ParityError):
            ClassificationSolution(4, 0, 0, Fraction(0))

    def test_as_row(self):
        assert ClassificationSolution(5, 28, 1, Fraction(36)).as_row() == {'tau': 5, 'N': 28, 'K': 1, 'sum_a': '36'}


class TestCorollary:
    def test_k3_case(self):
        certs = corollary_check(ClassificationSolution(5, 28, 1, Fraction(36)))
        assert [c.name for c in certs] == ['at_least_12_points', 'at_most_one_k3', 'k3_forces_28_points']
        assert all(c.passed for c in certs)

    @pytest.mark.parametrize('tau,n,sum_a', [(-3, 12, 36), (3, 36, 12)])
    def test_abelian_cases(self, tau, n, sum_a):
        certs = corollary_check(ClassificationSolution(tau, n, 0, Fraction(sum_a)))
        assert certs[-1].name == 'abelian_surface_required'
        assert all(c.passed for c in certs)

    def test_violation_is_reported(self):
        certs = corollary_check(ClassificationSolution(5, 20, 1, Fraction(36)))
        assert [c.name for c in certs if not c.passed] == ['k3_forces_28_points']
