"""
Classification of symplectic involutions on fourfolds with b₂ = 23.

The three holomorphic Lefschetz numbers (for O, Ω¹, Ω²) are computed from
the action on the Hodge diamond and equated with the sum of local terms over
N isolated points, K fixed K3 surfaces and any number of abelian surfaces,
the latter entering only through Σaⱼ. The linear system is solved with
sympy, and the admissible integer traces τ are enumerated.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import sympy

from apps.core.exceptions import ParityError
from apps.core.services.report import Certificate

from .local_terms import SHEAVES, SUM_A, point_local_term, surface_contribution

logger = logging.getLogger(__name__)

TAU = sympy.Symbol('tau')
N_SYM, K_SYM = sympy.symbols('N K')
DEFAULT_H11 = 21


@dataclass(frozen=True)
class HodgeData:
    """Hodge numbers of a hyperkähler fourfold with given h^{1,1}."""

    h11: int = DEFAULT_H11

    @property
    def b2(self):
        return self.h11 + 2

    @property
    def h22(self):
        # S²H² → H⁴ restricted to type (2,2): S²H^{1,1} ⊕ H^{2,0}·H^{0,2}
        return 1 + comb(self.h11, 2) + self.h11

    def diamond(self):
        """{(p, q): h^{p,q}} for 0 ≤ p, q ≤ 4."""
        base = {(0, 0): 1, (2, 0): 1, (1, 1): self.h11, (4, 0): 1, (3, 1): self.h11, (2, 2): self.h22}
        table = {}
        for p in range(5):
            for q in range(5):
                for key in ((p, q), (q, p), (4 - p, 4 - q), (4 - q, 4 - p)):
                    if key in base:
                        table[(p, q)] = base[key]
                        break
                else:
                    table[(p, q)] = 0
        return table

    def is_symmetric(self):
        d = self.diamond()
        return all(d[(p, q)] == d[(q, p)] == d[(4 - p, 4 - q)] for p in range(5) for q in range(5))


@dataclass(frozen=True)
class ClassificationSolution:
    tau: int
    N: int
    K: int
    sum_a: Fraction

    def __post_init__(self):
        if self.tau % 2 == 0:
            raise ParityError(f"trace {self.tau} must be odd")

    def as_row(self):
        return {'tau': self.tau, 'N': self.N, 'K': self.K, 'sum_a': str(self.sum_a)}


@dataclass(frozen=True)
class ExcludedTrace:
    tau: int
    N: Fraction
    K: Fraction
    reasons: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class LefschetzNumbers:
    O: object
    Omega1: object
    Omega2: object

    def by_sheaf(self):
        return {'O': self.O, 'Omega1': self.Omega1, 'Omega2': self.Omega2}


def _check_parity(tau, h):
    if abs(tau) > h:
        raise ParityError(f"|tau|={abs(tau)} exceeds h={h}")
    if (h - tau) % 2:
        raise ParityError(f"tau={tau} and h={h} have different parity")


def trace_S2(tau, h=DEFAULT_H11):
    """
    Trace of the involution on H^{2,2}, given its trace τ on H^{1,1}.

    With a = (h+τ)/2 invariant and b = (h−τ)/2 anti-invariant classes,
    σ = 1 + a(a+1)/2 + b(b+1)/2 − ab = 1 + h/2 + τ²/2.
    """
    _check_parity(tau, h)
    a = (h + tau) // 2
    b = (h - tau) // 2
    return 1 + Fraction(a * (a + 1), 2) + Fraction(b * (b + 1), 2) - a * b


def trace_S2_bruteforce(tau, h=DEFAULT_H11):
    """1 + trace of diag(±1) on the symmetric square, summed over monomials."""
    _check_parity(tau, h)
    signs = [1] * ((h + tau) // 2) + [-1] * ((h - tau) // 2)
    return Fraction(1 + sum(signs[i] * signs[j] for i in range(h) for j in range(i, h)))


def _traces(tau, sigma):
    """Trace of i* on each H^{p,q} that can carry one, for p ≤ 2."""
    return {
        (0, 0): 1, (0, 2): 1, (0, 4): 1,
        (1, 1): tau, (1, 3): tau,
        (2, 0): 1, (2, 2): sigma, (2, 4): 1,
    }


def _lefschetz_from_traces(traces):
    values = [sum((-1) ** q * traces.get((p, q), 0) for q in range(5)) for p in range(3)]
    return LefschetzNumbers(*values)


def lefschetz_numbers(tau, hodge=None):
    """(L(i, O), L(i, Ω¹), L(i, Ω²)) = (3, −2τ, (27 + τ²)/2) for h^{1,1} = 21."""
    hodge = hodge or HodgeData()
    return _lefschetz_from_traces(_traces(tau, trace_S2(tau, hodge.h11)))


def _symbolic_lefschetz(hodge):
    sigma = 1 + sympy.Rational(hodge.h11, 2) + TAU ** 2 / 2
    return _lefschetz_from_traces(_traces(TAU, sigma))


def assemble_system(tau=TAU, hodge=None):
    """
    The three fixed-point equations in (N, K, Σaⱼ).

    Returns:
        list of sympy equations, one per sheaf in SHEAVES order
    """
    hodge = hodge or HodgeData()
    numbers = _symbolic_lefschetz(hodge).by_sheaf()
    equations = []
    for sheaf in SHEAVES:
        point = sympy.Rational(point_local_term(sheaf))
        euler_part, a_coeff = surface_contribution('K3', sheaf)
        lhs = N_SYM * point + K_SYM * sympy.Rational(euler_part) + SUM_A * sympy.Rational(a_coeff)
        equations.append(sympy.Eq(lhs, sympy.sympify(numbers[sheaf]).subs(TAU, tau)))
    return equations


def general_solution(hodge=None):
    """(N, K, Σaⱼ) as polynomials in τ."""
    solutions = sympy.linsolve(assemble_system(hodge=hodge), [N_SYM, K_SYM, SUM_A])
    (n_expr, k_expr, s_expr), = solutions
    return sympy.expand(n_expr), sympy.expand(k_expr), sympy.expand(s_expr)


def enumerate_traces(hodge=None):
    """
    Evaluate the general solution at every admissible τ.

    Returns:
        (solutions, exclusions) with exclusions listing the failed constraints
    """
    hodge = hodge or HodgeData()
    n_expr, k_expr, s_expr = general_solution(hodge)
    solutions, exclusions = [], []
    for tau in range(-hodge.h11, hodge.h11 + 1):
        if (hodge.h11 - tau) % 2:
            continue
        n_val = Fraction(str(n_expr.subs(TAU, tau)))
        k_val = Fraction(str(k_expr.subs(TAU, tau)))
        s_val = Fraction(str(s_expr.subs(TAU, tau)))
        reasons = []
        if n_val.denominator != 1:
            reasons.append('N not an integer')
        if n_val < 0:
            reasons.append('N < 0')
        if k_val.denominator != 1:
            reasons.append('16K = tau^2 - 9 not divisible by 16')
        if k_val < 0:
            reasons.append('K < 0')
        if reasons:
            exclusions.append(ExcludedTrace(tau, n_val, k_val, tuple(reasons)))
        else:
            solutions.append(ClassificationSolution(tau, int(n_val), int(k_val), s_val))
    logger.info("classification: %d admissible traces", len(solutions))
    return solutions, exclusions


def solve_classification(hodge=None):
    return enumerate_traces(hodge)[0]


def corollary_check(sol):
    """Consequences of the classification for one admissible case."""
    source = 'lefschetz.corollary_check'
    certs = [
        Certificate('at_least_12_points', sol.N >= 12, f"N={sol.N}", source),
        Certificate('at_most_one_k3', sol.K <= 1, f"K={sol.K}", source),
    ]
    if sol.K == 1:
        certs.append(Certificate('k3_forces_28_points', sol.N == 28, f"K=1, N={sol.N}", source))
    else:
        # with no K3 the forced Σaⱼ > 0 can only come from abelian surfaces
        certs.append(Certificate(
            'abelian_surface_required', sol.sum_a > 0,
            f"K=0 and sum_a={sol.sum_a}: at least one abelian surface is fixed", source,
        ))
    return certs
