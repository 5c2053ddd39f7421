"""
Holomorphic Lefschetz local terms for a symplectic involution of a fourfold.

The differential of the involution is −1 on the normal directions of every
fixed component: all four directions at an isolated point, the two normal
directions along a fixed surface. The local terms are produced from that
eigenvalue data with ring arithmetic; nothing here is a tabulated value.
"""

import logging
from fractions import Fraction
from itertools import combinations
from math import prod

import sympy

from apps.core.exceptions import UnsupportedSheafError

from .graded import GradedClass, c2_normal_dual, c2_tangent, ch_rank2_c1zero, todd_surface

logger = logging.getLogger(__name__)

SHEAVES = ('O', 'Omega1', 'Omega2')
SHEAF_DEGREE = {'O': 0, 'Omega1': 1, 'Omega2': 2}

# ∫ c₂ over the fixed surface types allowed by c₁ = 0
SURFACE_EULER_NUMBER = {'K3': 24, 'abelian': 0}

POINT_TANGENT_EIGENVALUES = (-1, -1, -1, -1)

SUM_A = sympy.Symbol('sum_a')


def _sheaf_degree(sheaf):
    try:
        return SHEAF_DEGREE[sheaf]
    except KeyError:
        raise UnsupportedSheafError(f"no local term for sheaf {sheaf!r}; expected one of {SHEAVES}") from None


def _elementary_symmetric(values, p):
    return sum((prod(c) for c in combinations(values, p)), 0)


def point_local_term(sheaf, eigenvalues=POINT_TANGENT_EIGENVALUES):
    """
    tr(i* | Ωᵖ at p) / det(1 − di) at an isolated fixed point.

    The cotangent eigenvalues coincide with the tangent ones for an
    involution, so the trace on ∧ᵖT* is the p-th elementary symmetric
    function of the eigenvalues.
    """
    p = _sheaf_degree(sheaf)
    det = prod(1 - Fraction(lam) for lam in eigenvalues)
    return Fraction(_elementary_symmetric(eigenvalues, p)) / det


def _exterior_powers_rank2(ch):
    # ∧⁰ = O, ∧¹ = E, ∧² = det E = O because c₁ = 0
    return [GradedClass(1), ch, GradedClass(1)]


def equivariant_character(sheaf):
    """
    ch_g of Ωᵖ_X restricted to a fixed surface Y.

    Ω¹_X|Y = Ω¹_Y ⊕ N*, with the involution acting by +1 on Ω¹_Y and by −1
    on N*, so ∧ᵖ picks up (−1)ʲ on the summand ∧ⁱΩ¹_Y ⊗ ∧ʲN*.
    """
    p = _sheaf_degree(sheaf)
    tangent = _exterior_powers_rank2(ch_rank2_c1zero(c2_tangent()))
    normal = _exterior_powers_rank2(ch_rank2_c1zero(c2_normal_dual()))
    total = GradedClass()
    for i in range(3):
        j = p - i
        if 0 <= j <= 2:
            total = total + tangent[i] * normal[j] * (-1) ** j
    return total


def normal_denominator():
    """ch_g(λ₋₁N*) = Σⱼ (−1)ʲ ch_g(∧ʲN*) = 1 + ch(N*) + 1."""
    normal = _exterior_powers_rank2(ch_rank2_c1zero(c2_normal_dual()))
    total = GradedClass()
    for j in range(3):
        total = total + normal[j] * (-1) ** j * (-1) ** j
    return total


def surface_local_term(sheaf):
    """ch_g(E|Y) · Td(Y) / ch_g(λ₋₁N*) for a fixed surface with c₁ = 0."""
    return equivariant_character(sheaf) * todd_surface() / normal_denominator()


def surface_contribution(kind, sheaf):
    """
    Integral of the surface local term over one fixed surface.

    The c₂(Y) part integrates to the Euler number of the surface type and
    the c₂(X)·[Y] part is left as the symbol a_j.

    Returns:
        (euler-number part as Fraction, coefficient of a_j as Fraction)
    """
    if kind not in SURFACE_EULER_NUMBER:
        raise UnsupportedSheafError(f"fixed surfaces must be K3 or abelian, got {kind!r}")
    term = surface_local_term(sheaf)
    return term.c2Y * SURFACE_EULER_NUMBER[kind], term.a
