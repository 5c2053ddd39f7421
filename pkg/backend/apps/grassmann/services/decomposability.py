"""
Decomposability of 3-vectors.

A nonzero α ∈ ∧³V is decomposable exactly when its annihilator
{v ∈ V : v ∧ α = 0} is 3-dimensional. The Plücker contraction test
((ι_ψ α) ∧ α = 0 for every ψ in a basis of ∧²V*) is kept as an independent
oracle and the two are cross-checked on every call to is_decomposable.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from apps.core.exceptions import DegreeError, OracleDisagreementError, ZeroVectorError
from apps.exalg.services import linalg
from apps.exalg.services.multivector import MultiVector, basis_tuples, interior, wedge, wedge_all
from apps.exalg.services.subspace import Subspace, subspace_from

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecompVerdict:
    """
    Result of a decomposability test.

    witness_plane is the annihilator of the tested vector, present exactly
    when the vector is decomposable.
    """

    decomposable: bool
    witness_plane: Optional[Subspace] = None

    def __post_init__(self):
        if self.decomposable != (self.witness_plane is not None):
            raise ValueError("witness plane must be present iff the vector is decomposable")


def _check_trivector(alpha):
    if alpha.degree != 3:
        raise DegreeError(f"expected a 3-vector, got degree {alpha.degree}")
    if alpha.is_zero():
        raise ZeroVectorError("the zero 3-vector is not a point of P(∧³V)")


def annihilator(alpha):
    """{v ∈ V : v ∧ alpha = 0} as a subspace of V."""
    _check_trivector(alpha)
    n = alpha.n
    columns = [wedge(MultiVector.basis(n, i), alpha).coordinates() for i in range(1, n + 1)]
    kernel = linalg.nullspace(linalg.transpose(columns), n)
    return subspace_from([MultiVector.vector(v) for v in kernel], n, 1)


def contraction_criterion(alpha):
    """Plücker test: (ι_ψ α) ∧ α = 0 for all ψ in the basis of ∧²V*."""
    _check_trivector(alpha)
    return all(wedge(interior(psi, alpha), alpha).is_zero() for psi in basis_tuples(alpha.n, 2))


def _is_proportional(a, b):
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    idx, coeff = a.items[0]
    ratio = b.coefficient(idx) / coeff
    return ratio != 0 and a * ratio == b


def is_decomposable(alpha, cross_check=True):
    """
    Decide decomposability of a nonzero 3-vector.

    Args:
        alpha: MultiVector of degree 3
        cross_check: also run the contraction oracle and fail loudly on
            disagreement

    Returns:
        DecompVerdict
    """
    plane = annihilator(alpha)
    decomposable = plane.dim == 3
    if decomposable and not _is_proportional(wedge_all(plane.basis), alpha):
        raise OracleDisagreementError(f"annihilator of {alpha} does not wedge back to it")
    if cross_check and contraction_criterion(alpha) != decomposable:
        logger.error("decomposability criteria disagree on %s", alpha)
        raise OracleDisagreementError(f"annihilator and contraction criteria disagree on {alpha}")
    return DecompVerdict(decomposable, plane if decomposable else None)


def decomposable_witness_in(space, budget, seed, coefficient_bound=7):
    """
    Randomized search for a decomposable vector in a subspace of ∧³V.

    Samples integer combinations of the echelon basis with coefficients in
    [-coefficient_bound, coefficient_bound]. Deterministic given
    (budget, seed). Finding nothing proves nothing.

    Returns:
        a decomposable MultiVector, or None when the budget is exhausted
    """
    if space.dim == 0:
        raise ZeroVectorError("cannot search the zero subspace")
    rng = np.random.default_rng(seed)
    basis = space.basis
    for attempt in range(budget):
        weights = [int(w) for w in rng.integers(-coefficient_bound, coefficient_bound, size=len(basis), endpoint=True)]
        if not any(weights):
            continue
        candidate = MultiVector.zero(space.n, space.degree)
        for w, b in zip(weights, basis):
            if w:
                candidate = candidate + b * w
        if candidate.is_zero():
            continue
        if annihilator(candidate).dim == 3:
            logger.info("decomposable witness found after %d samples", attempt + 1)
            return candidate
    logger.debug("no decomposable witness in %d samples", budget)
    return None
