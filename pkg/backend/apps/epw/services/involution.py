"""
Involutions of V = C⁶ and the induced splitting of ∧³V.

For an involution with eigenspaces V⁺ = span(e₁..e_p) and
V⁻ = span(e_{p+1}..e₆), a basis 3-vector e_I lies in the block
∧^{3−m}V⁺ ⊗ ∧^mV⁻ where m counts indices of I in V⁻. Blocks with m even form
(∧³V)⁺, blocks with m odd form (∧³V)⁻.
"""

import logging
from dataclasses import dataclass
from math import comb

from apps.core.exceptions import VerificationError
from apps.exalg.services.multivector import MultiVector, basis_tuples
from apps.exalg.services.subspace import subspace_from

logger = logging.getLogger(__name__)

N = 6
ADMISSIBLE_DIM_PLUS = (3, 4, 5)


@dataclass(frozen=True)
class InvolutionSplit:
    """
    V = V⁺ ⊕ V⁻ with V⁺ spanned by the first dim_plus basis vectors.

    For dim_plus = 4 the minus basis is f₁ = e₅, f₂ = e₆.
    """

    dim_plus: int = 4
    n: int = N

    def __post_init__(self):
        if self.dim_plus not in ADMISSIBLE_DIM_PLUS:
            raise VerificationError(f"dim V+ must be one of {ADMISSIBLE_DIM_PLUS}, got {self.dim_plus}")

    @property
    def dim_minus(self):
        return self.n - self.dim_plus

    @property
    def labels(self):
        plus = [f'e{i}' for i in range(1, self.dim_plus + 1)]
        minus = [f'f{j}' for j in range(1, self.dim_minus + 1)]
        return tuple(plus + minus)

    def sign(self, index):
        return 1 if index <= self.dim_plus else -1

    def minus_count(self, idx):
        return sum(1 for i in idx if i > self.dim_plus)

    def tuple_sign(self, idx):
        return -1 if self.minus_count(idx) % 2 else 1

    @property
    def determinant(self):
        return (-1) ** self.dim_minus

    @property
    def symplectic_on_wedge3(self):
        """The involution preserves ω on ∧³V iff it acts trivially on ∧⁶V."""
        return self.determinant == 1

    def block_tuples(self, m):
        return [idx for idx in basis_tuples(self.n, 3) if self.minus_count(idx) == m]

    def block_dims(self):
        """{m: dim ∧^{3−m}V⁺ ⊗ ∧^mV⁻} for m = 0..3, counted from basis tuples."""
        dims = {m: len(self.block_tuples(m)) for m in range(4)}
        for m, d in dims.items():
            assert d == comb(self.dim_plus, 3 - m) * comb(self.dim_minus, m)
        return dims

    def eigenspace_dims(self):
        dims = self.block_dims()
        return dims[0] + dims[2], dims[1] + dims[3]

    def block(self, m):
        return subspace_from([MultiVector.basis(self.n, *idx) for idx in self.block_tuples(m)], self.n, 3)

    def eigenspace(self, sign):
        tuples = [idx for idx in basis_tuples(self.n, 3) if self.tuple_sign(idx) == sign]
        return subspace_from([MultiVector.basis(self.n, *idx) for idx in tuples], self.n, 3)

    def act(self, vector):
        """Image of a multivector under the involution."""
        return MultiVector(
            vector.n, vector.degree,
            tuple((idx, coeff * (-1) ** self.minus_count(idx)) for idx, coeff in vector.items),
        )

    def project(self, vector, sign):
        return MultiVector(
            vector.n, vector.degree,
            tuple((idx, c) for idx, c in vector.items if (-1) ** self.minus_count(idx) == sign),
        )

    def plus_vectors(self):
        return [MultiVector.basis(self.n, i) for i in range(1, self.dim_plus + 1)]

    def minus_vectors(self):
        return [MultiVector.basis(self.n, i) for i in range(self.dim_plus + 1, self.n + 1)]


@dataclass(frozen=True)
class DimensionCount:
    """P(A-part) of projective dimension a against a decomposable locus of dimension b in Pᶜ."""

    label: str
    part_dim: int
    locus_dim: int
    ambient_dim: int

    @property
    def forces_intersection(self):
        return self.part_dim + self.locus_dim >= self.ambient_dim

    def __str__(self):
        return f"{self.label}: {self.part_dim} + {self.locus_dim} >= {self.ambient_dim}"


@dataclass(frozen=True)
class ObstructionVerdict:
    dim_plus: int
    obstructed: bool
    witnesses: tuple
    block_dims: dict
    symplectic_on_wedge3: bool

    def to_dict(self):
        return {
            'dim_plus': self.dim_plus,
            'obstructed': self.obstructed,
            'witnesses': [str(w) for w in self.witnesses],
            'block_dims': {str(k): v for k, v in self.block_dims.items()},
            'symplectic_on_wedge3': self.symplectic_on_wedge3,
        }


def _grassmannian_dim(k, n):
    return k * (n - k)


def smoothness_obstruction(dim_plus):
    """
    Decide whether an involution with dim V⁺ = dim_plus can have smooth X_A.

    dim_plus = 5: one of A⁺, A⁻ has dim ≥ 5, a P⁴ in P⁹ meeting a 6-dimensional
    decomposable locus. dim_plus = 3: either a part of dim ≥ 6 meets the
    4-dimensional locus P(V^±) × G(2,3), or both parts have dim 5 and some
    v ∈ V⁺ has dim(v∧∧²V) ∩ A ≥ 3. dim_plus = 4 is admissible, subject to
    the Lagrangian checks.
    """
    split = InvolutionSplit(dim_plus)
    dims = split.block_dims()
    plus_dim, minus_dim = split.eigenspace_dims()
    half = (plus_dim + minus_dim) // 2
    witnesses = []
    if dim_plus == 5:
        # one of A⁺, A⁻ has dim ≥ ⌈dim A / 2⌉
        part = -(-half // 2) - 1
        witnesses.append(DimensionCount('P(A+) ∩ G(3,V+)', part, _grassmannian_dim(3, 5), plus_dim - 1))
        witnesses.append(DimensionCount(
            'P(A-) ∩ P(V-) x G(2,V+)', part, (split.dim_minus - 1) + _grassmannian_dim(2, 5), minus_dim - 1,
        ))
        obstructed = all(w.forces_intersection for w in witnesses)
    elif dim_plus == 3:
        locus = (3 - 1) + _grassmannian_dim(2, 3)
        witnesses.append(DimensionCount('dim A+ >= 6: P(A+) ∩ P(V+) x G(2,V-)', 5, locus, plus_dim - 1))
        witnesses.append(DimensionCount('dim A- >= 6: P(A-) ∩ P(V-) x G(2,V+)', 5, locus, minus_dim - 1))
        witnesses.append(DimensionCount('dim A+ = dim A- = 5: some v in V+ has fiber dimension', 3, 0, 3))
        obstructed = all(w.forces_intersection for w in witnesses)
    else:
        obstructed = False
    logger.debug("smoothness_obstruction(%d): obstructed=%s", dim_plus, obstructed)
    return ObstructionVerdict(dim_plus, obstructed, tuple(witnesses), dims, split.symplectic_on_wedge3)
