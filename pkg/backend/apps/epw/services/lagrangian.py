"""
Involution-invariant Lagrangian subspaces A = A⁺ ⊕ A⁻ of ∧³V for dim V⁺ = 4.

A⁻ is the graph of a Q-self-adjoint operator u on ∧²V⁺,
    A⁻ = {f₁∧x + f₂∧u(x) : x ∈ ∧²V⁺},
and A⁺ is the graph of a symmetric isomorphism φ: V⁺ → ∧³V⁺,
    A⁺ = {f₁∧f₂∧v + φ(v) : v ∈ V⁺}.
Here V⁺ = span(e₁..e₄), f₁ = e₅, f₂ = e₆ and Q(x, y) is the e₁₂₃₄
coefficient of x∧y.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from apps.core.exceptions import (
    AmbientMismatchError,
    SelfAdjointnessError,
    SingularMapError,
    SymmetryError,
    VerificationError,
    ZeroVectorError,
)
from apps.core.services.report import Certificate
from apps.exalg.services import linalg
from apps.exalg.services.multivector import (
    MultiVector,
    basis_tuples,
    gram_matrix,
    symplectic_form,
    top_coefficient,
    wedge,
)
from apps.exalg.services.subspace import graph_extract, intersect, span_sum, subspace_from
from apps.grassmann.services.decomposability import decomposable_witness_in

from .involution import InvolutionSplit

logger = logging.getLogger(__name__)

PLUS_DIM = 4
N = 6
F1, F2 = 5, 6
WEDGE2_TUPLES = basis_tuples(PLUS_DIM, 2)
WEDGE3_TUPLES = basis_tuples(PLUS_DIM, 3)
LAMBDA = sympy.Symbol('lambda')

# ê₁..ê₄ with e_i ∧ ê_j = δ_ij e₁₂₃₄
DUAL_TRIVECTORS = (
    ((2, 3, 4), 1),
    ((1, 3, 4), -1),
    ((1, 2, 4), 1),
    ((1, 2, 3), -1),
)


def _label(idx):
    return 'e' + ''.join(str(i) for i in idx)


def wedge2_basis():
    return [MultiVector.basis(PLUS_DIM, *idx) for idx in WEDGE2_TUPLES]


def dual_trivector(i):
    idx, sign = DUAL_TRIVECTORS[i - 1]
    return MultiVector.basis(PLUS_DIM, *idx) * sign


def hyperbolic_eigenbasis():
    """x±₁ = e₁₂ ± e₃₄, x±₂ = e₁₃ ± e₂₄, x±₃ = e₁₄ ± e₂₃, in that order."""
    pairs = (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3)))
    basis = []
    for a, b in pairs:
        x, y = MultiVector.basis(PLUS_DIM, *a), MultiVector.basis(PLUS_DIM, *b)
        basis.extend((x + y, x - y))
    return basis


EIGENBASES = {'hyperbolic': hyperbolic_eigenbasis}


class PluckerForm:
    """Q(x, y) = coefficient of e₁₂₃₄ in x ∧ y on ∧²V⁺."""

    def __init__(self):
        self.basis = wedge2_basis()
        self.gram = gram_matrix(self, self.basis)

    def __call__(self, x, y):
        if x.degree != 2 or y.degree != 2:
            raise AmbientMismatchError(f"Q is defined on 2-vectors, got degrees {x.degree}, {y.degree}")
        return top_coefficient(wedge(x.restrict(PLUS_DIM), y.restrict(PLUS_DIM)))

    def quadratic(self, x):
        return self(x, x)

    def numeric_gram(self):
        return np.array([[float(c) for c in row] for row in self.gram])

    def evaluate(self, x, y):
        """Bilinear (not Hermitian) evaluation on numeric coordinate vectors."""
        return np.asarray(x) @ self.numeric_gram() @ np.asarray(y)

    def is_nondegenerate(self):
        return linalg.determinant(self.gram) != 0


PLUCKER = PluckerForm()


@dataclass(frozen=True)
class SelfAdjointOp:
    """
    Operator u on ∧²V⁺ given by its 6×6 matrix in the lexicographic basis
    (column j is u applied to the j-th basis 2-vector).
    """

    matrix: tuple

    def __post_init__(self):
        rows = linalg.to_rows(self.matrix)
        if len(rows) != len(WEDGE2_TUPLES) or any(len(r) != len(WEDGE2_TUPLES) for r in rows):
            raise AmbientMismatchError(f"u must be a {len(WEDGE2_TUPLES)}x{len(WEDGE2_TUPLES)} matrix")
        object.__setattr__(self, 'matrix', tuple(tuple(r) for r in rows))
        # Gram·M must be symmetric
        gm = linalg.matmul(PLUCKER.gram, rows)
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                if gm[i][j] != gm[j][i]:
                    pair = (_label(WEDGE2_TUPLES[i]), _label(WEDGE2_TUPLES[j]))
                    raise SelfAdjointnessError(pair)

    @classmethod
    def from_spectrum(cls, eigenvalues, eigenbasis='hyperbolic'):
        """u = P·diag(eigenvalues)·P⁻¹ for a named or explicit eigenbasis."""
        vectors = EIGENBASES[eigenbasis]() if isinstance(eigenbasis, str) else list(eigenbasis)
        if len(vectors) != len(eigenvalues):
            raise AmbientMismatchError(f"{len(eigenvalues)} eigenvalues for {len(vectors)} eigenvectors")
        p = linalg.transpose([v.coordinates() for v in vectors])
        matrix = linalg.matmul(linalg.matmul(p, linalg.diagonal(eigenvalues)), linalg.inverse(p))
        return cls(tuple(tuple(r) for r in matrix))

    @classmethod
    def identity(cls):
        return cls(tuple(tuple(r) for r in linalg.identity(len(WEDGE2_TUPLES))))

    @classmethod
    def zero(cls):
        size = len(WEDGE2_TUPLES)
        return cls(tuple((Fraction(0),) * size for _ in range(size)))

    @property
    def rows(self):
        return [list(r) for r in self.matrix]

    def apply(self, x):
        x = x.restrict(PLUS_DIM)
        return MultiVector.from_coordinates(PLUS_DIM, 2, linalg.matvec(self.rows, x.coordinates()))

    __call__ = apply

    def to_sympy(self):
        return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in self.matrix])

    def to_numpy(self):
        return np.array([[float(c) for c in row] for row in self.matrix])

    def charpoly(self):
        return self.to_sympy().charpoly(LAMBDA)

    def has_distinct_eigenvalues(self):
        """Squarefree test: gcd(p, p') is constant."""
        p = self.charpoly()
        return sympy.gcd(p, p.diff()).degree() == 0

    def rational_eigenvalues(self):
        """Sorted rational roots, or None when the spectrum is not fully rational."""
        _, factors = self.charpoly().factor_list()
        roots = []
        for factor, multiplicity in factors:
            if factor.degree() == 1:
                a, b = factor.all_coeffs()
                roots.extend([-Fraction(str(b)) / Fraction(str(a))] * multiplicity)
        if len(roots) != len(WEDGE2_TUPLES):
            return None
        return sorted(roots)


@dataclass(frozen=True)
class SymmetricPhi:
    """
    φ: V⁺ → ∧³V⁺ with φ(e_k) = Σ_j B[j][k] ê_j, so v ∧ φ(w) = (vᵀ B w) e₁₂₃₄.
    """

    matrix: tuple

    def __post_init__(self):
        rows = linalg.to_rows(self.matrix)
        if len(rows) != PLUS_DIM or any(len(r) != PLUS_DIM for r in rows):
            raise AmbientMismatchError(f"B must be a {PLUS_DIM}x{PLUS_DIM} matrix")
        object.__setattr__(self, 'matrix', tuple(tuple(r) for r in rows))
        for i in range(PLUS_DIM):
            for j in range(i + 1, PLUS_DIM):
                if rows[i][j] != rows[j][i]:
                    raise SymmetryError((f'e{i + 1}', f'e{j + 1}'))
        if linalg.determinant(rows) == 0:
            raise SingularMapError("phi is not invertible: det B = 0")

    @property
    def rows(self):
        return [list(r) for r in self.matrix]

    def apply(self, v):
        v = v.restrict(PLUS_DIM)
        if v.degree != 1:
            raise AmbientMismatchError(f"phi takes vectors, got degree {v.degree}")
        coords = linalg.matvec(self.rows, v.coordinates())
        result = MultiVector.zero(PLUS_DIM, 3)
        for j, c in enumerate(coords, start=1):
            if c:
                result = result + dual_trivector(j) * c
        return result

    __call__ = apply

    def bilinear(self, v, w):
        """B(v, w) read off v ∧ φ(w)."""
        return top_coefficient(wedge(v.restrict(PLUS_DIM), self.apply(w)))


def _as_operator(u):
    return u if isinstance(u, SelfAdjointOp) else SelfAdjointOp(u)


def _as_phi(phi):
    return phi if isinstance(phi, SymmetricPhi) else SymmetricPhi(phi)


def f_vector(i):
    return MultiVector.basis(N, PLUS_DIM + i)


def lagrangian_defect(vectors):
    """First pair (i, j) of the list with ω ≠ 0, or None."""
    for i, a in enumerate(vectors):
        for j in range(i, len(vectors)):
            if symplectic_form(a, vectors[j]) != 0:
                return i, j
    return None


def minus_generators(u):
    u = _as_operator(u)
    return [
        wedge(f_vector(1), x.embed(N)) + wedge(f_vector(2), u.apply(x).embed(N))
        for x in wedge2_basis()
    ]


def plus_generators(phi):
    phi = _as_phi(phi)
    f12 = wedge(f_vector(1), f_vector(2))
    return [
        wedge(f12, MultiVector.basis(N, i)) + phi.apply(MultiVector.basis(PLUS_DIM, i)).embed(N)
        for i in range(1, PLUS_DIM + 1)
    ]


def build_A_minus(u):
    """
    A⁻ = {f₁∧x + f₂∧u(x)} ⊂ V⁻ ⊗ ∧²V⁺.

    Raises:
        SelfAdjointnessError: u is not Q-self-adjoint (carries the basis pair)
    """
    generators = minus_generators(u)
    space = subspace_from(generators, N, 3)
    if space.dim != len(WEDGE2_TUPLES) or lagrangian_defect(space.basis) is not None:
        raise VerificationError("A- is not a 6-dimensional isotropic subspace")
    return space


def build_A_plus(phi):
    """
    A⁺ = {f₁∧f₂∧v + φ(v)} ⊂ ∧³V⁺ ⊕ (∧²V⁻ ⊗ V⁺).

    Raises:
        SymmetryError, SingularMapError: φ not symmetric or not invertible
    """
    generators = plus_generators(phi)
    space = subspace_from(generators, N, 3)
    if space.dim != PLUS_DIM or lagrangian_defect(space.basis) is not None:
        raise VerificationError("A+ is not a 4-dimensional isotropic subspace")
    return space


def first_summand_minus(i=1):
    """f_i ∧ ∧²V⁺ inside ∧³V."""
    return subspace_from([wedge(f_vector(i), x.embed(N)) for x in wedge2_basis()], N, 3)


def wedge3_plus():
    return subspace_from([MultiVector.basis(N, *idx) for idx in WEDGE3_TUPLES], N, 3)


def f12_plus():
    f12 = wedge(f_vector(1), f_vector(2))
    return subspace_from([wedge(f12, MultiVector.basis(N, i)) for i in range(1, PLUS_DIM + 1)], N, 3)


def operator_from_A_minus(a_minus):
    """
    Recover u from A⁻ by the graph lemma with E₁ = f₁∧∧²V⁺, E₂ = f₂∧∧²V⁺.

    The echelon basis of f_i∧∧²V⁺ is e_{ab(4+i)} in the order of the ∧²V⁺
    basis, so the extracted matrix is the matrix of u.
    """
    f = graph_extract(a_minus, first_summand_minus(1), first_summand_minus(2))
    return SelfAdjointOp(f.matrix)


def phi_from_A_plus(a_plus):
    """Recover B from A⁺ by the graph lemma with E₁ = f₁∧f₂∧V⁺, E₂ = ∧³V⁺."""
    f = graph_extract(a_plus, f12_plus(), wedge3_plus())
    # ∧³V⁺ echelon basis is e₁₂₃, e₁₂₄, e₁₃₄, e₂₃₄ = −ê₄, ê₃, −ê₂, ê₁
    signs = {0: (3, -1), 1: (2, 1), 2: (1, -1), 3: (0, 1)}
    b = [[Fraction(0)] * PLUS_DIM for _ in range(PLUS_DIM)]
    for row, (j, sign) in signs.items():
        for k in range(PLUS_DIM):
            b[j][k] = sign * f.matrix[row][k]
    return SymmetricPhi(tuple(tuple(r) for r in b))


@dataclass(frozen=True)
class InvariantLagrangian:
    A_plus: object
    A_minus: object
    u: SelfAdjointOp
    phi: SymmetricPhi
    split: InvolutionSplit = InvolutionSplit(PLUS_DIM)

    @property
    def space(self):
        return span_sum(self.A_plus, self.A_minus)

    @property
    def dim(self):
        return self.space.dim


def assemble_invariant_lagrangian(u, phi):
    u, phi = _as_operator(u), _as_phi(phi)
    lag = InvariantLagrangian(build_A_plus(phi), build_A_minus(u), u, phi)
    logger.debug("assembled A with dim A+ = %d, dim A- = %d", lag.A_plus.dim, lag.A_minus.dim)
    return lag


def fiber_space(v):
    """F_v = v ∧ ∧²V ⊂ ∧³V."""
    if v.degree != 1:
        raise AmbientMismatchError(f"fiber_dim takes a vector, got degree {v.degree}")
    if v.is_zero():
        raise ZeroVectorError("the zero vector is not a point of P(V)")
    v = v.embed(N) if v.n < N else v
    return subspace_from([wedge(v, MultiVector.basis(N, *idx)) for idx in basis_tuples(N, 2)], N, 3)


def _space_of(a):
    return a.space if isinstance(a, InvariantLagrangian) else a


def fiber_dim(v, a):
    """dim (v ∧ ∧²V) ∩ A."""
    return intersect(fiber_space(v), _space_of(a)).dim


def fiber_split(v, lag):
    """
    (dim F_v⁺ ∩ A⁺, dim F_v⁻ ∩ A⁻) for v in V⁺ or in V⁻.

    For such v the fiber is invariant under the involution and splits into
    its two eigenparts.
    """
    v6 = v.embed(N) if v.n < N else v
    signs = {lag.split.sign(idx[0]) for idx, _ in v6.items}
    if len(signs) != 1:
        raise VerificationError(f"{v} is not an eigenvector of the involution")
    fiber = fiber_space(v6)
    plus = intersect(intersect(fiber, lag.split.eigenspace(1)), lag.A_plus).dim
    minus = intersect(intersect(fiber, lag.split.eigenspace(-1)), lag.A_minus).dim
    return plus, minus


def _rational_eigenvectors(u, eigenvalues):
    vectors = []
    for lam in eigenvalues:
        shifted = [[c - (lam if i == j else 0) for j, c in enumerate(row)] for i, row in enumerate(u.rows)]
        vectors.extend(linalg.nullspace(shifted, len(WEDGE2_TUPLES)))
    return vectors


def eigenvector_plucker_values(u, tol=1e-8):
    """
    Q(x, x) for every eigenvector x of u; x is decomposable iff Q(x, x) = 0.

    Returns:
        (values, exact) with exact values as Fraction when the spectrum is
        rational, otherwise |Q(x, x)| / |x|² from numpy eigenvectors
    """
    eigenvalues = u.rational_eigenvalues()
    if eigenvalues is not None:
        vectors = _rational_eigenvectors(u, eigenvalues)
        return [PLUCKER.quadratic(MultiVector.from_coordinates(PLUS_DIM, 2, x)) for x in vectors], True
    _, vectors = np.linalg.eig(u.to_numpy())
    values = []
    for k in range(vectors.shape[1]):
        x = vectors[:, k]
        values.append(float(abs(PLUCKER.evaluate(x, x)) / np.vdot(x, x).real))
    return values, False


def check_LG_star(lag, decomposable_budget=0, seed=0, plucker_tol=1e-8):
    """
    Certificates for A ∈ 𝕃𝔾(∧³V)*.

    Every certificate names the hypothesis it certifies so that a failure
    points at the violated condition.
    """
    source = 'epw.check_LG_star'
    space = lag.space
    certs = []

    defect = lagrangian_defect(space.basis)
    certs.append(Certificate(
        'lagrangian', space.dim == 10 and defect is None,
        f"dim A = {space.dim}, first non-isotropic pair: {defect}", source, 'A is Lagrangian',
    ))
    for i in (1, 2):
        meet = intersect(lag.A_minus, first_summand_minus(i)).dim
        certs.append(Certificate(
            f'open_f{i}', meet == 0, f"dim A- ∩ f{i}∧∧²V+ = {meet}", source,
            f'A- ∩ (Cf{i} ⊗ ∧²V+) = 0',
        ))
    plus_meets = (intersect(lag.A_plus, wedge3_plus()).dim, intersect(lag.A_plus, f12_plus()).dim)
    certs.append(Certificate(
        'plus_graph', plus_meets == (0, 0),
        f"dim A+ ∩ ∧³V+ = {plus_meets[0]}, dim A+ ∩ f1∧f2∧V+ = {plus_meets[1]}", source,
        'A+ is the graph of an isomorphism',
    ))

    distinct = lag.u.has_distinct_eigenvalues()
    certs.append(Certificate(
        'distinct_eigenvalues', distinct, f"charpoly: {sympy.factor(lag.u.charpoly().as_expr())}", source,
        'u has 6 distinct eigenvalues',
    ))
    if distinct:
        values, exact = eigenvector_plucker_values(lag.u)
        ok = all(v != 0 for v in values) if exact else all(v > plucker_tol for v in values)
        mode = 'exact' if exact else f'numeric, tol={plucker_tol}'
        certs.append(Certificate(
            'no_decomposable_eigenvector', ok, f"Q(x,x) = {[str(v) for v in values]} ({mode})", source,
            'no eigenvector of u is decomposable',
        ))
    else:
        certs.append(Certificate(
            'no_decomposable_eigenvector', False, 'eigenvectors undefined for a repeated spectrum', source,
            'no eigenvector of u is decomposable',
        ))

    if decomposable_budget:
        witness = decomposable_witness_in(space, decomposable_budget, seed)
        certs.append(Certificate(
            'no_decomposable_sampled', witness is None,
            f"randomized search, budget={decomposable_budget}, seed={seed}: "
            + (f"witness {witness}" if witness is not None else "no witness (not a proof)"),
            source, 'A contains no decomposable vector',
        ))

    for cert in certs:
        log = logger.info if cert.passed else logger.warning
        log("LG* certificate %s: %s", cert.name, 'pass' if cert.passed else 'FAIL')
    return certs
