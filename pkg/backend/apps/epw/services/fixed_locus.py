"""
Fixed locus of the involution on Y_A ⊂ P(V).

It has three parts: the points f₁ + λf₂ for the eigenvalues λ of u, the
quadric Q = {v ∈ P(V⁺) : v∧φ(v) = 0}, and the Kummer surface
S = {v ∈ P(V⁺) : (v∧V⁺) ∩ u⁻¹(v∧V⁺) ≠ 0}, whose singular points are the
points where that intersection is 2-dimensional.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import sympy

from apps.core.exceptions import AmbientMismatchError, RepeatedEigenvalueError, VerificationError, ZeroVectorError
from apps.exalg.services import linalg
from apps.exalg.services.multivector import MultiVector

from .lagrangian import F1, F2, N, PLUCKER, PLUS_DIM, WEDGE2_TUPLES, fiber_dim, fiber_split

logger = logging.getLogger(__name__)

V_SYMBOLS = sympy.symbols('v1:5')
Y_SYMBOLS = sympy.symbols('Y1:7')


@dataclass(frozen=True)
class EigenPoint:
    """
    The point f₁ + λf₂ of P(V⁻) attached to an eigenvalue λ of u.

    point is exact (MultiVector) for rational λ; residual is ‖ux − λx‖ for
    numerically computed eigenpairs and 0 otherwise.
    """

    eigenvalue: object
    eigenvector: object
    point: Optional[MultiVector]
    exact: bool
    residual: float = 0.0
    fiber: Optional[int] = None
    split: Optional[tuple] = None

    def to_dict(self):
        return {
            'eigenvalue': str(self.eigenvalue),
            'point': str(self.point) if self.point is not None else f"f1 + ({self.eigenvalue})*f2",
            'exact': self.exact,
            'residual': self.residual,
            'fiber_dim': self.fiber,
            'fiber_split': list(self.split) if self.split is not None else None,
        }


def _require_distinct(u):
    if not u.has_distinct_eigenvalues():
        raise RepeatedEigenvalueError(
            f"u has a repeated eigenvalue: charpoly {sympy.factor(u.charpoly().as_expr())}"
        )


def eigen_point(eigenvalue):
    """f₁ + λf₂ as a vector of V."""
    return MultiVector.from_terms(N, 1, {(F1,): 1, (F2,): Fraction(eigenvalue)})


def eigen_fixed_points(u, lag=None):
    """
    The six points f₁ + λf₂, λ running over the eigenvalues of u.

    When lag is given and the spectrum is rational, each point carries its
    exact fiber dimension and the (plus, minus) split of the fiber.

    Raises:
        RepeatedEigenvalueError: u has a repeated eigenvalue
    """
    _require_distinct(u)
    eigenvalues = u.rational_eigenvalues()
    points = []
    if eigenvalues is not None:
        for lam in eigenvalues:
            shifted = [[c - (lam if i == j else 0) for j, c in enumerate(row)] for i, row in enumerate(u.rows)]
            (x,) = linalg.nullspace(shifted, len(WEDGE2_TUPLES))
            point = eigen_point(lam)
            fiber = fiber_dim(point, lag) if lag is not None else None
            split = fiber_split(point, lag) if lag is not None else None
            points.append(EigenPoint(lam, MultiVector.from_coordinates(PLUS_DIM, 2, x), point, True, 0.0,
                                     fiber, split))
    else:
        matrix = u.to_numpy()
        values, vectors = np.linalg.eig(matrix)
        for k in np.argsort(values.real + 1e-3 * values.imag):
            x = vectors[:, k]
            residual = float(np.linalg.norm(matrix @ x - values[k] * x))
            points.append(EigenPoint(complex(values[k]), x, None, False, residual))
        logger.warning("spectrum of u is not rational; eigen points are numeric")
    logger.info("eigen fixed points: %d", len(points))
    return points


@dataclass(frozen=True)
class QuadricData:
    """Matrix of B(v, v) on V⁺; the quadric is smooth iff det ≠ 0."""

    matrix: tuple
    determinant: Fraction

    @property
    def smooth(self):
        return self.determinant != 0

    def to_numpy(self):
        return np.array([[float(c) for c in row] for row in self.matrix])

    def value(self, v):
        return sum((self.matrix[i][j] * v[i] * v[j] for i in range(PLUS_DIM) for j in range(PLUS_DIM)),
                   Fraction(0))

    def to_sympy(self):
        b = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in self.matrix])
        v = sympy.Matrix(V_SYMBOLS)
        return sympy.expand((v.T * b * v)[0, 0])


def quadric_of_phi(phi):
    """Q(φ) = {v∧φ(v) = 0}, its matrix read off wedge products of basis vectors."""
    basis = [MultiVector.basis(PLUS_DIM, i) for i in range(1, PLUS_DIM + 1)]
    matrix = tuple(tuple(phi.bilinear(a, b) for b in basis) for a in basis)
    data = QuadricData(matrix, linalg.determinant([list(r) for r in matrix]))
    if not data.smooth:
        logger.warning("quadric of phi is singular")
    return data


def _plus_vector(v):
    if v.degree != 1:
        raise AmbientMismatchError(f"expected a vector, got degree {v.degree}")
    if v.is_zero():
        raise ZeroVectorError("the zero vector is not a point of P(V+)")
    if v.n > PLUS_DIM:
        if any(idx[0] > PLUS_DIM for idx, _ in v.items):
            raise VerificationError(f"{v} is not in V+")
        v = v.restrict(PLUS_DIM)
    return v


def _wedge_span(v):
    """Rows of v ∧ e_i, i = 1..4, in ∧²V⁺ coordinates."""
    return [
        MultiVector.from_terms(PLUS_DIM, 2, {(a, i): c for (a,), c in v.items}).coordinates()
        for i in range(1, PLUS_DIM + 1)
    ]


def kummer_membership(v, u):
    """
    dim (v∧V⁺) ∩ u⁻¹(v∧V⁺) inside ∧²V⁺.

    W = v∧V⁺ is Q-isotropic of dimension 3, so W = W^⊥ and u(x) ∈ W iff
    Q(u(x), w) = 0 for all w ∈ W. The answer is 3 − rank of the conic
    matrix [Q(u(wᵢ), wⱼ)].
    """
    v = _plus_vector(v)
    span = linalg.rref(_wedge_span(v))[0]
    w = linalg.transpose(span)
    conic = linalg.matmul(linalg.transpose(linalg.matmul(u.rows, w)), linalg.matmul(PLUCKER.gram, w))
    return len(span) - linalg.rank(conic)


def _symbolic_wedge(v, i):
    """Coordinates of v ∧ e_i in ∧²V⁺ for symbolic v."""
    return sympy.Matrix([
        (v[a - 1] if b == i else 0) - (v[b - 1] if a == i else 0) for a, b in WEDGE2_TUPLES
    ])


def conic_matrix(u, indices=(2, 3, 4), v=V_SYMBOLS):
    """Symbolic [Q(u(v∧eᵢ), v∧eⱼ)] for i, j in indices."""
    w = sympy.Matrix.hstack(*[_symbolic_wedge(v, i) for i in indices])
    g = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in PLUCKER.gram])
    return (u.to_sympy() * w).T * g * w


def kummer_quartic(u):
    """
    Equation of the Kummer surface S in P(V⁺).

    det of the conic matrix on v∧e₂, v∧e₃, v∧e₄ has degree 6 and vanishes
    doubly along v₁ = 0, where those three vectors become dependent; the
    quotient by v₁² is the quartic.
    """
    det = sympy.expand(conic_matrix(u).det())
    quotient, remainder = sympy.div(det, V_SYMBOLS[0] ** 2, *V_SYMBOLS)
    if remainder != 0:
        raise VerificationError("conic determinant is not divisible by v1^2")
    quartic = sympy.Poly(quotient, *V_SYMBOLS)
    if quartic.is_zero:
        raise VerificationError("conic determinant vanishes identically")
    logger.debug("Kummer quartic has %d terms, total degree %d", len(quartic.terms()), quartic.total_degree())
    return quartic


def quartic_degree_check(quartic, seed=0):
    """
    Number of points in which a random rational line meets S.

    Returns:
        (degree of the restricted polynomial, number of numeric roots)
    """
    rng = np.random.default_rng(seed)
    p = [sympy.Integer(int(c)) for c in rng.integers(-9, 10, size=PLUS_DIM)]
    q = [sympy.Integer(int(c)) for c in rng.integers(-9, 10, size=PLUS_DIM)]
    t = sympy.Symbol('t')
    restricted = sympy.Poly(quartic.as_expr().subs(dict(zip(V_SYMBOLS, [a + t * b for a, b in zip(p, q)]))), t)
    coeffs = [complex(c) for c in restricted.all_coeffs()]
    roots = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
    return restricted.degree(), len(roots)


@dataclass(frozen=True)
class LineComplexNormalForm:
    """
    Simultaneous diagonalization of Q (quadric G) and Q(·, u·) (quadric F).

    In the coordinates y of the eigenbasis (columns of change_of_basis),
    G = Σ dₖyₖ², F = Σ λₖdₖyₖ², H = Σ λₖ²dₖyₖ² with dₖ = Q(xₖ, xₖ).
    """

    eigenvalues: tuple
    change_of_basis: tuple
    weights: tuple
    exact: bool
    checks: dict = field(default_factory=dict)

    def quadric(self, power):
        return sum(lam ** power * d * y ** 2 for lam, d, y in zip(self.symbolic(self.eigenvalues),
                                                                   self.symbolic(self.weights), Y_SYMBOLS))

    @staticmethod
    def symbolic(values):
        return [sympy.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else sympy.sympify(v)
                for v in values]

    @property
    def G(self):
        return self.quadric(0)

    @property
    def F(self):
        return self.quadric(1)

    @property
    def H(self):
        return self.quadric(2)


def line_complex_normal_form(u):
    """
    Eigenbasis, Plücker weights and the three diagonal quadrics of u.

    The exact checks are GU·G⁻¹·GU = GU² (the third quadric is Q'Q⁻¹Q') and
    PᵀGP, PᵀGUP, PᵀGU²P diagonal with entries dₖ, λₖdₖ, λₖ²dₖ.

    Raises:
        RepeatedEigenvalueError: u has a repeated eigenvalue
    """
    _require_distinct(u)
    g = PLUCKER.gram
    eigenvalues = u.rational_eigenvalues()
    if eigenvalues is None:
        return _numeric_normal_form(u)
    columns = []
    for lam in eigenvalues:
        shifted = [[c - (lam if i == j else 0) for j, c in enumerate(row)] for i, row in enumerate(u.rows)]
        (x,) = linalg.nullspace(shifted, len(WEDGE2_TUPLES))
        columns.append(x)
    p = linalg.transpose(columns)
    weights = [PLUCKER.quadratic(MultiVector.from_coordinates(PLUS_DIM, 2, x)) for x in columns]
    gu = linalg.matmul(g, u.rows)
    gu2 = linalg.matmul(gu, u.rows)
    pt = linalg.transpose(p)

    def congruent(m):
        return linalg.matmul(linalg.matmul(pt, m), p)

    checks = {
        'H_is_QprimeQinvQprime': linalg.matmul(linalg.matmul(gu, linalg.inverse(g)), gu) == gu2,
        'G_diagonal': congruent(g) == linalg.diagonal(weights),
        'F_diagonal': congruent(gu) == linalg.diagonal([lam * d for lam, d in zip(eigenvalues, weights)]),
        'H_diagonal': congruent(gu2) == linalg.diagonal([lam ** 2 * d for lam, d in zip(eigenvalues, weights)]),
        'weights_nonzero': all(d != 0 for d in weights),
    }
    if not all(checks.values()):
        logger.warning("line complex normal form checks failed: %s", checks)
    return LineComplexNormalForm(
        tuple(eigenvalues), tuple(tuple(r) for r in p), tuple(weights), True, checks,
    )


def _numeric_normal_form(u, tol=1e-9):
    g = PLUCKER.numeric_gram()
    matrix = u.to_numpy()
    values, vectors = np.linalg.eig(matrix)
    order = np.argsort(values.real + 1e-3 * values.imag)
    values, vectors = values[order], vectors[:, order]
    weights = np.array([vectors[:, k] @ g @ vectors[:, k] for k in range(len(values))])
    scale = np.linalg.norm(g, 2)

    def congruent(m):
        return vectors.T @ m @ vectors

    checks = {
        'H_is_QprimeQinvQprime': bool(np.allclose(g @ matrix @ np.linalg.inv(g) @ g @ matrix,
                                                  g @ matrix @ matrix, atol=tol * scale)),
        'G_diagonal': bool(np.allclose(congruent(g), np.diag(weights), atol=tol * scale)),
        'F_diagonal': bool(np.allclose(congruent(g @ matrix), np.diag(values * weights), atol=tol * scale)),
        'H_diagonal': bool(np.allclose(congruent(g @ matrix @ matrix), np.diag(values ** 2 * weights),
                                       atol=tol * scale)),
        'weights_nonzero': bool(np.all(np.abs(weights) > tol)),
    }
    return LineComplexNormalForm(
        tuple(complex(v) for v in values), tuple(tuple(complex(c) for c in row) for row in vectors),
        tuple(complex(w) for w in weights), False, checks,
    )


def _as_complex(values):
    return np.array([complex(v) for v in values])


def sample_base_locus(normal_form, count=5, seed=0):
    """
    Points of G ∩ F ∩ H ⊂ P(∧²V⁺).

    y₄, y₅, y₆ are drawn at random and y₁², y₂², y₃² solve the Vandermonde
    system Σ λₖᵖdₖyₖ² = 0 for p = 0, 1, 2.

    Returns:
        (points in original ∧²V⁺ coordinates, max normalized residual of the
        three quadrics Q(x,x), Q(x,ux), Q(ux,ux))
    """
    rng = np.random.default_rng(seed)
    lam = _as_complex(normal_form.eigenvalues)
    d = _as_complex(normal_form.weights)
    p = np.array([[complex(c) for c in row] for row in normal_form.change_of_basis])
    system = np.array([[lam[k] ** power * d[k] for k in range(3)] for power in range(3)])
    points = []
    for _ in range(count):
        tail = rng.normal(size=3) + 1j * rng.normal(size=3)
        rhs = -np.array([sum(lam[k] ** power * d[k] * tail[k - 3] ** 2 for k in range(3, 6)) for power in range(3)])
        squares = np.linalg.solve(system, rhs)
        y = np.concatenate([np.sqrt(squares.astype(complex)), tail])
        points.append(p @ y)
    g = PLUCKER.numeric_gram()
    diag = np.diag(lam)
    pinv = np.linalg.inv(p)
    u_numeric = p @ diag @ pinv
    residual = 0.0
    for x in points:
        ux = u_numeric @ x
        norm = np.vdot(x, x).real
        for value in (x @ g @ x, x @ g @ ux, ux @ g @ ux):
            residual = max(residual, abs(value) / norm / max(1.0, np.max(np.abs(lam)) ** 2))
    return points, float(residual)


def on_quadric_via_fiber(v, lag):
    """True iff the plus part of the fiber at v ∈ V⁺ is nonzero."""
    return fiber_split(v, lag)[0] > 0
