"""
Linear subspaces of ∧ᵏV and linear maps between them.

A Subspace stores its basis in reduced row-echelon form with respect to the
lexicographic basis of ∧ᵏV, so equal subspaces have identical bases no matter
how they were generated. LinearMap carries a matrix with respect to the echelon
bases of its domain and codomain.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from apps.core.exceptions import AmbientMismatchError, GraphHypothesisError, SingularMapError

from . import linalg
from .multivector import MultiVector, basis_tuples

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subspace:
    """Echelonized subspace of ∧ᵏV (degree = k, n = dim V)."""

    n: int
    degree: int
    rows: tuple = ()
    pivots: tuple = ()

    @property
    def dim(self):
        return len(self.rows)

    @property
    def ambient_dim(self):
        return comb(self.n, self.degree)

    @property
    def basis(self):
        return [MultiVector.from_coordinates(self.n, self.degree, row) for row in self.rows]

    def coordinates_of(self, vector):
        """
        Coefficients of vector in the echelon basis.

        Returns None when vector is not in the subspace.
        """
        coords = _coords(vector, self)
        weights = [coords[p] for p in self.pivots]
        for j in range(len(coords)):
            combined = sum((w * row[j] for w, row in zip(weights, self.rows)), Fraction(0))
            if combined != coords[j]:
                return None
        return weights

    def __contains__(self, vector):
        return self.coordinates_of(vector) is not None

    def __str__(self):
        return f"span({', '.join(str(b) for b in self.basis)})" if self.rows else "{0}"


def _coords(vector, space):
    if (vector.n, vector.degree) != (space.n, space.degree):
        raise AmbientMismatchError(
            f"∧^{vector.degree} (n={vector.n}) vector against ∧^{space.degree} (n={space.n}) subspace"
        )
    return vector.coordinates()


def _from_rows(n, degree, rows):
    reduced, pivots = linalg.rref(rows, comb(n, degree))
    return Subspace(n, degree, tuple(tuple(r) for r in reduced), pivots)


def subspace_from(vectors, n=None, degree=None):
    """
    Span of a collection of multivectors.

    n and degree are required only when vectors is empty.
    """
    vectors = list(vectors)
    if vectors:
        n = vectors[0].n if n is None else n
        degree = vectors[0].degree if degree is None else degree
    if n is None or degree is None:
        raise AmbientMismatchError("the span of nothing needs an explicit ambient space")
    for v in vectors:
        if (v.n, v.degree) != (n, degree):
            raise AmbientMismatchError(f"mixed ambient spaces: ∧^{v.degree} (n={v.n}) vs ∧^{degree} (n={n})")
    return _from_rows(n, degree, [v.coordinates() for v in vectors])


def full_space(n, degree):
    return subspace_from([MultiVector.basis(n, *idx) for idx in basis_tuples(n, degree)], n, degree)


def dim(space):
    return space.dim


def contains(space, vector):
    return vector in space


def _check_same_ambient(a, b):
    if (a.n, a.degree) != (b.n, b.degree):
        raise AmbientMismatchError(f"∧^{a.degree} (n={a.n}) vs ∧^{b.degree} (n={b.n})")


def annihilating_functionals(space):
    """Rows y with y·x = 0 for every x in space (the orthogonal complement)."""
    return linalg.nullspace([list(r) for r in space.rows], space.ambient_dim)


def intersect(a, b):
    """a ∩ b, computed as the common kernel of both complements."""
    _check_same_ambient(a, b)
    functionals = annihilating_functionals(a) + annihilating_functionals(b)
    solutions = linalg.nullspace(functionals, a.ambient_dim) if functionals else [
        list(row) for row in full_space(a.n, a.degree).rows
    ]
    return _from_rows(a.n, a.degree, solutions)


def span_sum(a, b):
    _check_same_ambient(a, b)
    return _from_rows(a.n, a.degree, [list(r) for r in a.rows] + [list(r) for r in b.rows])


def is_subspace(a, b):
    """True when a ⊂ b."""
    _check_same_ambient(a, b)
    return all(v in b for v in a.basis)


@dataclass(frozen=True)
class LinearMap:
    """
    Linear map between subspaces.

    matrix has codomain.dim rows and domain.dim columns; column j holds the
    echelon coordinates of the image of the j-th domain basis vector.
    """

    domain: Subspace
    codomain: Subspace
    matrix: tuple

    def __post_init__(self):
        if len(self.matrix) != self.codomain.dim or any(len(r) != self.domain.dim for r in self.matrix):
            raise AmbientMismatchError(
                f"matrix shape does not match {self.codomain.dim}x{self.domain.dim}"
            )

    @classmethod
    def from_images(cls, domain, images, codomain=None):
        """Map sending the i-th echelon basis vector of domain to images[i]."""
        images = list(images)
        if len(images) != domain.dim:
            raise AmbientMismatchError(f"{len(images)} images for a {domain.dim}-dimensional domain")
        if codomain is None:
            if not images:
                raise AmbientMismatchError("codomain required for a map out of the zero space")
            codomain = full_space(images[0].n, images[0].degree)
        columns = []
        for img in images:
            coords = codomain.coordinates_of(img)
            if coords is None:
                raise AmbientMismatchError(f"image {img} is not in the codomain")
            columns.append(coords)
        matrix = tuple(tuple(col[i] for col in columns) for i in range(codomain.dim))
        return cls(domain, codomain, matrix)

    @classmethod
    def from_function(cls, domain, func, codomain=None):
        return cls.from_images(domain, [func(b) for b in domain.basis], codomain)

    def apply(self, vector):
        coords = self.domain.coordinates_of(vector)
        if coords is None:
            raise AmbientMismatchError(f"{vector} is not in the domain")
        out = linalg.matvec([list(r) for r in self.matrix], coords)
        result = MultiVector.zero(self.codomain.n, self.codomain.degree)
        for weight, b in zip(out, self.codomain.basis):
            if weight:
                result = result + b * weight
        return result

    __call__ = apply

    def compose(self, inner):
        """self ∘ inner."""
        if inner.codomain != self.domain:
            raise AmbientMismatchError("codomain of the inner map is not the domain of the outer map")
        product = linalg.matmul([list(r) for r in self.matrix], [list(r) for r in inner.matrix])
        return LinearMap(inner.domain, self.codomain, tuple(tuple(r) for r in product))

    def square_matrix(self):
        return [list(r) for r in self.matrix]


def kernel(linear_map):
    vectors = linalg.nullspace([list(r) for r in linear_map.matrix], linear_map.domain.dim)
    basis = linear_map.domain.basis
    images = []
    for weights in vectors:
        v = MultiVector.zero(linear_map.domain.n, linear_map.domain.degree)
        for w, b in zip(weights, basis):
            if w:
                v = v + b * w
        images.append(v)
    return subspace_from(images, linear_map.domain.n, linear_map.domain.degree)


def image(linear_map):
    return subspace_from(
        [linear_map.apply(b) for b in linear_map.domain.basis],
        linear_map.codomain.n,
        linear_map.codomain.degree,
    )


def graph_extract(w, e1, e2):
    """
    Recover f: E₁ → E₂ with W = {x + f(x) : x ∈ E₁}.

    Checks, in order, that dim W = dim E₁ = dim E₂, that E₁ + E₂ is direct,
    that W ⊂ E₁ ⊕ E₂ and that W meets neither summand. The failing hypothesis
    is carried by the raised GraphHypothesisError.

    Returns:
        LinearMap from e1 to e2, equal to p₂∘p₁⁻¹
    """
    _check_same_ambient(w, e1)
    _check_same_ambient(w, e2)
    if not w.dim == e1.dim == e2.dim:
        raise GraphHypothesisError(
            "equal_dimensions", f"dim W={w.dim}, dim E1={e1.dim}, dim E2={e2.dim}"
        )
    if intersect(e1, e2).dim:
        raise GraphHypothesisError("direct_sum", "E1 and E2 intersect nontrivially")
    total = span_sum(e1, e2)
    if not is_subspace(w, total):
        raise GraphHypothesisError("contained_in_sum", "W is not contained in E1 ⊕ E2")
    if intersect(w, e1).dim:
        raise GraphHypothesisError("meets_first_summand", "W ∩ E1 != 0")
    if intersect(w, e2).dim:
        raise GraphHypothesisError("meets_second_summand", "W ∩ E2 != 0")

    # columns: coordinates in the joint basis (E1 basis, then E2 basis)
    joint = [b.coordinates() for b in e1.basis] + [b.coordinates() for b in e2.basis]
    joint_t = linalg.transpose(joint)
    p1_cols, p2_cols = [], []
    for vector in w.basis:
        weights = linalg.solve(joint_t, vector.coordinates())
        p1_cols.append(weights[: e1.dim])
        p2_cols.append(weights[e1.dim:])
    p1 = linalg.transpose(p1_cols)
    p2 = linalg.transpose(p2_cols)
    try:
        f = linalg.matmul(p2, linalg.inverse(p1))
    except SingularMapError as exc:
        raise GraphHypothesisError("meets_second_summand", "projection to E1 is not invertible") from exc
    logger.debug("graph_extract: recovered %dx%d map", e2.dim, e1.dim)
    return LinearMap(e1, e2, tuple(tuple(r) for r in f))
