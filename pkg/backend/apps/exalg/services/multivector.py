"""
Exact exterior algebra over the rationals.

A MultiVector is a homogeneous element of ∧ᵏV for V of dimension n, stored
sparsely as a map from strictly increasing index tuples (1-based) to Fraction
coefficients. The basis of ∧ᵏV is ordered lexicographically, which is the
coordinate order used by every echelon form in this package.

The isomorphism ∧⁶V ≅ Q is fixed by e₁₂₃₄₅₆ ↦ 1.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

from apps.core.exceptions import AmbientMismatchError, DegreeError

logger = logging.getLogger(__name__)

DEFAULT_DIMENSION = 6


@lru_cache(maxsize=None)
def basis_tuples(n, k):
    """Index tuples of the standard basis of ∧ᵏV, lexicographically ordered."""
    return tuple(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def basis_position(n, k):
    return {idx: pos for pos, idx in enumerate(basis_tuples(n, k))}


def merge_sign(left, right):
    """
    Sign of e_left ∧ e_right relative to the sorted tuple.

    Returns (0, None) when the tuples share an index.
    """
    if set(left) & set(right):
        return 0, None
    inversions = sum(1 for a in left for b in right if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(left + right))


@dataclass(frozen=True)
class MultiVector:
    """
    Homogeneous element of ∧ᵏV with exact rational coefficients.

    Terms are kept sorted by index tuple and never hold explicit zeros, so
    two equal multivectors compare and hash equal.
    """

    n: int
    degree: int
    items: tuple = ()

    def __post_init__(self):
        if not 0 <= self.degree <= self.n:
            raise DegreeError(f"degree {self.degree} outside 0..{self.n}")
        for idx, coeff in self.items:
            if len(idx) != self.degree:
                raise DegreeError(f"tuple {idx} inconsistent with degree {self.degree}")
            if any(a >= b for a, b in zip(idx, idx[1:])) or (idx and not 1 <= idx[0] <= idx[-1] <= self.n):
                raise DegreeError(f"tuple {idx} is not strictly increasing within 1..{self.n}")
            if coeff == 0:
                raise ValueError("explicit zero coefficients are not stored")

    @classmethod
    def from_terms(cls, n, degree, terms):
        """
        Build from a mapping of index tuples to coefficients.

        Tuples need not be sorted; each is sorted with the corresponding
        permutation sign, and tuples with a repeated index are dropped.
        """
        acc = {}
        for idx, coeff in dict(terms).items():
            idx = tuple(idx)
            if len(set(idx)) != len(idx):
                continue
            sign, ordered = _sort_with_sign(idx)
            acc[ordered] = acc.get(ordered, Fraction(0)) + sign * Fraction(coeff)
        items = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        return cls(n, degree, items)

    @classmethod
    def zero(cls, n, degree):
        return cls(n, degree, ())

    @classmethod
    def scalar(cls, value, n=DEFAULT_DIMENSION):
        return cls.from_terms(n, 0, {(): value})

    @classmethod
    def basis(cls, n, *indices):
        """e_{i₁…i_k}; indices may come in any order."""
        return cls.from_terms(n, len(indices), {tuple(indices): 1})

    @classmethod
    def vector(cls, coords):
        """Degree-one multivector from a coordinate list of length n."""
        return cls.from_coordinates(len(coords), 1, coords)

    @classmethod
    def from_coordinates(cls, n, degree, coords):
        tuples = basis_tuples(n, degree)
        if len(coords) != len(tuples):
            raise AmbientMismatchError(f"expected {len(tuples)} coordinates, got {len(coords)}")
        return cls(n, degree, tuple((idx, Fraction(c)) for idx, c in zip(tuples, coords) if c != 0))

    @property
    def terms(self):
        return dict(self.items)

    def coefficient(self, idx):
        return self.terms.get(tuple(idx), Fraction(0))

    def coordinates(self):
        """Dense coefficients in lexicographic basis order."""
        coords = [Fraction(0)] * comb(self.n, self.degree)
        position = basis_position(self.n, self.degree)
        for idx, coeff in self.items:
            coords[position[idx]] = coeff
        return coords

    def is_zero(self):
        return not self.items

    def __bool__(self):
        return bool(self.items)

    def _check_compatible(self, other):
        if not isinstance(other, MultiVector):
            return NotImplemented
        if (self.n, self.degree) != (other.n, other.degree):
            raise AmbientMismatchError(
                f"cannot combine ∧^{self.degree} (n={self.n}) with ∧^{other.degree} (n={other.n})"
            )
        return True

    def __add__(self, other):
        if self._check_compatible(other) is NotImplemented:
            return NotImplemented
        acc = dict(self.items)
        for idx, coeff in other.items:
            acc[idx] = acc.get(idx, Fraction(0)) + coeff
        return MultiVector(self.n, self.degree, tuple(sorted((k, v) for k, v in acc.items() if v != 0)))

    def __neg__(self):
        return MultiVector(self.n, self.degree, tuple((k, -v) for k, v in self.items))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return MultiVector.zero(self.n, self.degree)
        return MultiVector(self.n, self.degree, tuple((k, v * scalar) for k, v in self.items))

    __rmul__ = __mul__

    def embed(self, n):
        """The same multivector viewed in a larger ambient dimension."""
        if n < self.n:
            raise AmbientMismatchError(f"cannot embed n={self.n} into n={n}")
        return MultiVector(n, self.degree, self.items)

    def restrict(self, n):
        """Inverse of embed; every index must already be at most n."""
        if any(idx and idx[-1] > n for idx, _ in self.items):
            raise AmbientMismatchError(f"multivector has indices beyond {n}")
        return MultiVector(n, self.degree, self.items)

    def to_json(self):
        return {
            "deg": self.degree,
            "terms": [
                {"idx": list(idx), "num": str(c.numerator), "den": str(c.denominator)}
                for idx, c in self.items
            ],
        }

    @classmethod
    def from_json(cls, data, n=DEFAULT_DIMENSION):
        degree = int(data["deg"])
        terms = {}
        for term in data.get("terms", []):
            idx = tuple(int(i) for i in term["idx"])
            terms[idx] = terms.get(idx, 0) + Fraction(int(term["num"]), int(term.get("den", 1)))
        return cls.from_terms(n, degree, terms)

    def __str__(self):
        if not self.items:
            return "0"
        parts = []
        for idx, coeff in self.items:
            label = "e" + "".join(str(i) for i in idx) if idx else "1"
            parts.append(f"{coeff}*{label}" if coeff != 1 else label)
        return " + ".join(parts)


def _sort_with_sign(idx):
    """Sort an index tuple with distinct entries, tracking permutation parity."""
    inversions = sum(1 for i in range(len(idx)) for j in range(i + 1, len(idx)) if idx[i] > idx[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


def wedge(a, b):
    """
    Exterior product a ∧ b.

    Raises:
        AmbientMismatchError: operands from different ambient dimensions
        DegreeError: deg a + deg b > n
    """
    if a.n != b.n:
        raise AmbientMismatchError(f"ambient dimensions differ: {a.n} vs {b.n}")
    degree = a.degree + b.degree
    if degree > a.n:
        raise DegreeError(f"degree overflow: {a.degree} + {b.degree} > {a.n}")
    acc = {}
    for left, x in a.items:
        for right, y in b.items:
            sign, idx = merge_sign(left, right)
            if sign:
                acc[idx] = acc.get(idx, Fraction(0)) + sign * x * y
    return MultiVector(a.n, degree, tuple(sorted((k, v) for k, v in acc.items() if v != 0)))


def wedge_all(vectors):
    vectors = list(vectors)
    result = vectors[0]
    for v in vectors[1:]:
        result = wedge(result, v)
    return result


def top_coefficient(a):
    """Coefficient of e₁…e_n in a top-degree multivector."""
    if a.degree != a.n:
        raise DegreeError(f"expected top degree {a.n}, got {a.degree}")
    return a.coefficient(tuple(range(1, a.n + 1)))


def symplectic_form(a, b):
    """
    ω(a, b) = coefficient of e₁₂₃₄₅₆ in a ∧ b, for a, b in ∧³V with n = 6.
    """
    if a.n != 6 or b.n != 6:
        raise DegreeError(f"symplectic form needs n=6, got n={a.n}, n={b.n}")
    if a.degree != 3 or b.degree != 3:
        raise DegreeError(f"symplectic form needs degree 3, got {a.degree}, {b.degree}")
    return top_coefficient(wedge(a, b))


def interior(psi, alpha):
    """
    Contraction of alpha by the dual basis form e^{psi}.

    The single-index rule is ι_{eⁱ} e_{a₁…a_k} = Σ_m (−1)^m δ_{i,a_m} e_{a without a_m}
    (m counted from 0); for a tuple psi the indices are contracted left to right.
    """
    result = alpha
    for i in psi:
        if result.degree == 0:
            return MultiVector.zero(alpha.n, 0)
        acc = {}
        for idx, coeff in result.items:
            if i in idx:
                m = idx.index(i)
                rest = idx[:m] + idx[m + 1:]
                acc[rest] = acc.get(rest, Fraction(0)) + (-1) ** m * coeff
        result = MultiVector(alpha.n, result.degree - 1, tuple(sorted((k, v) for k, v in acc.items() if v != 0)))
    return result


def gram_matrix(form, basis):
    """Matrix [form(x, y)] over a list of basis elements."""
    return [[form(x, y) for y in basis] for x in basis]
