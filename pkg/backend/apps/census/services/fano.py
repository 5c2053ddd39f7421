"""
Involutions of P⁵ acting on the Fano variety of lines of a cubic fourfold.

An involution of P⁵ with k coordinates negated preserves cubics of a fixed
normal form. It acts on the generator
Ω = Σ(−1)ⁱ Xᵢ dX₀∧…∧dX̂ᵢ∧…∧dX₅ / P² of H^{3,1}, and the induced involution
of the Fano variety is symplectic exactly when Ω is preserved. For the
symplectic signature the fixed locus is 28 isolated lines (the line
X₂=…=X₅=0 and the 27 lines on the cubic surface G = X₀ = X₁ = 0) plus a K3
surface of bidegree (2,1) in P¹ × V(G).

The 27 lines are enumerated exactly on the Fermat cubic over Q(ζ), ζ a
primitive cube root of unity.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np
import sympy

from apps.core.exceptions import DegreeError, SignatureError
from apps.core.services.report import (
    KIND_ISOLATED_POINT,
    KIND_K3,
    CensusReport,
    Certificate,
    ProvenanceItem,
)

logger = logging.getLogger(__name__)

X = sympy.symbols('X0:6')
Y = sympy.symbols('Y1:5')
A1, A2 = sympy.symbols('a1 a2')

SIGNATURES = (1, 2, 3)
NONSINGULAR_FLOOR = 1e-6


@dataclass(frozen=True)
class Eisenstein:
    """a + bζ in Q(ζ) with ζ² = −1 − ζ."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'b', Fraction(self.b))

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, Eisenstein) else cls(value)

    @classmethod
    def zeta_power(cls, k):
        return [cls(1), cls(0, 1), cls(-1, -1)][k % 3]

    def __add__(self, other):
        other = Eisenstein.coerce(other)
        return Eisenstein(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-Eisenstein.coerce(other))

    def __mul__(self, other):
        other = Eisenstein.coerce(other)
        return Eisenstein(
            self.a * other.a - self.b * other.b,
            self.a * other.b + self.b * other.a - self.b * other.b,
        )

    __rmul__ = __mul__

    def __pow__(self, exponent):
        result = Eisenstein(1)
        for _ in range(exponent):
            result = result * self
        return result

    def conjugate(self):
        # ζ̄ = ζ² = −1 − ζ
        return Eisenstein(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in Q(zeta)")
        c = self.conjugate()
        return Eisenstein(c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * Eisenstein.coerce(other).inverse()

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def to_complex(self):
        zeta = complex(-0.5, 3 ** 0.5 / 2)
        return float(self.a) + float(self.b) * zeta


@dataclass(frozen=True)
class Line:
    """
    Line in P³ spanned by two points with coordinates in Q(ζ).

    pairing and exponents record the Fermat label: the line is
    Y_i = −ζ^a Y_j, Y_k = −ζ^b Y_l for pairing ((i, j), (k, l)).
    """

    p: tuple
    r: tuple
    pairing: tuple
    exponents: tuple

    def plucker(self):
        """Plücker coordinates normalized so the first nonzero entry is 1."""
        n = len(self.p)
        coords = [self.p[i] * self.r[j] - self.p[j] * self.r[i] for i in range(n) for j in range(i + 1, n)]
        lead = next(c for c in coords if not c.is_zero())
        return tuple(c / lead for c in coords)


def fermat_value_sums(line):
    """
    Coefficients of G(sP + tR) for G = ΣYᵢ³, as the four binomial sums
    (ΣP³, 3ΣP²R, 3ΣPR², ΣR³).
    """
    p, r = line.p, line.r
    return (
        sum((x ** 3 for x in p), Eisenstein()),
        sum((x * x * y for x, y in zip(p, r)), Eisenstein()) * 3,
        sum((x * y * y for x, y in zip(p, r)), Eisenstein()) * 3,
        sum((y ** 3 for y in r), Eisenstein()),
    )


def lies_on_fermat(line):
    return all(s.is_zero() for s in fermat_value_sums(line))


PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def fermat_27_lines():
    """
    The 27 lines on Y₁³ + Y₂³ + Y₃³ + Y₄³ = 0.

    For each of the three ways to pair the coordinates and each
    (a, b) ∈ {0,1,2}², the line {Y_i = −ζᵃY_j, Y_k = −ζᵇY_l} is spanned by
    the points P (Y_j = 1, Y_i = −ζᵃ) and R (Y_l = 1, Y_k = −ζᵇ).
    """
    lines = []
    for pairing in PAIRINGS:
        (i, j), (k, l) = pairing
        for a in range(3):
            for b in range(3):
                p = [Eisenstein()] * 4
                r = [Eisenstein()] * 4
                p[j], p[i] = Eisenstein(1), -Eisenstein.zeta_power(a)
                r[l], r[k] = Eisenstein(1), -Eisenstein.zeta_power(b)
                lines.append(Line(tuple(p), tuple(r), pairing, (a, b)))
    logger.debug("enumerated %d Fermat lines", len(lines))
    return lines


def involution_signs(k):
    if k not in SIGNATURES:
        raise SignatureError(f"signature must be one of {SIGNATURES}, got {k}")
    return tuple(-1 if i < k else 1 for i in range(6))


def embed_line(line):
    """The line in the plane X₀ = X₁ = 0 of P⁵, with Y₁…Y₄ = X₂…X₅."""
    pad = (Eisenstein(), Eisenstein())
    return replace(line, p=pad + line.p, r=pad + line.r)


def act_on_line(line, signs):
    return replace(
        line,
        p=tuple(s * c for s, c in zip(signs, line.p)),
        r=tuple(s * c for s, c in zip(signs, line.r)),
    )


def involution_action_on_lines(lines, k):
    """
    How diag(signs of k) acts on lines of V(G) ⊂ {X₀ = X₁ = 0}.

    Returns:
        (whether the set of lines is preserved, number of lines fixed individually)
    """
    signs = involution_signs(k)
    embedded = [embed_line(line) for line in lines]
    before = [line.plucker() for line in embedded]
    after = [act_on_line(line, signs).plucker() for line in embedded]
    fixed = sum(b == a for b, a in zip(before, after))
    return set(before) == set(after), fixed


def residue_sign(k):
    """
    Action of diag(−1,…,−1,1,…,1) (k minus signs) on the residue generator Ω.

    Each numerator term Xᵢ dX₀∧…dX̂ᵢ…∧dX₅ picks up sᵢ·Π_{j≠i} sⱼ; P² is
    invariant. All six terms must agree.

    Returns:
        'symplectic' when Ω is preserved, 'antisymplectic' otherwise
    """
    signs = involution_signs(k)
    substitution = {X[i]: signs[i] * X[i] for i in range(6)}
    term_signs = set()
    for i in range(6):
        coefficient = sympy.Integer(1)
        for j in range(6):
            if j != i:
                coefficient *= signs[j]
        transformed = (X[i] * coefficient).subs(substitution, simultaneous=True)
        term_signs.add(sympy.simplify(transformed / X[i]))
    if len(term_signs) != 1:
        raise SignatureError(f"numerator terms of Omega transform inconsistently: {term_signs}")
    sign = term_signs.pop()
    return 'symplectic' if sign == 1 else 'antisymplectic'


def _linear_form(name, variables):
    coeffs = sympy.symbols(f'{name}_0:{len(variables)}')
    return sum(c * v for c, v in zip(coeffs, variables))


def _generic_cubic(name, variables):
    monomials = [sympy.Mul(*m) for m in combinations_with_replacement(variables, 3)]
    coeffs = sympy.symbols(f'{name}_0:{len(monomials)}')
    return sum(c * m for c, m in zip(coeffs, monomials))


def invariant_cubic_normal_form(k):
    """
    Generic σ-invariant cubic for signature k.

    Σ_{i≤j<k} XᵢXⱼ L_{ij}(X_k,…,X₅) + G(X_k,…,X₅); for k = 1 this is
    X₀²L + G, for k = 2 it is X₀²L₀ + X₁²L₁ + X₀X₁L₂ + G.
    """
    involution_signs(k)
    negated, fixed = X[:k], X[k:]
    quadratic = list(combinations_with_replacement(negated, 2))
    cubic = _generic_cubic('g', fixed)
    for n, (u, v) in enumerate(quadratic):
        cubic += u * v * _linear_form(f'l{n}', fixed)
    return sympy.expand(cubic)


def schematic_normal_form(k):
    """Normal form with the linear forms and the cubic kept as symbols L0, L1, …, G."""
    negated = X[:k]
    quadratic = list(combinations_with_replacement(negated, 2))
    return sum((u * v * sympy.Symbol(f'L{n}') for n, (u, v) in enumerate(quadratic)), sympy.Symbol('G'))


def fano_involution_table():
    """One row per signature: normal form, invariance check, induced action."""
    rows = []
    for k in SIGNATURES:
        signs = involution_signs(k)
        form = invariant_cubic_normal_form(k)
        moved = form.subs({X[i]: signs[i] * X[i] for i in range(6)}, simultaneous=True)
        rows.append({
            'k': k,
            'normal_form': str(schematic_normal_form(k)),
            'invariant': sympy.expand(moved - form) == 0,
            'action': residue_sign(k),
            'fixed_locus': f'P^{k - 1} and P^{5 - k} meeting X',
        })
    return rows


def invariant_moduli_count(k=2):
    """
    dim of invariant cubics minus dim of the centralizer GL(k) × GL(6−k).

    For k = 2 this is 32 − 20 = 12, one less than dim H^{1,1}(F)^i = 13
    (the Plücker polarization is invariant and not deformed).
    """
    signs = involution_signs(k)
    invariant = 0
    for monomial in combinations_with_replacement(range(6), 3):
        sign = 1
        for idx in monomial:
            sign *= signs[idx]
        invariant += sign == 1
    return invariant - (k * k + (6 - k) ** 2)


@dataclass(frozen=True)
class CubicData:
    """A cubic form in X₀…X₅ invariant under the involution of signature k."""

    form: object
    signature: int

    def __post_init__(self):
        signs = involution_signs(self.signature)
        poly = sympy.Poly(self.form, *X)
        if not poly.is_homogeneous or poly.total_degree() != 3:
            raise DegreeError(f"expected a cubic form in X0..X5, got {self.form}")
        moved = self.form.subs({X[i]: signs[i] * X[i] for i in range(6)}, simultaneous=True)
        if sympy.expand(moved - self.form) != 0:
            raise SignatureError(f"cubic is not invariant under the signature {self.signature} involution")

    def scale(self):
        return max(abs(float(c)) for c in sympy.Poly(self.form, *X).coeffs())


def fano_cubic(forms=None, g=None):
    """X₀²L₀ + X₁²L₁ + X₀X₁L₂ + G with L, G in Y₁…Y₄ = X₂…X₅."""
    l0, l1, l2 = forms or (Y[0], Y[1], Y[2])
    g = sum(v ** 3 for v in Y) if g is None else g
    to_x = {Y[i]: X[i + 2] for i in range(4)}
    form = X[0] ** 2 * l0 + X[1] ** 2 * l1 + X[0] * X[1] * l2 + g
    return CubicData(sympy.expand(form.subs(to_x, simultaneous=True)), 2)


def cubic_gradient_floor(cubic, lines=20, seed=0):
    """
    Smallest normalized gradient ‖∇F(x)‖ / (‖x‖²·scale) over sampled points of V(F).

    Each random line of P⁵ meets V(F) in three points, found from the cubic
    F(P + tR) interpolated at four values of t. A nonsingular cubic keeps the
    result away from zero.
    """
    rng = np.random.default_rng(seed)
    value = sympy.lambdify(X, cubic.form, 'numpy')
    gradient = sympy.lambdify(X, [sympy.diff(cubic.form, x) for x in X], 'numpy')
    ts = np.array([0.0, 1.0, -1.0, 2.0])
    floor = np.inf
    for _ in range(lines):
        p = rng.normal(size=6) + 1j * rng.normal(size=6)
        r = rng.normal(size=6) + 1j * rng.normal(size=6)
        samples = np.array([complex(value(*(p + t * r))) for t in ts])
        coefficients = np.linalg.solve(np.vander(ts, 4).astype(complex), samples)
        for t in np.roots(coefficients):
            x = p + t * r
            x = x / np.linalg.norm(x)
            grad = np.array([complex(c) for c in gradient(*x)])
            floor = min(floor, float(np.linalg.norm(grad)))
    return floor / cubic.scale()


@dataclass(frozen=True)
class FixedK3Equation:
    """a₁²L₀ + a₂²L₁ + a₁a₂L₂ on P¹ × V(G), of bidegree (2, 1)."""

    expr: object
    forms: tuple
    cubic: object
    bidegree: tuple

    def discriminant(self):
        l0, l1, l2 = self.forms
        return sympy.expand(l2 ** 2 - 4 * l0 * l1)


def fano_fixed_k3_equation(l0, l1, l2, g=None):
    """Equation of the fixed K3 cut out on P¹ × V(G)."""
    g = sum(v ** 3 for v in Y) if g is None else g
    expr = sympy.expand(A1 ** 2 * l0 + A2 ** 2 * l1 + A1 * A2 * l2)
    poly = sympy.Poly(expr, A1, A2, *Y)
    a_degrees = {m[0] + m[1] for m in poly.monoms()}
    y_degrees = {sum(m[2:]) for m in poly.monoms()}
    bidegree = (a_degrees.pop() if len(a_degrees) == 1 else None, y_degrees.pop() if len(y_degrees) == 1 else None)
    return FixedK3Equation(expr=expr, forms=(l0, l1, l2), cubic=g, bidegree=bidegree)


def fiber_degeneracy(equation, point, tol=1e-9):
    """
    Classify the fiber of P¹ × V(G) → V(G) over a point.

    'whole_fiber' when L₀ = L₁ = L₂ = 0 (the whole P¹ lies in the divisor),
    'ramified' when the binary quadratic in (a₁, a₂) has a double root,
    'nondegenerate' otherwise.
    """
    values = dict(zip(Y, point))
    l_values = [complex(sympy.N(form.subs(values))) for form in equation.forms]
    scale = max(1.0, max(abs(complex(v)) for v in point))
    if all(abs(v) <= tol * scale for v in l_values):
        return 'whole_fiber'
    disc = l_values[2] ** 2 - 4 * l_values[0] * l_values[1]
    if abs(disc) <= tol * scale ** 2:
        return 'ramified'
    return 'nondegenerate'


def sample_fermat_points(count, seed):
    """Random complex points of the Fermat cubic surface."""
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(count):
        y2, y3, y4 = rng.normal(size=3) + 1j * rng.normal(size=3)
        y1 = (-(y2 ** 3 + y3 ** 3 + y4 ** 3)) ** (1 / 3)
        points.append((complex(y1), complex(y2), complex(y3), complex(y4)))
    return points


def fano_census(forms=None, samples=20, seed=0):
    """Census of the symplectic involution (signature 2) on the Fano variety."""
    source = 'census.fano_census'
    lines = fermat_27_lines()
    distinct = len({line.plucker() for line in lines})
    on_surface = sum(lies_on_fermat(line) for line in lines)
    preserved, fixed = involution_action_on_lines(lines, 2)
    forms = forms or (Y[0], Y[1], Y[2])
    equation = fano_fixed_k3_equation(*forms)
    cubic = fano_cubic(forms)
    gradient_floor = cubic_gradient_floor(cubic, samples, seed)
    verdicts = [fiber_degeneracy(equation, p) for p in sample_fermat_points(samples, seed)]
    nondegenerate = sum(v == 'nondegenerate' for v in verdicts)
    action = residue_sign(2)
    certificates = (
        Certificate('signature_2_symplectic', action == 'symplectic', f'residue sign: {action}', 'census.residue_sign'),
        Certificate('fermat_line_count', len(lines) == 27 and distinct == 27,
                    f'{len(lines)} lines, {distinct} distinct', 'census.fermat_27_lines'),
        Certificate('fermat_lines_on_surface', on_surface == len(lines),
                    f'{on_surface}/{len(lines)} substitute to zero', 'census.fermat_27_lines'),
        Certificate('fermat_lines_fixed_by_involution', preserved and fixed == len(lines),
                    f'set preserved: {preserved}, {fixed}/{len(lines)} fixed individually',
                    'census.involution_action_on_lines', 'the 27 lines are fixed points of the induced involution'),
        Certificate('cubic_nonsingular_samples', gradient_floor > NONSINGULAR_FLOOR,
                    f'min normalized gradient {gradient_floor:.2e} over {3 * samples} sampled points',
                    'census.cubic_gradient_floor', 'the invariant cubic fourfold is smooth'),
        Certificate('k3_bidegree', equation.bidegree == (2, 1), f'bidegree {equation.bidegree}',
                    'census.fano_fixed_k3_equation'),
        Certificate('k3_sample_fibers', nondegenerate == samples,
                    f'{nondegenerate}/{samples} sampled fibers nondegenerate', 'census.fano_fixed_k3_equation'),
    )
    logger.info("Fano census: %d lines, %d/%d nondegenerate fibers", len(lines), nondegenerate, samples)
    return CensusReport(
        label='fano',
        isolated_points=len(lines) + 1,
        k3_surfaces=1,
        abelian_surfaces=0,
        items=(
            ProvenanceItem(KIND_ISOLATED_POINT, 1, source, 'the line X2 = ... = X5 = 0'),
            ProvenanceItem(KIND_ISOLATED_POINT, len(lines), 'census.fermat_27_lines',
                           'lines on the cubic surface G = X0 = X1 = 0'),
            ProvenanceItem(KIND_K3, 1, 'census.fano_fixed_k3_equation',
                           'bidegree (2,1) divisor in P^1 x V(G)'),
        ),
        certificates=certificates,
        details={
            'cubic': str(cubic.form),
            'k3_equation': str(equation.expr),
            'invariant_moduli': invariant_moduli_count(2),
        },
    )
