"""
Truncated characteristic-class ring on a fixed surface.

Classes live in degrees 0 and 4 only: fixed surfaces have c₁ = 0, so no
degree-2 part ever appears, and any product of two degree-4 classes vanishes
on a surface. The two degree-4 symbols are c2Y = c₂(Y) and a = c₂(X)·[Y].
"""

from dataclasses import dataclass
from fractions import Fraction

import sympy

from apps.core.exceptions import VerificationError

C2Y, A = sympy.symbols('c2Y a')


@dataclass(frozen=True)
class GradedClass:
    """constant + c2Y·[c₂(Y)] + a·[c₂(X)·Y] with exact rational coefficients."""

    constant: Fraction = Fraction(0)
    c2Y: Fraction = Fraction(0)
    a: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ('constant', 'c2Y', 'a'):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def coerce(cls, value):
        return value if isinstance(value, GradedClass) else cls(constant=value)

    def __add__(self, other):
        other = GradedClass.coerce(other)
        return GradedClass(self.constant + other.constant, self.c2Y + other.c2Y, self.a + other.a)

    __radd__ = __add__

    def __neg__(self):
        return GradedClass(-self.constant, -self.c2Y, -self.a)

    def __sub__(self, other):
        return self + (-GradedClass.coerce(other))

    def __rsub__(self, other):
        return GradedClass.coerce(other) - self

    def __mul__(self, other):
        other = GradedClass.coerce(other)
        return GradedClass(
            self.constant * other.constant,
            self.constant * other.c2Y + self.c2Y * other.constant,
            self.constant * other.a + self.a * other.constant,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * invert_unit(GradedClass.coerce(other))

    def degree4(self):
        return GradedClass(0, self.c2Y, self.a)

    def to_sympy(self):
        return sympy.Rational(self.constant) + sympy.Rational(self.c2Y) * C2Y + sympy.Rational(self.a) * A

    def __str__(self):
        return str(self.to_sympy())


def invert_unit(x):
    """
    Inverse of a class with nonzero constant term.

    (c + t)⁻¹ = 1/c − t/c² since t² = 0.
    """
    if x.constant == 0:
        raise VerificationError(f"{x} is not a unit: its degree-0 part vanishes")
    inv = 1 / x.constant
    return GradedClass(inv, -x.c2Y * inv * inv, -x.a * inv * inv)


def todd_surface():
    """Todd class of a surface with c₁ = 0: 1 + c₂/12."""
    c1_squared = GradedClass()
    return GradedClass(1) + (c1_squared + GradedClass(c2Y=1)) * Fraction(1, 12)


def ch_rank2_c1zero(c2):
    """Chern character of a rank-2 bundle with c₁ = 0: 2 − c₂."""
    return GradedClass(2) - GradedClass.coerce(c2).degree4()


def c2_tangent():
    return GradedClass(c2Y=1)


def c2_normal_dual():
    """c₂(N*_Y) = c₂(X)·[Y] − c₂(Y)."""
    return GradedClass(a=1) - GradedClass(c2Y=1)
