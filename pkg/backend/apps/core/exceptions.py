"""
Exception hierarchy for the involution census toolkit.

Every error raised by a service derives from VerificationError so that the
``verify`` command can turn it into a CommandError with a readable message.
Failed certificates are normally carried as data inside reports; the
exceptions below are for rejected inputs and broken preconditions.
"""


class VerificationError(ValueError):
    """Base class for all toolkit errors."""


class DegreeError(VerificationError):
    """A multivector has the wrong degree for the requested operation."""


class AmbientMismatchError(VerificationError):
    """Operands live in different exterior powers or ambient dimensions."""


class ZeroVectorError(VerificationError):
    """A zero vector was given where a projective point is required."""


class SingularMapError(VerificationError):
    """A map that must be invertible is singular."""


class GraphHypothesisError(VerificationError):
    """
    One of the hypotheses of the graph lemma failed.

    Attributes:
        hypothesis: 'equal_dimensions', 'contained_in_sum', 'direct_sum',
            'meets_first_summand' or 'meets_second_summand'
    """

    def __init__(self, hypothesis, message):
        super().__init__(f"{hypothesis}: {message}")
        self.hypothesis = hypothesis


class SelfAdjointnessError(VerificationError):
    """An operator on the Plücker space is not self-adjoint."""

    def __init__(self, pair, message=None):
        super().__init__(message or f"Q(u(x), y) != Q(x, u(y)) for basis pair {pair}")
        self.pair = pair


class SymmetryError(VerificationError):
    """The bilinear form attached to phi is not symmetric."""

    def __init__(self, pair, message=None):
        super().__init__(message or f"v ∧ phi(w) != w ∧ phi(v) for basis pair {pair}")
        self.pair = pair


class RepeatedEigenvalueError(VerificationError):
    """An operator required to have distinct eigenvalues does not."""


class ParityError(VerificationError):
    """A trace and a dimension have different parity."""


class SignatureError(VerificationError):
    """An involution signature outside the supported range."""


class UnsupportedSheafError(VerificationError):
    """A local term was requested for a sheaf or surface type not modelled."""


class OracleDisagreementError(VerificationError):
    """Two independent criteria disagreed on the same input."""


class SearchConfigError(VerificationError):
    """Node search parameters outside their valid range."""

    def __init__(self, field, value):
        super().__init__(f"node search {field} must be positive, got {value!r}")
        self.field = field
        self.value = value


class InstanceConfigError(VerificationError):
    """An instance file could not be parsed or validated."""

    def __init__(self, errors):
        super().__init__(f"invalid instance configuration: {errors}")
        self.errors = errors


class CertificateFailure(VerificationError):
    """Raised when a caller insists that a certificate must pass."""

    def __init__(self, certificate):
        super().__init__(f"certificate '{certificate.name}' failed: {certificate.detail}")
        self.certificate = certificate
