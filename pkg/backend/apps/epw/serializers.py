"""
Validation of EPW instance files.

Instance files are TOML documents; after parsing they are validated here the
same way request payloads are, so a malformed file reports every bad field
at once.
"""

from fractions import Fraction

from rest_framework import serializers

EIGENBASIS_CHOICES = ['hyperbolic']


class RationalField(serializers.Field):
    """An integer or a string 'p/q', stored as Fraction."""

    default_error_messages = {
        'invalid': 'Expected an integer or a rational string "p/q", got {value!r}.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (int, str)):
            self.fail('invalid', value=data)
        try:
            return Fraction(data)
        except (ValueError, ZeroDivisionError):
            self.fail('invalid', value=data)

    def to_representation(self, value):
        return str(value)


def square_matrix_field(size, **kwargs):
    return serializers.ListField(
        child=serializers.ListField(child=RationalField(), min_length=size, max_length=size),
        min_length=size,
        max_length=size,
        **kwargs,
    )


class OperatorSerializer(serializers.Serializer):
    """u on ∧²V⁺: spectral data or an explicit 6x6 matrix."""

    eigenvalues = serializers.ListField(child=RationalField(), min_length=6, max_length=6, required=False)
    eigenbasis = serializers.ChoiceField(choices=EIGENBASIS_CHOICES, default='hyperbolic')
    matrix = square_matrix_field(6, required=False)

    def validate(self, attrs):
        if ('eigenvalues' in attrs) == ('matrix' in attrs):
            raise serializers.ValidationError('Give exactly one of "eigenvalues" and "matrix".')
        return attrs


class PhiSerializer(serializers.Serializer):
    B = square_matrix_field(4)


def strictly_positive(value):
    if value <= 0:
        raise serializers.ValidationError('Must be strictly positive.')


class TolerancesSerializer(serializers.Serializer):
    residual = serializers.FloatField(validators=[strictly_positive], default=1e-10)
    dedupe = serializers.FloatField(validators=[strictly_positive], default=1e-6)
    rank = serializers.FloatField(validators=[strictly_positive], default=1e-8)
    plucker = serializers.FloatField(validators=[strictly_positive], default=1e-8)


class NodeSearchSerializer(serializers.Serializer):
    starts = serializers.IntegerField(min_value=1, required=False)
    max_iterations = serializers.IntegerField(min_value=1, required=False)
    expected_nodes = serializers.IntegerField(min_value=0, required=False)
    n_jobs = serializers.IntegerField(required=False)


class DecomposableSearchSerializer(serializers.Serializer):
    budget = serializers.IntegerField(min_value=0, default=0)


class InstanceConfigSerializer(serializers.Serializer):
    """Top-level instance document."""

    name = serializers.CharField(max_length=100, default='instance')
    seed = serializers.IntegerField(min_value=0, default=0)
    u = OperatorSerializer()
    phi = PhiSerializer()
    tolerances = TolerancesSerializer(required=False)
    node_search = NodeSearchSerializer(required=False)
    decomposable_search = DecomposableSearchSerializer(required=False)
