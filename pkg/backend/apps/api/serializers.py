"""
API Serializers for recorded verification runs.
"""

import json

from rest_framework import serializers

from apps.core.models import CertificateRecord, VerificationRun


class CertificateRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = CertificateRecord
        fields = ['section', 'name', 'passed', 'source', 'hypothesis', 'detail']


class VerificationRunListSerializer(serializers.ModelSerializer):
    """Run list without the report body."""

    failed_certificates = serializers.SerializerMethodField()

    class Meta:
        model = VerificationRun
        fields = ['id', 'subcommand', 'seed', 'status', 'digest', 'isolated_points', 'k3_surfaces',
                  'failed_certificates', 'created_at']

    def get_failed_certificates(self, obj):
        return obj.certificates.filter(passed=False).count()


class VerificationRunDetailSerializer(serializers.ModelSerializer):
    certificates = CertificateRecordSerializer(many=True, read_only=True)
    report = serializers.SerializerMethodField()

    class Meta:
        model = VerificationRun
        fields = ['id', 'subcommand', 'seed', 'config', 'status', 'digest', 'isolated_points', 'k3_surfaces',
                  'created_at', 'certificates', 'report']

    def get_report(self, obj):
        return json.loads(obj.report_text)


class ClassificationRowSerializer(serializers.Serializer):
    """One admissible case of the Lefschetz classification."""

    tau = serializers.IntegerField()
    N = serializers.IntegerField()
    K = serializers.IntegerField()
    sum_a = serializers.CharField()
