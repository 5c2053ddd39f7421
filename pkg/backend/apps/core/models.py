"""
Recorded verification runs.

A run stores the rendered report text verbatim together with its SHA-256
digest, so a stored run can be re-verified byte for byte. Each certificate
of the run gets its own row for filtering in the admin and the API.
"""

from django.db import models
from django.utils import timezone

from apps.core.services.report import digest_of


class VerificationRun(models.Model):
    """
    One execution of ``manage.py verify``.

    Business Rules:
    - report_text is the exact rendered document; digest is its SHA-256
    - status is 'pass' iff every certificate of the run passed
    - config holds the flags and instance data that determine the report
    """

    SUBCOMMAND_CHOICES = [
        ('classify', 'Lefschetz classification'),
        ('epw', 'EPW fixed-locus census'),
        ('hilbert', 'Hilbert square census'),
        ('fano', 'Fano variety census'),
        ('all', 'Full suite with cross-validation'),
    ]

    STATUS_CHOICES = [
        ('pass', 'All certificates passed'),
        ('fail', 'At least one certificate failed'),
    ]

    subcommand = models.CharField(
        max_length=20,
        choices=SUBCOMMAND_CHOICES,
        help_text="Subcommand that produced the report"
    )

    seed = models.BigIntegerField(
        default=0,
        help_text="Root seed of every randomized step"
    )

    config = models.JSONField(
        default=dict,
        help_text="Run configuration (flags and instance data)"
    )

    status = models.CharField(
        max_length=10,
        choices=STATUS_CHOICES,
        db_index=True,
    )

    report_text = models.TextField(
        help_text="Rendered report document, stored verbatim"
    )

    digest = models.CharField(
        max_length=64,
        db_index=True,
        help_text="SHA-256 of report_text"
    )

    isolated_points = models.IntegerField(
        null=True,
        blank=True,
        help_text="N of the EPW census when present, else of the first census in the run"
    )

    k3_surfaces = models.IntegerField(null=True, blank=True)

    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        db_table = 'verification_runs'
        ordering = ['-created_at', '-id']
        indexes = [
            models.Index(fields=['subcommand', '-created_at'], name='verification_subcmd_idx'),
        ]

    def __str__(self):
        return f"{self.subcommand} (seed {self.seed}): {self.status} - {self.digest[:16]}..."

    def verify_integrity(self):
        """Recompute the digest of the stored report text."""
        return digest_of(self.report_text) == self.digest


class CertificateRecord(models.Model):
    """A single certificate of a recorded run."""

    run = models.ForeignKey(
        VerificationRun,
        on_delete=models.CASCADE,
        related_name='certificates',
    )

    section = models.CharField(max_length=100)
    name = models.CharField(max_length=100, db_index=True)
    passed = models.BooleanField()
    source = models.CharField(max_length=100, blank=True, default='')
    hypothesis = models.CharField(max_length=200, blank=True, default='')
    detail = models.TextField(blank=True, default='')

    class Meta:
        db_table = 'certificate_records'
        ordering = ['run', 'id']

    def __str__(self):
        return f"[{self.section}] {self.name}: {'pass' if self.passed else 'FAIL'}"
