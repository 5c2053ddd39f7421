"""
Persistence of verification runs.
"""

import logging

from django.db import transaction

from apps.core.models import CertificateRecord, VerificationRun

logger = logging.getLogger(__name__)


def _headline_counts(censuses):
    report = censuses.get('epw') or next(iter(censuses.values()), None)
    if report is None:
        return None, None
    return report.isolated_points, report.k3_surfaces


@transaction.atomic
def record_run(builder, text, digest):
    """Store a rendered run and one CertificateRecord per certificate."""
    n, k = _headline_counts(builder.censuses)
    run = VerificationRun.objects.create(
        subcommand=builder.config.subcommand,
        seed=builder.config.seed,
        config=builder.config.to_dict(),
        status='pass' if builder.passed else 'fail',
        report_text=text,
        digest=digest,
        isolated_points=n,
        k3_surfaces=k,
    )
    CertificateRecord.objects.bulk_create([
        CertificateRecord(
            run=run,
            section=section,
            name=cert.name,
            passed=cert.passed,
            source=cert.source,
            hypothesis=cert.hypothesis,
            detail=cert.detail,
        )
        for section, cert in builder.certificates
    ])
    logger.info("recorded run %s with %d certificates", run.pk, len(builder.certificates))
    return run
