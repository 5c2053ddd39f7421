import pytest

from apps.core.models import CertificateRecord, VerificationRun


@pytest.mark.django_db
class TestVerificationRun:
    def test_integrity(self, recorded_run):
        assert recorded_run.verify_integrity()
        recorded_run.report_text = recorded_run.report_text.replace('hilbert', 'fano')
        assert not recorded_run.verify_integrity()

    def test_str(self, recorded_run):
        assert str(recorded_run).startswith('hilbert (seed 0): pass - ')

    def test_certificates_follow_the_run(self, recorded_run):
        names = list(recorded_run.certificates.values_list('name', flat=True))
        assert names == ['pair_count']
        VerificationRun.objects.filter(pk=recorded_run.pk).delete()
        assert CertificateRecord.objects.count() == 0

    def test_ordering_newest_first(self, recorded_run):
        later = VerificationRun.objects.create(
            subcommand='classify', status='pass', report_text='{}\n', digest='0' * 64,
        )
        assert VerificationRun.objects.first() == later
