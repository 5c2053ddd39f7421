import json

import pytest

from apps.core.exceptions import CertificateFailure, GraphHypothesisError, InstanceConfigError, VerificationError
from apps.core.models import VerificationRun
from apps.core.services.records import record_run
from apps.core.services.report import (
    KIND_ISOLATED_POINT,
    KIND_K3,
    CensusReport,
    Certificate,
    ProvenanceItem,
    digest_of,
    first_failure,
    render,
)
from apps.core.services.runner import TOOL_NAME, ReportBuilder, RunConfig, run


def small_report(label='toy', n=2, k=1):
    return CensusReport(
        label, n, k, 0,
        items=(ProvenanceItem(KIND_ISOLATED_POINT, n, 'test'), ProvenanceItem(KIND_K3, k, 'test')),
        certificates=(Certificate('ok', True),),
    )


class TestReport:
    def test_provenance_must_cover_counts(self):
        with pytest.raises(ValueError):
            CensusReport('toy', 3, 0, 0, items=(ProvenanceItem(KIND_ISOLATED_POINT, 2, 'test'),))

    def test_negative_counts(self):
        with pytest.raises(ValueError):
            CensusReport('toy', -1, 0, 0)

    def test_counts_and_status(self):
        report = small_report()
        assert report.counts == (2, 1, 0)
        assert report.passed
        assert report.to_dict()['N'] == 2

    def test_first_failure(self):
        certs = [Certificate('a', True), Certificate('b', False, 'broken'), Certificate('c', False)]
        assert first_failure(certs).name == 'b'
        assert first_failure(certs[:1]) is None

    def test_render_is_deterministic(self):
        document = {'b': 1, 'a': ['x', 'ü']}
        text, digest = render(document)
        assert render(document) == (text, digest)
        assert digest == digest_of(text)
        assert text.endswith('\n')
        assert json.loads(text) == document


class TestExceptions:
    def test_hierarchy(self):
        for exc in (GraphHypothesisError('direct_sum', 'x'), InstanceConfigError({'u': ['bad']})):
            assert isinstance(exc, VerificationError)

    def test_certificate_failure_message(self):
        exc = CertificateFailure(Certificate('sixteen_nodes', False, 'found 15'))
        assert 'sixteen_nodes' in str(exc)
        assert exc.certificate.detail == 'found 15'


class TestRunner:
    def test_unknown_subcommand(self):
        with pytest.raises(ValueError):
            RunConfig('plot')

    def test_builder_collects_sections(self):
        builder = ReportBuilder(RunConfig('hilbert'))
        builder.censuses['toy'] = small_report()
        builder.add_certificates('toy', [Certificate('ok', True), Certificate('bad', False, 'nope')])
        document = builder.document()
        assert document['tool'] == TOOL_NAME
        assert document['status'] == 'fail'
        assert [c['section'] for c in document['certificates']] == ['toy', 'toy']
        assert builder.first_failure().name == 'bad'
        assert 'FAIL [toy] bad: nope' in builder.summary()

    def test_raise_for_failure_names_first_failed_certificate(self):
        builder = ReportBuilder(RunConfig('hilbert'))
        builder.add_certificates('toy', [Certificate('ok', True), Certificate('bad', False, 'nope'),
                                       Certificate('worse', False)])
        with pytest.raises(CertificateFailure) as excinfo:
            builder.raise_for_failure()
        assert excinfo.value.certificate.name == 'bad'
        assert str(excinfo.value) == "certificate 'bad' failed: nope"

    def test_raise_for_failure_is_silent_when_all_pass(self):
        builder = ReportBuilder(RunConfig('hilbert'))
        builder.add_certificates('toy', [Certificate('ok', True)])
        builder.raise_for_failure()

    def test_classify_run(self):
        builder = run(RunConfig('classify'))
        assert builder.passed
        assert [row['tau'] for row in builder.classification['cases']] == [-3, 3, 5]
        assert builder.classification['local_terms']['point']['Omega2'] == '3/8'

    def test_runs_are_reproducible(self):
        first = run(RunConfig('fano', seed=7)).render()
        second = run(RunConfig('fano', seed=7)).render()
        assert first == second

    def test_epw_needs_an_instance(self):
        with pytest.raises(ValueError):
            run(RunConfig('epw'))


@pytest.mark.django_db
class TestRecords:
    def test_record_run(self):
        builder = run(RunConfig('hilbert'))
        text, digest = builder.render()
        recorded = record_run(builder, text, digest)
        assert recorded.status == 'pass'
        assert (recorded.isolated_points, recorded.k3_surfaces) == (28, 1)
        assert recorded.certificates.count() == len(builder.certificates)
        assert recorded.verify_integrity()

    def test_tampering_is_detected(self):
        builder = run(RunConfig('hilbert'))
        recorded = record_run(builder, *builder.render())
        VerificationRun.objects.filter(pk=recorded.pk).update(report_text=recorded.report_text + ' ')
        recorded.refresh_from_db()
        assert not recorded.verify_integrity()
