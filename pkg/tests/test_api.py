import pytest
from django.urls import reverse
from rest_framework.test import APIClient

from apps.core.models import VerificationRun


@pytest.fixture
def api_client():
    return APIClient()


def test_health(api_client):
    response = api_client.get('/health/')
    assert response.status_code == 200
    assert response.json()['status'] == 'ok'


def test_classification(api_client):
    response = api_client.get(reverse('api-classification'))
    assert response.status_code == 200
    assert response.json()['cases'] == [
        {'tau': -3, 'N': 12, 'K': 0, 'sum_a': '36'},
        {'tau': 3, 'N': 36, 'K': 0, 'sum_a': '12'},
        {'tau': 5, 'N': 28, 'K': 1, 'sum_a': '36'},
    ]


@pytest.mark.django_db
class TestRuns:
    def test_list(self, api_client, recorded_run):
        body = api_client.get(reverse('api-runs')).json()
        assert body['total_count'] == 1
        assert body['runs'][0]['failed_certificates'] == 0

    def test_filters(self, api_client, recorded_run):
        assert api_client.get(reverse('api-runs'), {'subcommand': 'epw'}).json()['total_count'] == 0
        assert api_client.get(reverse('api-runs'), {'status': 'pass'}).json()['total_count'] == 1

    def test_detail(self, api_client, recorded_run):
        body = api_client.get(reverse('api-run-detail', args=[recorded_run.pk])).json()
        assert body['report']['subcommand'] == 'hilbert'
        assert [c['name'] for c in body['certificates']] == ['pair_count']

    def test_missing_run(self, api_client):
        assert api_client.get(reverse('api-run-detail', args=[999])).status_code == 404
        assert api_client.get(reverse('api-run-verify', args=[999])).status_code == 404

    def test_verify(self, api_client, recorded_run):
        body = api_client.get(reverse('api-run-verify', args=[recorded_run.pk])).json()
        assert body == {'run_id': recorded_run.pk, 'digest': recorded_run.digest, 'intact': True}

        VerificationRun.objects.filter(pk=recorded_run.pk).update(report_text='{}\n')
        assert api_client.get(reverse('api-run-verify', args=[recorded_run.pk])).json()['intact'] is False
