import json
from io import StringIO

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.core.management.commands import verify as verify_command
from apps.core.models import VerificationRun
from apps.core.services.report import Certificate
from apps.core.services.runner import ReportBuilder


def verify(*args):
    out = StringIO()
    call_command('verify', *args, stdout=out)
    return out.getvalue()


@pytest.mark.parametrize('subcommand', ['classify', 'hilbert', 'fano'])
def test_subcommand_passes(subcommand):
    output = verify(subcommand)
    assert f'{subcommand}: all certificates passed' in output
    assert 'sha256:' in output


def test_report_file_is_reproducible(tmp_path):
    first, second = tmp_path / 'a.json', tmp_path / 'b.json'
    verify('fano', '--seed', '3', '--output', str(first))
    verify('fano', '--seed', '3', '--output', str(second))
    assert first.read_bytes() == second.read_bytes()


def test_seed_flag_reaches_the_report(tmp_path):
    for seed in (1, 2):
        verify('fano', '--seed', str(seed), '--output', str(tmp_path / f'{seed}.json'))
    reports = [json.loads((tmp_path / f'{seed}.json').read_text(encoding='utf-8')) for seed in (1, 2)]
    assert [(r['seed'], r['config']['seed']) for r in reports] == [(1, 1), (2, 2)]


@pytest.fixture
def captured_configs(monkeypatch):
    """Replace the suite runner with one that records its config and certifies nothing."""
    configs = []

    def fake_run(config):
        configs.append(config)
        return ReportBuilder(config)

    monkeypatch.setattr(verify_command, 'run', fake_run)
    return configs


@pytest.mark.parametrize('args, seed', [((), 42), (('--seed', '7'), 7)])
def test_seed_reaches_the_node_search(captured_configs, args, seed):
    verify('epw', *args)
    (config,) = captured_configs
    assert config.seed == seed
    assert config.node_search.seed == seed


def test_flags_override_the_instance(captured_configs):
    verify('epw', '--starts', '12', '--residual-tol', '1e-9')
    (config,) = captured_configs
    assert (config.node_search.starts, config.node_search.residual) == (12, 1e-9)


@pytest.mark.parametrize('value', ['0', '-3'])
def test_starts_must_be_positive(captured_configs, value):
    with pytest.raises(CommandError, match='--starts'):
        verify('epw', f'--starts={value}')
    assert captured_configs == []


def test_failed_certificate_is_named(monkeypatch):
    def failing_run(config):
        builder = ReportBuilder(config)
        builder.add_certificates('toy', [Certificate('ok', True), Certificate('bad', False, 'nope')])
        return builder

    monkeypatch.setattr(verify_command, 'run', failing_run)
    with pytest.raises(CommandError, match="certificate 'bad' failed: nope"):
        verify('hilbert')


def test_summary_lists_the_cases():
    output = verify('classify')
    for tau in ('-3', '3', '5'):
        assert tau in output


@pytest.mark.django_db
def test_record_stores_the_run():
    verify('hilbert', '--record')
    recorded = VerificationRun.objects.get()
    assert recorded.subcommand == 'hilbert'
    assert recorded.status == 'pass'
    assert recorded.verify_integrity()


def test_invalid_instance(failing_instance):
    with pytest.raises(CommandError, match='Invalid instance file'):
        verify('epw', '--instance', str(failing_instance))


def test_missing_instance(tmp_path):
    with pytest.raises(CommandError, match='does not exist'):
        verify('epw', '--instance', str(tmp_path / 'nowhere.toml'))


def test_unknown_subcommand():
    with pytest.raises(CommandError):
        verify('plot')


@pytest.mark.slow
def test_reference_epw_run(tmp_path):
    output = verify('epw', '--output', str(tmp_path / 'epw.json'))
    assert 'epw: all certificates passed' in output
