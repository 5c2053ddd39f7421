"""
Run a verification suite and write its report.

Usage:
    python manage.py verify classify
    python manage.py verify epw --instance apps/epw/fixtures/reference.toml --seed 42
    python manage.py verify all --output reports/all.json --record

Exit status is 0 iff every certificate of the run passed; otherwise the
first failed certificate is named in the error.
"""

import os
import sys
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import CertificateFailure, InstanceConfigError, VerificationError
from apps.core.services.records import record_run
from apps.core.services.runner import SUBCOMMANDS, RunConfig, run
from apps.epw.services.instances import DEFAULT_FIXTURES_DIR, REFERENCE_FILE, load_instance
from apps.epw.services.node_search import NodeSearchConfig


def positive_float(value):
    number = float(value)
    if number <= 0:
        raise ValueError(value)
    return number


def positive_int(value):
    number = int(value)
    if number <= 0:
        raise ValueError(value)
    return number


class Command(BaseCommand):
    help = 'Run a verification suite (classify, epw, hilbert, fano or all) and write its report'

    def add_arguments(self, parser):
        parser.add_argument('subcommand', choices=SUBCOMMANDS, help='Suite to run')
        parser.add_argument('--instance', type=str, default=None,
                            help='EPW instance file (TOML); defaults to the reference fixture')
        parser.add_argument('--seed', type=int, default=None,
                            help='Root seed; defaults to the seed of the instance, else 0')
        parser.add_argument('--residual-tol', type=positive_float, default=None,
                            help='Newton residual for accepted nodes')
        parser.add_argument('--dedupe-tol', type=positive_float, default=None,
                            help='Projective distance below which two nodes coincide')
        parser.add_argument('--starts', type=positive_int, default=None, help='Number of Newton starts')
        parser.add_argument('--jobs', type=int, default=None, help='Worker processes for the node search')
        parser.add_argument('--output', type=str, default=None, help='Write the report document here')
        parser.add_argument('--record', action='store_true', help='Store the run in the database')

    def _instance_path(self, options):
        if options['instance']:
            return Path(options['instance'])
        return Path(getattr(settings, 'EPW_FIXTURES_DIR', DEFAULT_FIXTURES_DIR)) / REFERENCE_FILE

    def _node_search(self, instance, seed, options):
        overrides = dict(instance.node_search)
        tolerances = instance.tolerances
        for key, source in (('residual', 'residual'), ('dedupe', 'dedupe'), ('rank_tol', 'rank')):
            if source in tolerances:
                overrides[key] = tolerances[source]
        flags = {
            'residual': options['residual_tol'],
            'dedupe': options['dedupe_tol'],
            'starts': options['starts'],
            'n_jobs': options['jobs'],
        }
        overrides.update({k: v for k, v in flags.items() if v is not None})
        overrides['seed'] = seed
        return NodeSearchConfig.from_settings(overrides)

    def handle(self, *args, **options):
        subcommand = options['subcommand']
        verbosity = options['verbosity']

        instance, instance_path, node_search = None, '', None
        if subcommand in ('epw', 'all'):
            path = self._instance_path(options)
            try:
                instance = load_instance(path)
            except InstanceConfigError as exc:
                raise CommandError(f'Invalid instance file {path}: {exc.errors}') from exc
            instance_path = path.name
        seed = options['seed'] if options['seed'] is not None else (instance.seed if instance else 0)
        if instance is not None:
            try:
                node_search = self._node_search(instance, seed, options)
            except VerificationError as exc:
                raise CommandError(f'{type(exc).__name__}: {exc}') from exc

        config = RunConfig(subcommand, seed, instance, node_search, instance_path)
        if verbosity >= 2:
            self.stdout.write(f'Running {subcommand} with seed {seed}')

        try:
            builder = run(config)
        except VerificationError as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}') from exc

        text, digest = builder.render()
        if options['output']:
            output = Path(options['output'])
            output.parent.mkdir(parents=True, exist_ok=True)
            output.write_text(text, encoding='utf-8')
            if verbosity >= 1:
                self.stdout.write(f'Report written to {output}')

        if verbosity >= 1:
            self.stdout.write(builder.summary())
            self.stdout.write(f'sha256: {digest}')

        if options['record']:
            recorded = record_run(builder, text, digest)
            self.stdout.write(self.style.SUCCESS(f'Recorded run #{recorded.pk}'))

        try:
            builder.raise_for_failure()
        except CertificateFailure as exc:
            raise CommandError(str(exc)) from exc
        self.stdout.write(self.style.SUCCESS(f'{subcommand}: all certificates passed'))


def main():
    """Console entry point: ``hkinv-verify <subcommand> [flags]``."""
    backend = Path(__file__).resolve().parents[4]
    if str(backend) not in sys.path:
        sys.path.insert(0, str(backend))
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    from django.core.management import execute_from_command_line

    execute_from_command_line([sys.argv[0], 'verify', *sys.argv[1:]])
