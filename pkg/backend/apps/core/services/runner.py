"""
Verification runs.

A run executes one subcommand (classify, epw, hilbert, fano or all) and
collects the results in a ReportBuilder. The builder renders the report
document with a fixed key order and produces the human summary.
"""

import logging
from dataclasses import dataclass, field

import pandas as pd

from apps.census.services.cross_validate import cross_validate
from apps.census.services.fano import fano_census, fano_involution_table
from apps.census.services.hilbert import HilbertCensusInput, hilbert_census, hilbert_invariant_dims
from apps.core.exceptions import CertificateFailure
from apps.epw.services.census import census_upstairs, fixed_locus_downstairs
from apps.epw.services.involution import ADMISSIBLE_DIM_PLUS, smoothness_obstruction
from apps.lefschetz.services.classification import (
    HodgeData,
    corollary_check,
    enumerate_traces,
    general_solution,
    trace_S2,
    trace_S2_bruteforce,
)
from apps.lefschetz.services.local_terms import SHEAVES, point_local_term, surface_local_term

from .report import REPORT_FORMAT_VERSION, Certificate, first_failure, render

logger = logging.getLogger(__name__)

TOOL_NAME = 'hkinv-verify'
SUBCOMMANDS = ('classify', 'epw', 'hilbert', 'fano', 'all')


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int = 0
    instance: object = None
    node_search: object = None
    instance_path: str = ''

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}; expected one of {SUBCOMMANDS}")

    def to_dict(self):
        return {
            'subcommand': self.subcommand,
            'seed': self.seed,
            'instance': self.instance_path,
            'node_search': self.node_search.to_dict() if self.node_search else None,
        }


@dataclass
class ReportBuilder:
    config: RunConfig
    classification: dict = None
    censuses: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add_certificates(self, section, certs):
        for cert in certs:
            self.certificates.append((section, cert))

    @property
    def passed(self):
        return all(cert.passed for _, cert in self.certificates)

    def first_failure(self):
        return first_failure(cert for _, cert in self.certificates)

    def raise_for_failure(self):
        failure = self.first_failure()
        if failure is not None:
            raise CertificateFailure(failure)

    def document(self):
        return {
            'tool': TOOL_NAME,
            'format_version': REPORT_FORMAT_VERSION,
            'subcommand': self.config.subcommand,
            'seed': self.config.seed,
            'config': self.config.to_dict(),
            'classification': self.classification,
            'censuses': {label: report.to_dict() for label, report in self.censuses.items()},
            'extra': self.extra,
            'certificates': [{'section': section, **cert.to_dict()} for section, cert in self.certificates],
            'status': 'pass' if self.passed else 'fail',
        }

    def render(self):
        """(json text, sha256 digest)."""
        return render(self.document())

    def summary(self):
        lines = [f"{TOOL_NAME} {self.config.subcommand} (seed {self.config.seed})"]
        if self.classification:
            lines.append(classification_frame(self.classification['cases']).to_string(index=False))
        if self.censuses:
            lines.append(census_frame(self.censuses.values()).to_string(index=False))
        failed = [f"  FAIL [{section}] {cert.name}: {cert.detail}"
                  for section, cert in self.certificates if not cert.passed]
        lines.append(f"certificates: {sum(c.passed for _, c in self.certificates)}/{len(self.certificates)} passed")
        lines.extend(failed)
        return '\n'.join(lines)


def classification_frame(cases):
    return pd.DataFrame(cases, columns=['tau', 'N', 'K', 'sum_a'])


def census_frame(reports):
    return pd.DataFrame(
        [{'census': r.label, 'N': r.isolated_points, 'K': r.k3_surfaces, 'abelian': r.abelian_surfaces,
          'passed': r.passed} for r in reports],
        columns=['census', 'N', 'K', 'abelian', 'passed'],
    )


def _local_term_section():
    points = {sheaf: str(point_local_term(sheaf)) for sheaf in SHEAVES}
    surfaces = {}
    for sheaf in SHEAVES:
        term = surface_local_term(sheaf)
        surfaces[sheaf] = {'constant': str(term.constant), 'c2Y': str(term.c2Y), 'a': str(term.a)}
    return {'point': points, 'surface': surfaces}


def run_classification(builder, hodge=None):
    hodge = hodge or HodgeData()
    solutions, exclusions = enumerate_traces(hodge)
    n_expr, k_expr, s_expr = general_solution(hodge)
    builder.classification = {
        'h11': hodge.h11,
        'general_solution': {'N': str(n_expr), 'K': str(k_expr), 'sum_a': str(s_expr)},
        'local_terms': _local_term_section(),
        'cases': [s.as_row() for s in solutions],
        'excluded': [
            {'tau': e.tau, 'N': str(e.N), 'K': str(e.K), 'reasons': list(e.reasons)}
            for e in exclusions if abs(e.tau) <= 9
        ],
    }
    source = 'lefschetz.trace_S2'
    taus = range(-hodge.h11, hodge.h11 + 1, 2)
    builder.add_certificates('classification', [
        Certificate('hodge_diamond_symmetric', hodge.is_symmetric(), f"h22 = {hodge.h22}", 'lefschetz.hodge_data'),
        Certificate('trace_S2_bruteforce', all(trace_S2(t, hodge.h11) == trace_S2_bruteforce(t, hodge.h11)
                                               for t in taus),
                    f"closed form = symmetric-square trace for all tau, h={hodge.h11}", source),
    ])
    for sol in solutions:
        builder.add_certificates(f'classification/tau={sol.tau}', corollary_check(sol))
    builder.extra['smoothness_obstruction'] = [smoothness_obstruction(d).to_dict() for d in ADMISSIBLE_DIM_PLUS]
    logger.info("classification: %d cases", len(solutions))
    return solutions


def run_hilbert(builder):
    inp = HilbertCensusInput()
    report = hilbert_census(inp)
    dims = hilbert_invariant_dims(inp)
    builder.censuses['hilbert'] = report
    builder.extra['hilbert_invariant_dims'] = {
        'dim_S': dims.dim_s, 'dim_X': dims.dim_x, 'tau_X': dims.tau_x, 'deformations': dims.deformation_dim,
    }
    builder.add_certificates('hilbert', report.certificates)
    return report


def run_fano(builder):
    report = fano_census(seed=builder.config.seed)
    builder.censuses['fano'] = report
    builder.extra['fano_involutions'] = fano_involution_table()
    builder.add_certificates('fano', report.certificates)
    return report


def run_epw(builder):
    instance = builder.config.instance
    if instance is None:
        raise ValueError("the epw run needs an instance")
    fl = fixed_locus_downstairs(instance, builder.config.node_search)
    report = census_upstairs(fl)
    builder.censuses['epw'] = report
    builder.extra['epw_instance'] = instance.to_dict()
    builder.add_certificates('epw', report.certificates)
    return report


def run(config):
    """
    Execute one verification run.

    Returns:
        ReportBuilder holding every result and certificate
    """
    builder = ReportBuilder(config)
    sub = config.subcommand
    solutions = None
    if sub in ('classify', 'all'):
        solutions = run_classification(builder)
    if sub in ('hilbert', 'all'):
        run_hilbert(builder)
    if sub in ('fano', 'all'):
        run_fano(builder)
    if sub in ('epw', 'all'):
        run_epw(builder)
    if sub == 'all':
        builder.add_certificates('cross_validation', cross_validate(list(builder.censuses.values()), solutions))
    logger.info("run %s finished: %s", sub, 'pass' if builder.passed else 'fail')
    return builder
