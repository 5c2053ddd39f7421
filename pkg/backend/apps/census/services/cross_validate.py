"""
Agreement between the independent censuses and the classification.
"""

import logging

from apps.core.services.report import Certificate

logger = logging.getLogger(__name__)


def matching_case(report, solutions):
    """The classification case with the same (N, K) as the report, if any."""
    return next((s for s in solutions if (s.N, s.K) == (report.isolated_points, report.k3_surfaces)), None)


def cross_validate(reports, solutions):
    """
    One certificate per report (its (N, K) is a classification case) plus one
    certificate for mutual agreement of all reports.

    Args:
        reports: CensusReport objects from the hilbert, fano and epw censuses
        solutions: ClassificationSolution list
    """
    source = 'census.cross_validate'
    certs = []
    for report in reports:
        case = matching_case(report, solutions)
        certs.append(Certificate(
            f'{report.label}_matches_classification', case is not None and report.abelian_surfaces == 0,
            f"(N, K) = ({report.isolated_points}, {report.k3_surfaces})"
            + (f" is the case tau={case.tau}" if case else " is not a classification case"),
            source, 'census agrees with the Lefschetz classification',
        ))
    pairs = {(r.isolated_points, r.k3_surfaces) for r in reports}
    certs.append(Certificate(
        'censuses_agree', len(pairs) == 1,
        ', '.join(f"{r.label}: ({r.isolated_points}, {r.k3_surfaces})" for r in reports),
        source, 'all constructions give the same fixed locus type',
    ))
    logger.info("cross-validation: %d/%d certificates pass", sum(c.passed for c in certs), len(certs))
    return certs
