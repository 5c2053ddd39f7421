"""
API Views for recorded verification runs.

Endpoints defined here:
- run_list: recorded runs, newest first
- run_detail: one run with its certificates and report document
- run_verify: recompute the digest of a stored report
- classification_table: the admissible cases, computed on request
"""

import logging

from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from apps.core.models import VerificationRun
from apps.lefschetz.services.classification import solve_classification

from .serializers import ClassificationRowSerializer, VerificationRunDetailSerializer, VerificationRunListSerializer

logger = logging.getLogger(__name__)


@api_view(['GET'])
def run_list(request):
    """
    Recorded verification runs.

    Inputs (query parameters):
        - subcommand: optional filter (classify, epw, hilbert, fano, all)
        - status: optional filter (pass, fail)

    Usage: GET /api/v1/runs/?subcommand=epw&status=pass
    """
    runs = VerificationRun.objects.all()
    subcommand = request.query_params.get('subcommand')
    status_filter = request.query_params.get('status')
    if subcommand:
        runs = runs.filter(subcommand=subcommand)
    if status_filter:
        runs = runs.filter(status=status_filter)
    serializer = VerificationRunListSerializer(runs, many=True)
    return Response({'runs': serializer.data, 'total_count': runs.count()})


@api_view(['GET'])
def run_detail(request, run_id):
    """
    One recorded run with its certificates and the parsed report.

    Usage: GET /api/v1/runs/3/
    """
    try:
        run = VerificationRun.objects.prefetch_related('certificates').get(pk=run_id)
    except VerificationRun.DoesNotExist:
        return Response({'error': f'run {run_id} not found'}, status=status.HTTP_404_NOT_FOUND)
    return Response(VerificationRunDetailSerializer(run).data)


@api_view(['GET'])
def run_verify(request, run_id):
    """
    Integrity check of a stored report.

    Recomputes SHA-256 of the stored report text and compares it with the
    digest recorded at run time.

    Usage: GET /api/v1/runs/3/verify/
    """
    try:
        run = VerificationRun.objects.get(pk=run_id)
    except VerificationRun.DoesNotExist:
        return Response({'error': f'run {run_id} not found'}, status=status.HTTP_404_NOT_FOUND)
    intact = run.verify_integrity()
    if not intact:
        logger.warning("stored report of run %s does not match its digest", run_id)
    return Response({'run_id': run.pk, 'digest': run.digest, 'intact': intact})


@api_view(['GET'])
def classification_table(request):
    """
    Admissible (tau, N, K, sum_a) cases for h^{1,1} = 21.

    Usage: GET /api/v1/classification/
    """
    rows = [s.as_row() for s in solve_classification()]
    return Response({'cases': ClassificationRowSerializer(rows, many=True).data})
