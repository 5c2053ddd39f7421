"""
API URL Configuration.

All routes here are prefixed with /api/v1/ from the main urls.py.

Endpoints:
- GET /api/v1/runs/ - Recorded verification runs
- GET /api/v1/runs/<id>/ - One run with certificates and report
- GET /api/v1/runs/<id>/verify/ - Digest check of the stored report
- GET /api/v1/classification/ - Admissible classification cases
"""

from django.urls import path

from . import views

urlpatterns = [
    # Recorded runs
    path('runs/', views.run_list, name='api-runs'),
    path('runs/<int:run_id>/', views.run_detail, name='api-run-detail'),
    path('runs/<int:run_id>/verify/', views.run_verify, name='api-run-verify'),

    # Computed on request
    path('classification/', views.classification_table, name='api-classification'),
]
