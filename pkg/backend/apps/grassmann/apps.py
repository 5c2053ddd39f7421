"""Grassmannian Decomposability app configuration."""

from django.apps import AppConfig


class GrassmannConfig(AppConfig):
    """Decomposability tests for 3-vectors."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.grassmann'
    verbose_name = 'Grassmannian Decomposability'
