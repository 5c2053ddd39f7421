"""Exterior Algebra app configuration."""

from django.apps import AppConfig


class ExalgConfig(AppConfig):
    """Exact exterior algebra over the rationals."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.exalg'
    verbose_name = 'Exterior Algebra'
