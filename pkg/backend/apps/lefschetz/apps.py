"""Holomorphic Lefschetz app configuration."""

from django.apps import AppConfig


class LefschetzConfig(AppConfig):
    """Local terms and the classification system."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.lefschetz'
    verbose_name = 'Holomorphic Lefschetz'
