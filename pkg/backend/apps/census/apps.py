"""Fixed-Point Censuses app configuration."""

from django.apps import AppConfig


class CensusConfig(AppConfig):
    """Hilbert scheme and Fano variety censuses."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.census'
    verbose_name = 'Fixed-Point Censuses'
