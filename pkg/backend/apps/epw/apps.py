"""EPW Double Covers app configuration."""

from django.apps import AppConfig


class EpwConfig(AppConfig):
    """Invariant Lagrangians and fixed loci on EPW sextics."""
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.epw'
    verbose_name = 'EPW Double Covers'
