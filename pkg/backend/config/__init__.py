"""
Configuration package for Clinical Trial Control Tower.

This package contains Django settings, URL routing, and WSGI/ASGI configuration.
"""

# This will make Celery work with Django
# Import celery app for autodiscovery
# from .celery import app as celery_app
# __all__ = ('celery_app',)
