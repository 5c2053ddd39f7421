# Django management commands
