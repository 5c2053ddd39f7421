"""
Django admin configuration for recorded verification runs.
"""

from django.contrib import admin

from .models import CertificateRecord, VerificationRun


class CertificateRecordInline(admin.TabularInline):
    model = CertificateRecord
    extra = 0
    fields = ['section', 'name', 'passed', 'hypothesis', 'detail']
    readonly_fields = fields


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    list_display = ['id', 'subcommand', 'seed', 'status', 'isolated_points', 'k3_surfaces', 'created_at']
    list_filter = ['subcommand', 'status']
    search_fields = ['digest']
    readonly_fields = ['report_text', 'digest']
    ordering = ['-created_at']
    inlines = [CertificateRecordInline]


@admin.register(CertificateRecord)
class CertificateRecordAdmin(admin.ModelAdmin):
    list_display = ['name', 'section', 'passed', 'run']
    list_filter = ['passed', 'section']
    search_fields = ['name', 'hypothesis']
