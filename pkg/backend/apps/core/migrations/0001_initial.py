# Generated by Django 5.0.1 on 2026-10-19 09:12

import django.db.models.deletion
import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('subcommand', models.CharField(choices=[('classify', 'Lefschetz classification'), ('epw', 'EPW fixed-locus census'), ('hilbert', 'Hilbert square census'), ('fano', 'Fano variety census'), ('all', 'Full suite with cross-validation')], help_text='Subcommand that produced the report', max_length=20)),
                ('seed', models.BigIntegerField(default=0, help_text='Root seed of every randomized step')),
                ('config', models.JSONField(default=dict, help_text='Run configuration (flags and instance data)')),
                ('status', models.CharField(choices=[('pass', 'All certificates passed'), ('fail', 'At least one certificate failed')], db_index=True, max_length=10)),
                ('report_text', models.TextField(help_text='Rendered report document, stored verbatim')),
                ('digest', models.CharField(db_index=True, help_text='SHA-256 of report_text', max_length=64)),
                ('isolated_points', models.IntegerField(blank=True, help_text='N of the EPW census when present, else of the first census in the run', null=True)),
                ('k3_surfaces', models.IntegerField(blank=True, null=True)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'db_table': 'verification_runs',
                'ordering': ['-created_at', '-id'],
                'indexes': [models.Index(fields=['subcommand', '-created_at'], name='verification_subcmd_idx')],
            },
        ),
        migrations.CreateModel(
            name='CertificateRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('section', models.CharField(max_length=100)),
                ('name', models.CharField(db_index=True, max_length=100)),
                ('passed', models.BooleanField()),
                ('source', models.CharField(blank=True, default='', max_length=100)),
                ('hypothesis', models.CharField(blank=True, default='', max_length=200)),
                ('detail', models.TextField(blank=True, default='')),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='certificates', to='core.verificationrun')),
            ],
            options={
                'db_table': 'certificate_records',
                'ordering': ['run', 'id'],
            },
        ),
    ]
