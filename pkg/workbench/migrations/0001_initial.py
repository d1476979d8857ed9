# Generated by Django 5.2.7 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ConstructionRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("formula", models.TextField(help_text="DIMACS text as submitted")),
                ("C", models.PositiveIntegerField(blank=True, null=True)),
                ("V", models.PositiveIntegerField(blank=True, null=True)),
                ("m", models.PositiveIntegerField(blank=True, null=True)),
                ("n", models.PositiveIntegerField(blank=True, null=True)),
                ("K", models.PositiveIntegerField(blank=True, null=True)),
                (
                    "chain_length",
                    models.PositiveIntegerField(
                        blank=True,
                        help_text="Overrides the chain length m for desk-scale builds",
                        null=True,
                    ),
                ),
                ("output_dir", models.CharField(blank=True, max_length=500)),
                ("conditions", models.JSONField(blank=True, default=dict)),
                ("status", models.CharField(default="pending", max_length=20)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
                ("completed_at", models.DateTimeField(blank=True, null=True)),
                ("error_message", models.TextField(blank=True)),
            ],
        ),
    ]
