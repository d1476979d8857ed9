from django.apps import AppConfig


class SweepConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "sweep"
