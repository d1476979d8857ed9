from django.apps import AppConfig


class StackedConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "stacked"
