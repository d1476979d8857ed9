from django.apps import AppConfig


class GadgetsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "gadgets"
