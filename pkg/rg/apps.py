from django.apps import AppConfig


class RgConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'rg'
    verbose_name = 'Renormalization-group flows'
