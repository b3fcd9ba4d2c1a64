from django.apps import AppConfig


class HypercubeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hypercube'
    verbose_name = 'Space-time grid and error probabilities'
