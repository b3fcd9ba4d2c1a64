from django.apps import AppConfig


class CoulombgasConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'coulombgas'
    verbose_name = 'Two-dimensional Coulomb gas'
