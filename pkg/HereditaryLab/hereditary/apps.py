from django.apps import AppConfig


class HereditaryConfig(AppConfig):
    name = "hereditary"
    verbose_name = "Hereditary operator inequalities"
