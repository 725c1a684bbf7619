from django.apps import AppConfig


class RgEngineConfig(AppConfig):
    name = "rg_engine"
    verbose_name = "RG engine"
