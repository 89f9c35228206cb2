from django.apps import AppConfig


class SimplicialConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'simplicial'
    verbose_name = 'Rigidification of finite simplicial sets'
