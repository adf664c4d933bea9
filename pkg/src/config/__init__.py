from .settings import Settings, apply_settings, settings

__all__ = ["Settings", "apply_settings", "settings"]
