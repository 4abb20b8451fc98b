"""Configuration helpers for the positive-map audit toolkit."""

from .settings import Settings, load_settings

__all__ = ["Settings", "load_settings"]
