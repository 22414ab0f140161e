"""Configuration package."""
from .settings import settings, LabSettings

__all__ = ["settings", "LabSettings"]
