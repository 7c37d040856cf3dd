"""Live synchronous experiment service."""

from .engine import LiveSession, SessionRegistry
from .app import create_app

__all__ = ["LiveSession", "SessionRegistry", "create_app"]
