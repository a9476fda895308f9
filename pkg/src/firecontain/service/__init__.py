"""HTTP session service: interactive games over JSON."""

from .app import create_app

__all__ = ["create_app"]
