"""HTTP service layer: pydantic wire models, handlers, FastAPI app."""

from .app import create_app

__all__ = ["create_app"]
