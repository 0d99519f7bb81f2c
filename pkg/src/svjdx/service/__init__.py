"""FastAPI service wrapping the pricing engine (see `svjdx.service.app`)."""

from .app import app

__all__ = ["app"]
