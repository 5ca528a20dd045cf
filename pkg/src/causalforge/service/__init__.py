"""HTTP task service: FastAPI app, task store, request models."""

from .app import create_app
from .store import TaskStore

__all__ = ["create_app", "TaskStore"]
