"""HTTP service exposing the engine to UI clients."""

from .app import BusyError, Engine, InvalidArgument, create_app, serve
from .config import LlmConfig, ServiceConfig, build_provider

__all__ = [
    "BusyError",
    "Engine",
    "InvalidArgument",
    "LlmConfig",
    "ServiceConfig",
    "build_provider",
    "create_app",
    "serve",
]
