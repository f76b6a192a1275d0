from .app import create_app
from .backends import StubBackend, TransformersBackend, make_backend
from .config import ServerConfig

__version__ = "0.1.0"

__all__ = ["ServerConfig", "StubBackend", "TransformersBackend",
           "create_app", "make_backend"]
