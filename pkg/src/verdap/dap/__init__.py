"""Debug Adapter Protocol server for the symbolic engine."""

from .session import DebugSession
from .server import serve
from .wire import decode_message, encode_message, FramingError, JsonError

__all__ = [
    "DebugSession",
    "FramingError",
    "JsonError",
    "decode_message",
    "encode_message",
    "serve",
]
