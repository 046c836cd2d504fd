"""Debug Adapter Protocol base transport: Content-Length framed JSON.

Each message is `Content-Length: N\r\n\r\n` followed by exactly N bytes of
UTF-8 JSON. Unknown headers and unknown JSON fields pass through untouched.
"""

from __future__ import annotations

import json
from typing import BinaryIO


class FramingError(Exception):
    """The byte stream does not follow Content-Length framing."""


class JsonError(Exception):
    """A frame's body is not valid JSON."""


def encode_message(message: dict) -> bytes:
    body = json.dumps(message, ensure_ascii=False, separators=(",", ":")).encode("utf-8")
    return f"Content-Length: {len(body)}\r\n\r\n".encode("ascii") + body


def decode_message(stream: BinaryIO) -> dict | None:
    """Read one framed message; None at a clean end of stream."""
    headers: dict[str, str] = {}
    line = _read_header_line(stream)
    if line is None:
        return None
    while line:
        name, sep, value = line.partition(":")
        if not sep:
            raise FramingError(f"malformed header line {line!r}")
        headers[name.strip().lower()] = value.strip()
        line = _read_header_line(stream)
        if line is None:
            raise FramingError("end of stream inside headers")
    if "content-length" not in headers:
        raise FramingError("missing Content-Length header")
    try:
        length = int(headers["content-length"])
    except ValueError:
        raise FramingError(f"bad Content-Length {headers['content-length']!r}") from None
    if length < 0:
        raise FramingError(f"bad Content-Length {length}")
    body = stream.read(length)
    if body is None or len(body) < length:
        raise FramingError(f"short read: wanted {length} bytes, got {len(body or b'')}")
    try:
        message = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise JsonError(str(exc)) from exc
    if not isinstance(message, dict):
        raise JsonError("message body is not a JSON object")
    return message


def _read_header_line(stream: BinaryIO) -> str | None:
    """One CRLF-terminated header line, '' for the blank separator, or
    None at end of stream before any byte."""
    raw = bytearray()
    while True:
        byte = stream.read(1)
        if not byte:
            if not raw:
                return None
            raise FramingError("end of stream inside a header line")
        raw += byte
        if raw.endswith(b"\r\n"):
            return raw[:-2].decode("ascii", "replace")
        # Be lenient about bare-\n framing from simple clients.
        if raw.endswith(b"\n"):
            return raw[:-1].decode("ascii", "replace")
