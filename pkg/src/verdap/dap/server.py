"""Serve a debug session over framed standard streams.

Requests are processed strictly in arrival order; events interleave with
responses on the same ordered output channel. With `--log` every message is
appended to a file, one JSON object per line, prefixed `->` (from client)
or `<-` (to client).
"""

from __future__ import annotations

import json
from typing import BinaryIO, Optional, TextIO

from .session import DebugSession
from .wire import decode_message, encode_message, FramingError, JsonError


def serve(
    stdin: BinaryIO,
    stdout: BinaryIO,
    log: Optional[TextIO] = None,
    env: Optional[dict[str, str]] = None,
) -> int:
    session = DebugSession(env=env)

    def emit(message: dict) -> None:
        if log:
            log.write("<- " + json.dumps(message) + "\n")
            log.flush()
        stdout.write(encode_message(message))
        stdout.flush()

    try:
        while not session.closed:
            try:
                request = decode_message(stdin)
            except JsonError as exc:
                # Framing intact, body broken: report and keep serving.
                for message in session.handle({"command": "", "seq": 0}):
                    message["message"] = f"invalid JSON body: {exc}"
                    emit(message)
                continue
            except FramingError as exc:
                if log:
                    log.write(f"!! framing error: {exc}\n")
                    log.flush()
                return 1
            if request is None:
                return 0  # transport closed
            if log:
                log.write("-> " + json.dumps(request) + "\n")
                log.flush()
            for message in session.handle(request):
                emit(message)
    except BrokenPipeError:
        return 0  # client went away mid-write: same as a closed transport
    return 0
