"""Scripted DAP client: spawns the adapter as a child process and speaks
real Content-Length frames over its standard streams, capturing the full
response/event transcript in arrival order."""

from __future__ import annotations

import subprocess
import sys
from typing import Optional

from verdap.dap.wire import decode_message, encode_message


class DapClient:
    def __init__(self, extra_args: Optional[list[str]] = None, env: Optional[dict] = None):
        self.process = subprocess.Popen(
            [sys.executable, "-m", "verdap", "dap"] + (extra_args or []),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            env=env,
        )
        self.seq = 0
        self.transcript: list[dict] = []

    def request(self, command: str, arguments: Optional[dict] = None) -> dict:
        """Send one request and read messages until its response arrives.
        Events that precede the response land in the transcript first."""
        self.seq += 1
        message: dict = {"type": "request", "seq": self.seq, "command": command}
        if arguments is not None:
            message["arguments"] = arguments
        self.process.stdin.write(encode_message(message))
        self.process.stdin.flush()
        while True:
            received = decode_message(self.process.stdout)
            if received is None:
                raise EOFError(f"adapter closed the stream awaiting {command!r}")
            self.transcript.append(received)
            if received.get("type") == "response" and received.get("request_seq") == self.seq:
                return received

    def drain(self, timeout: float = 5.0) -> None:
        """Collect any trailing messages until the stream closes."""
        self.process.stdin.close()
        while True:
            received = decode_message(self.process.stdout)
            if received is None:
                break
            self.transcript.append(received)
        self.process.wait(timeout=timeout)

    def close(self) -> int:
        if self.process.poll() is None:
            self.process.kill()
        self.process.wait()
        return self.process.returncode
