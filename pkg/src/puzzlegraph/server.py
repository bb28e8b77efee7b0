"""Transports for the gp/1 protocol: stdio and TCP sockets.

stdio: one server per process, reads requests from stdin line by line and
writes one response line per request; exits on EOF. TCP: a threading server
where each connection gets its own session namespace and strict per-
connection FIFO handling.
"""
from __future__ import annotations

import socket
import socketserver
import subprocess
import sys

from .protocol import ProtocolClient, ProtocolServer

DEFAULT_ADDR_ENV = "PUZZLEGRAPH_ADDR"


def serve_stdio(stdin=None, stdout=None) -> None:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    server = ProtocolServer()
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        stdout.write(server.handle_line(line))
        stdout.write("\n")
        stdout.flush()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server = ProtocolServer()  # sessions are per-connection
        for raw in self.rfile:
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            resp = server.handle_line(line)
            self.wfile.write(resp.encode("utf-8") + b"\n")
            self.wfile.flush()


class TcpServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def serve_tcp(host: str, port: int):
    """Returns the bound server; call serve_forever() (or run it in a thread)."""
    return TcpServer((host, port), _Handler)


def parse_address(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bad address {addr!r}, expected host:port")
    return host, int(port)


class StdioTransport:
    """Client transport talking to a `puzzlegraph serve` subprocess."""

    def __init__(self, argv: list[str] | None = None):
        if argv is None:
            argv = [sys.executable, "-m", "puzzlegraph.cli", "serve",
                    "--transport", "stdio"]
        self.proc = subprocess.Popen(argv, stdin=subprocess.PIPE,
                                     stdout=subprocess.PIPE, text=True,
                                     bufsize=1)

    def send(self, line: str) -> None:
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def recv(self) -> str | None:
        line = self.proc.stdout.readline()
        return line if line else None

    def close(self) -> None:
        if self.proc.stdin:
            self.proc.stdin.close()
        self.proc.wait(timeout=10)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class TcpTransport:
    def __init__(self, host: str, port: int):
        self.sock = socket.create_connection((host, port))
        self.rfile = self.sock.makefile("r", encoding="utf-8")

    def send(self, line: str) -> None:
        self.sock.sendall(line.encode("utf-8") + b"\n")

    def recv(self) -> str | None:
        line = self.rfile.readline()
        return line if line else None

    def close(self) -> None:
        self.rfile.close()
        self.sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def stdio_client(argv: list[str] | None = None) -> ProtocolClient:
    return ProtocolClient(StdioTransport(argv))


def tcp_client(host: str, port: int) -> ProtocolClient:
    return ProtocolClient(TcpTransport(host, port))
