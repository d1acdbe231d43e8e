"""TCP servers for the two services: newline-delimited JSON, one worker
thread per connection, strictly sequential processing within each
connection."""

from __future__ import annotations

import socketserver
import threading
from typing import Iterable, Optional

from ..kernel import load_prelude
from .protocol import ProtocolError, Request, Response
from .service import CasService, KernelService, make_engine


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        handler_factory = self.server.handler_factory  # type: ignore[attr-defined]
        per_connection = handler_factory()
        for raw in self.rfile:
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            try:
                request = Request.from_json(line)
            except ProtocolError as exc:
                response = Response(-1, False, error=str(exc))
            else:
                try:
                    response = per_connection(request)
                except Exception as exc:  # never kill the connection loop
                    response = Response(request.id, False,
                                        error=f"internal error: {exc}")
            self.wfile.write((response.to_json() + "\n").encode("utf-8"))
            self.wfile.flush()


class _ThreadingServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


def _parse_listen(addr: str) -> tuple[str, int]:
    host, _, port = addr.rpartition(":")
    return host or "127.0.0.1", int(port)


def serve_cas(listen: str, rule_files: Iterable[str] = (),
              engine=None) -> _ThreadingServer:
    """CAS evaluation server; the single service (and its global context)
    is shared across connections."""
    service = CasService(engine=engine if engine is not None else make_engine(),
                         rule_files=rule_files)
    server = _ThreadingServer(_parse_listen(listen), _LineHandler)
    server.handler_factory = lambda: service.handle  # type: ignore[attr-defined]
    server.cas_service = service  # type: ignore[attr-defined]
    return server


def serve_kernel(listen: str, prelude_file: Optional[str] = None
                 ) -> _ThreadingServer:
    """Kernel query server; every connection gets its own environment so
    axiomatized facts never leak between clients."""
    base_env = load_prelude(prelude_file)

    def factory():
        service = KernelService(env=base_env)

        def handle(request: Request) -> Response:
            return service.handle(request)

        return handle

    server = _ThreadingServer(_parse_listen(listen), _LineHandler)
    server.handler_factory = factory  # type: ignore[attr-defined]
    return server


def start_in_thread(server: _ThreadingServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
