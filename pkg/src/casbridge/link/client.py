"""Client side of the evaluation link: an in-process link for hermetic
use and a TCP client speaking the newline-delimited JSON protocol, plus
the convenience calls used by tactics."""

from __future__ import annotations

import itertools
import socket
import threading
from typing import Optional, Protocol

from ..cas.expr import CasError, CasExpr, from_wire, render
from ..kernel.expr import Expr
from .protocol import ProtocolError, Request, Response
from .service import CasService


class LinkDown(CasError):
    pass


class RemoteError(CasError):
    pass


class Link(Protocol):
    def request(self, op: str, payload) -> Response: ...

    def close(self) -> None: ...


class InProcessLink:
    """Direct calls into a service; bit-identical responses to the wire."""

    def __init__(self, service: Optional[CasService] = None):
        self.service = service if service is not None else CasService()
        self._ids = itertools.count(1)

    def request(self, op: str, payload) -> Response:
        req = Request(next(self._ids), op, payload)
        # responses round-trip through JSON so both link kinds are
        # exercised identically
        return Response.from_json(self.service.handle(req).to_json())

    def close(self) -> None:
        pass


class TcpLink:
    def __init__(self, host: str, port: int, timeout: float = 30.0):
        self._ids = itertools.count(1)
        self._lock = threading.Lock()
        try:
            self._sock = socket.create_connection((host, port),
                                                  timeout=timeout)
        except OSError as exc:
            raise LinkDown(f"cannot connect to {host}:{port}: {exc}") from exc
        self._reader = self._sock.makefile("r", encoding="utf-8")
        self._writer = self._sock.makefile("w", encoding="utf-8")

    def request(self, op: str, payload) -> Response:
        req = Request(next(self._ids), op, payload)
        with self._lock:
            try:
                self._writer.write(req.to_json() + "\n")
                self._writer.flush()
                line = self._reader.readline()
            except OSError as exc:
                raise LinkDown(str(exc)) from exc
        if not line:
            raise LinkDown("connection closed by server")
        try:
            resp = Response.from_json(line)
        except ProtocolError as exc:
            raise LinkDown(f"bad response: {exc}") from exc
        if resp.id != req.id:
            raise LinkDown(f"response id {resp.id} != request id {req.id}")
        return resp

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


def execute(link: Link, code: str, *, aux_rules: Optional[list[str]] = None,
            op: str = "eval") -> CasExpr:
    """Evaluate surface syntax over the link; returns the decoded result."""
    payload = {"code": code, "rules": aux_rules} if aux_rules else code
    resp = link.request(op, payload)
    if not resp.ok:
        raise RemoteError(resp.error or "remote failure")
    return from_wire(resp.result)


def execute_global(link: Link, code: str) -> CasExpr:
    return execute(link, code, op="eval_global")


def run_command_using(link: Link, template: str, e: Expr,
                      rules_file: Optional[str] = None) -> Expr:
    """Substitute the reflected rendering of `e` for the template's `%`
    placeholder, evaluate remotely, and back-translate the result."""
    from ..bridge.backtrans import TransEnv, default_registry, pexpr_of_mmexpr
    from ..bridge.reflect import reflect

    if template.count("%") != 1:
        raise ValueError("template must contain exactly one % placeholder")
    aux_rules: Optional[list[str]] = None
    if rules_file is not None:
        with open(rules_file, "r", encoding="utf-8") as fh:
            aux_rules = [ln.strip() for ln in fh
                         if ln.strip() and not ln.strip().startswith("#")]
    code = template.replace("%", render(reflect(e)))
    result = execute(link, code, aux_rules=aux_rules)
    return pexpr_of_mmexpr(default_registry(), TransEnv(), result)
