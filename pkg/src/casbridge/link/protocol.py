"""Wire protocol: one JSON object per line, UTF-8.

Requests:  {"id": n, "op": "eval"|"eval_global"|"kernel_cmd", "payload": ...}
  eval / eval_global payloads are surface-syntax strings, or objects
  {"code": str, "rules": [str, ...]} carrying auxiliary definitions for
  the request's fresh context. kernel_cmd payloads are objects
  {"cmd": str, "args": {...}} with cmd one of get_decl_info / run_tactic /
  explode / prove.

Responses: {"id": n, "ok": bool, "result": ..., "error": str?,
            "display": "text"|"image", "image_svg": str?}
  where result is a wire-encoded expression (see the expression codec) or
  a structured object for kernel commands.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional, Union

VALID_OPS = ("eval", "eval_global", "kernel_cmd")
VALID_KERNEL_CMDS = ("get_decl_info", "run_tactic", "explode", "prove")


class ProtocolError(Exception):
    pass


@dataclass(frozen=True)
class Request:
    id: int
    op: str
    payload: Union[str, dict]

    def __post_init__(self) -> None:
        if self.op not in VALID_OPS:
            raise ProtocolError(f"unknown op {self.op!r}")
        if self.op == "kernel_cmd":
            if not isinstance(self.payload, dict) or "cmd" not in self.payload:
                raise ProtocolError("kernel_cmd payload needs a cmd field")
            if self.payload["cmd"] not in VALID_KERNEL_CMDS:
                raise ProtocolError(
                    f"unknown kernel command {self.payload['cmd']!r}")

    def to_json(self) -> str:
        return json.dumps({"id": self.id, "op": self.op,
                           "payload": self.payload}, ensure_ascii=False)

    @staticmethod
    def from_json(line: str) -> "Request":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"bad request JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ProtocolError("request must be a JSON object")
        try:
            return Request(int(obj["id"]), obj["op"], obj["payload"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed request: {exc}") from exc


@dataclass(frozen=True)
class Response:
    id: int
    ok: bool
    result: Any = None
    error: Optional[str] = None
    display: str = "text"
    image_svg: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.ok and self.error is None:
            raise ProtocolError("failed responses must carry an error")
        if self.display == "image" and self.image_svg is None:
            raise ProtocolError("image responses must carry image_svg")

    def to_json(self) -> str:
        obj: dict[str, Any] = {"id": self.id, "ok": self.ok,
                               "result": self.result, "display": self.display}
        if self.error is not None:
            obj["error"] = self.error
        if self.image_svg is not None:
            obj["image_svg"] = self.image_svg
        return json.dumps(obj, ensure_ascii=False, sort_keys=True)

    @staticmethod
    def from_json(line: str) -> "Response":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"bad response JSON: {exc}") from exc
        try:
            return Response(int(obj["id"]), bool(obj["ok"]),
                            obj.get("result"), obj.get("error"),
                            obj.get("display", "text"), obj.get("image_svg"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed response: {exc}") from exc
