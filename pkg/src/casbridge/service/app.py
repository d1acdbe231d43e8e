"""HTTP session service: the single authority that resolves antiquotes
for notebook cells, plus thin REST wrappers around the kernel commands.
Cell execution is serialized; outputs are immutable once recorded."""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, HTTPException

from ..link.protocol import Request
from ..link.service import KernelService
from ..session import Session, parse_repl_command
from .schemas import (
    CellRecord,
    CellRequest,
    CellResponse,
    ExplodeRow,
    ProveRequest,
    SessionState,
    TacticRequest,
)


def create_app(session: Optional[Session] = None,
               kernel_service: Optional[KernelService] = None) -> FastAPI:
    app = FastAPI(title="casbridge session service")
    state_session = session if session is not None else Session()
    kernel = kernel_service if kernel_service is not None else KernelService(
        env=state_session.env, registry=state_session.registry)
    cells: list[CellRecord] = []
    lock = threading.Lock()
    request_ids = iter(range(1, 1 << 62))

    def kernel_cmd(cmd: str, args: dict) -> dict:
        response = kernel.handle(Request(next(request_ids), "kernel_cmd",
                                         {"cmd": cmd, "args": args}))
        if not response.ok:
            raise HTTPException(status_code=422, detail=response.error)
        return response.result

    def run_kernel_cell(source: str) -> CellResponse:
        words = source.strip().split()
        if len(words) >= 2 and words[0] == "explode":
            result = kernel_cmd("explode", {"name": words[1]})
            rows = [ExplodeRow(**row) for row in result["steps"]]
            return CellResponse(output=f"explode {words[1]}",
                                display="explode", explode=rows)
        if len(words) >= 2 and words[0] == "info":
            result = kernel_cmd("get_decl_info", {"name": words[1]})
            doc = result.get("doc") or ""
            text = f"{result['kind']} {result['name']} : {result['type']}"
            return CellResponse(output=f"{text}\n{doc}".strip())
        if words and words[0] == "prove":
            rest = source.strip()[len("prove"):].strip()
            tactic = "intuit"
            if " using " in rest:
                rest, _, tactic = rest.rpartition(" using ")
            result = kernel_cmd("prove", {"source": rest.strip(),
                                          "tactic": tactic.strip()})
            rows = [ExplodeRow(**row) for row in result.get("explode", [])]
            header = f"proved: {result['statement']} ({result['tactic']})"
            if rows:
                return CellResponse(output=header, display="explode",
                                    explode=rows)
            return CellResponse(output=header)
        raise HTTPException(status_code=422,
                            detail="kernel cells: prove <formula> [using "
                                   "<tactic>] | explode <decl> | info <decl>")

    @app.post("/session/cell", response_model=CellResponse)
    def run_cell(cell: CellRequest) -> CellResponse:
        with lock:
            try:
                if cell.mode == "kernel":
                    response = run_kernel_cell(cell.source)
                else:
                    command = parse_repl_command(
                        cell.source, as_image=cell.mode == "cas-image")
                    output = state_session.run_command(command)
                    if output.error:
                        response = CellResponse(output=output.text,
                                                status="error",
                                                error=output.error)
                    else:
                        response = CellResponse(
                            output=output.text,
                            display="image" if output.display == "image"
                            else "text",
                            image_svg=output.image_svg)
            except HTTPException as exc:
                response = CellResponse(output=str(exc.detail),
                                        status="error",
                                        error=str(exc.detail))
            cells.append(CellRecord(index=len(cells), source=cell.source,
                                    mode=cell.mode, status=response.status,
                                    output=response.output,
                                    display=response.display))
            return response

    @app.get("/session/state", response_model=SessionState)
    def session_state() -> SessionState:
        with lock:
            return SessionState(cells=list(cells))

    @app.post("/prove")
    def prove(request: ProveRequest) -> dict:
        return kernel_cmd("prove", {"source": request.source,
                                    "tactic": request.tactic})

    @app.post("/tactic")
    def tactic(request: TacticRequest) -> dict:
        return kernel_cmd("run_tactic",
                          {"name": request.name, **request.args})

    @app.get("/info/{name}")
    def info(name: str) -> dict:
        return kernel_cmd("get_decl_info", {"name": name})

    @app.get("/explode/{name}")
    def explode(name: str) -> dict:
        return kernel_cmd("explode", {"name": name})

    return app
