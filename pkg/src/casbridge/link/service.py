"""Request handlers shared by the TCP servers and the in-process link.

The algebra service evaluates each `eval` request in a fresh context that
is cleared immediately afterwards; `eval_global` runs in the persistent
global context under an exclusive lock. The kernel service owns one
environment (extended only by explicit axiomatize commands) and dispatches
declaration queries, tactic runs, and proof requests.
"""

from __future__ import annotations

import threading
from typing import Iterable, Optional

from ..cas import (
    App,
    CasError,
    CasExpr,
    MStr,
    StepBudgetExceeded,
    Sym,
    parse,
    to_wire,
)
from ..cas.parser import ParseError
from ..kernel import Environment, KernelError, load_prelude
from .protocol import ProtocolError, Request, Response


def make_engine():
    """An engine with the bridge interpretation pass installed."""
    from ..bridge.leanform import install as install_leanform
    from ..cas.engine import Engine

    engine = Engine()
    install_leanform(engine)
    return engine


def load_cas_rules(engine, paths: Iterable[str]) -> None:
    """Load `lhs := rhs` rule files into the global context."""
    for path in paths:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    engine.evaluate(parse(line))
                except CasError as exc:
                    raise CasError(f"{path}:{lineno}: {exc}") from exc


class CasService:
    """Stateless-by-default evaluation service over one engine."""

    def __init__(self, engine=None, rule_files: Iterable[str] = ()):
        self.engine = engine if engine is not None else make_engine()
        self._global_lock = threading.Lock()
        if rule_files:
            load_cas_rules(self.engine, rule_files)

    def handle(self, request: Request) -> Response:
        if request.op not in ("eval", "eval_global"):
            return Response(request.id, False,
                            error=f"unsupported op {request.op!r}")
        try:
            code, aux_rules = self._payload_parts(request.payload)
            expr = parse(code)
        except (ProtocolError, ParseError) as exc:
            return Response(request.id, False, error=str(exc))
        try:
            if request.op == "eval":
                ctx = self.engine.fresh_context()
                try:
                    for rule_line in aux_rules:
                        self.engine.evaluate(parse(rule_line), ctx=ctx)
                    result = self.engine.evaluate(expr, ctx=ctx)
                finally:
                    ctx.clear()
            else:
                with self._global_lock:
                    result = self.engine.evaluate(expr)
        except (StepBudgetExceeded, CasError) as exc:
            return Response(request.id, False, error=str(exc))
        return self._render_result(request.id, result)

    @staticmethod
    def _payload_parts(payload) -> tuple[str, list[str]]:
        if isinstance(payload, str):
            return payload, []
        if isinstance(payload, dict) and isinstance(payload.get("code"), str):
            rules = payload.get("rules", [])
            if not isinstance(rules, list) or \
                    not all(isinstance(r, str) for r in rules):
                raise ProtocolError("rules must be a list of strings")
            return payload["code"], rules
        raise ProtocolError("eval payload must be a string or {code, rules}")

    @staticmethod
    def _render_result(request_id: int, result: CasExpr) -> Response:
        match result:
            case App(Sym("SVGImage"), (MStr(svg),)):
                return Response(request_id, True, result=to_wire(result),
                                display="image", image_svg=svg)
            case _:
                return Response(request_id, True, result=to_wire(result))


class KernelService:
    """Declaration queries, tactics, and proving over one environment."""

    def __init__(self, env: Optional[Environment] = None, engine=None,
                 registry=None):
        from ..bridge.backtrans import default_registry

        self.env = env if env is not None else load_prelude()
        self.engine = engine if engine is not None else make_engine()
        self.registry = registry if registry is not None else default_registry()

    def handle(self, request: Request) -> Response:
        if request.op != "kernel_cmd":
            return Response(request.id, False,
                            error=f"unsupported op {request.op!r}")
        cmd = request.payload["cmd"]
        args = request.payload.get("args", {})
        if not isinstance(args, dict):
            return Response(request.id, False, error="args must be an object")
        try:
            handler = getattr(self, f"_cmd_{cmd}")
            return Response(request.id, True, result=handler(args))
        except (KernelError, CasError, ProtocolError) as exc:
            return Response(request.id, False,
                            error=f"{type(exc).__name__}: {exc}")

    # command implementations

    def _cmd_get_decl_info(self, args: dict) -> dict:
        from ..prover.query import get_decl_info

        info = get_decl_info(self.env, args["name"])
        return info.to_payload()

    def _cmd_prove(self, args: dict) -> dict:
        from ..cas.expr import from_wire
        from ..prover.query import prove_for_cas

        if "formula" in args:
            formula = from_wire(args["formula"])
        else:
            formula = parse(args["source"])
        outcome = prove_for_cas(self.env, formula,
                                args.get("tactic", "intuit"),
                                registry=self.registry, engine=self.engine)
        return outcome.to_payload()

    def _cmd_explode(self, args: dict) -> dict:
        from ..prover.explode import explode, steps_payload

        decl = self.env.lookup(args["name"])
        if decl.value is None:
            raise KernelError(f"{args['name']} has no proof term to explode")
        steps = explode(self.env, decl.value)
        return {"name": args["name"], "steps": steps_payload(steps, self.env)}

    def _cmd_run_tactic(self, args: dict) -> dict:
        from ..tactics.dispatch import run_named_tactic

        return run_named_tactic(self, args)
