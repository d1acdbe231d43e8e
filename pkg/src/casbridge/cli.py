"""Terminal entry point: REPL, mm-block runner, servers, the HTTP session
service, and the tactic subcommands."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from .bridge.backtrans import default_registry, load_sym_rules
from .kernel.env import load_prelude
from .link.client import InProcessLink, TcpLink
from .link.protocol import Request, Response
from .link.service import CasService, KernelService, make_engine
from .session import Session, SessionError, parse_mm_blocks, run_mm_block


class Runtime:
    """Lazily constructed shared state for one CLI invocation."""

    def __init__(self, cas: Optional[str], kernel: Optional[str],
                 prelude: Optional[str], bridge_rules: Optional[str],
                 cas_rules: tuple[str, ...], as_json: bool):
        self.cas_addr = cas
        self.kernel_addr = kernel
        self.prelude_path = prelude
        self.bridge_rules = bridge_rules
        self.cas_rules = cas_rules
        self.as_json = as_json
        self._env = None
        self._link = None
        self._registry = None
        self._kernel_service = None

    @property
    def env(self):
        if self._env is None:
            self._env = load_prelude(self.prelude_path)
        return self._env

    @property
    def registry(self):
        if self._registry is None:
            reg = default_registry()
            if self.bridge_rules:
                reg = load_sym_rules(reg, self.bridge_rules)
            self._registry = reg
        return self._registry

    @property
    def link(self):
        if self._link is None:
            if self.cas_addr:
                host, _, port = self.cas_addr.rpartition(":")
                self._link = TcpLink(host or "127.0.0.1", int(port))
            else:
                self._link = InProcessLink(
                    CasService(rule_files=self.cas_rules))
        return self._link

    def kernel_request(self, cmd: str, args: dict) -> Response:
        if self.kernel_addr:
            host, _, port = self.kernel_addr.rpartition(":")
            remote = TcpLink(host or "127.0.0.1", int(port))
            try:
                return remote.request("kernel_cmd", {"cmd": cmd, "args": args})
            finally:
                remote.close()
        if self._kernel_service is None:
            engine = getattr(self.link, "service", None)
            engine = engine.engine if engine is not None else make_engine()
            self._kernel_service = KernelService(env=self.env, engine=engine,
                                                 registry=self.registry)
        request = Request(1, "kernel_cmd", {"cmd": cmd, "args": args})
        return self._kernel_service.handle(request)

    def session(self) -> Session:
        return Session(env=self.env, link=self.link, registry=self.registry)


pass_runtime = click.make_pass_decorator(Runtime)


@click.group()
@click.option("--cas", default=None, metavar="HOST:PORT",
              help="Remote algebra server (default: in-process engine).")
@click.option("--kernel", default=None, metavar="HOST:PORT",
              help="Remote kernel server (default: in-process).")
@click.option("--prelude", default=None, type=click.Path(exists=True),
              help="Alternative prelude declaration file.")
@click.option("--bridge-rules", default=None, type=click.Path(exists=True),
              help="Extra back-translation symbol rules.")
@click.option("--cas-rules", multiple=True, type=click.Path(exists=True),
              help="Rule files loaded into the global context.")
@click.option("--json", "as_json", is_flag=True,
              help="Machine-readable output mirroring the wire schemas.")
@click.pass_context
def main(ctx, cas, kernel, prelude, bridge_rules, cas_rules, as_json):
    """Bridge between a proof kernel and a computer algebra engine."""
    ctx.obj = Runtime(cas, kernel, prelude, bridge_rules, cas_rules, as_json)


def _emit(runtime: Runtime, payload: dict, text: str) -> None:
    if runtime.as_json:
        click.echo(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        click.echo(text)


def _fail(runtime: Runtime, payload: dict, text: str) -> None:
    _emit(runtime, payload, text)
    sys.exit(1)


def _run_kernel_cmd(runtime: Runtime, cmd: str, args: dict) -> dict:
    response = runtime.kernel_request(cmd, args)
    if not response.ok:
        _fail(runtime, {"ok": False, "error": response.error},
              f"error: {response.error}")
    return response.result


# --- interactive -----------------------------------------------------------------

@main.command()
@pass_runtime
def repl(runtime: Runtime):
    """Interactive evaluation; double-quoted segments are kernel
    antiquotations."""
    session = runtime.session()
    click.echo("casbridge repl; empty line or Ctrl-D exits")
    while True:
        try:
            line = input("mm> ")
        except EOFError:
            break
        if not line.strip():
            break
        output = session.run_source(line)
        if output.display == "image" and output.image_svg:
            path = Path("repl-plot.svg")
            path.write_text(output.image_svg, encoding="utf-8")
            click.echo(f"[image written to {path}]")
        else:
            click.echo(output.text)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@pass_runtime
def run(runtime: Runtime, file: str):
    """Evaluate every mm block in FILE, printing each command's output."""
    text = Path(file).read_text(encoding="utf-8")
    try:
        blocks = parse_mm_blocks(text)
    except SessionError as exc:
        raise click.UsageError(str(exc))
    session = runtime.session()
    image_index = 0
    failed = False
    for block in blocks:
        for output in run_mm_block(session, block):
            if output.error:
                failed = True
            if output.display == "image" and output.image_svg:
                out_path = Path(file).with_suffix(f".{image_index}.svg")
                out_path.write_text(output.image_svg, encoding="utf-8")
                click.echo(f"[image written to {out_path}]")
                image_index += 1
            else:
                click.echo(output.text)
    sys.exit(1 if failed else 0)


# --- servers ---------------------------------------------------------------------

@main.command("serve-cas")
@click.option("--listen", default="127.0.0.1:7814", metavar="HOST:PORT")
@pass_runtime
def serve_cas_cmd(runtime: Runtime, listen: str):
    """Run the algebra evaluation server."""
    from .link.server import serve_cas

    server = serve_cas(listen, rule_files=runtime.cas_rules)
    click.echo(f"cas server listening on {listen}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


@main.command("serve-kernel")
@click.option("--listen", default="127.0.0.1:7815", metavar="HOST:PORT")
@pass_runtime
def serve_kernel_cmd(runtime: Runtime, listen: str):
    """Run the kernel query server."""
    from .link.server import serve_kernel

    server = serve_kernel(listen, prelude_file=runtime.prelude_path)
    click.echo(f"kernel server listening on {listen}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()


@main.command("serve-ui")
@click.option("--listen", default="127.0.0.1:8470", metavar="HOST:PORT")
@pass_runtime
def serve_ui_cmd(runtime: Runtime, listen: str):
    """Run the HTTP session service backing the notebook frontend."""
    import uvicorn

    from .service.app import create_app

    host, _, port = listen.rpartition(":")
    app = create_app(runtime.session(),
                     kernel_service=KernelService(env=runtime.env,
                                                  registry=runtime.registry))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port),
                log_level="warning")


# --- tactic subcommands ------------------------------------------------------------

@main.command()
@click.argument("expr")
@pass_runtime
def factor(runtime: Runtime, expr: str):
    """Factor a polynomial and certify the equality by ring."""
    result = _run_kernel_cmd(runtime, "run_tactic",
                             {"name": "factor", "expr": expr})
    _emit(runtime, result,
          f"{result['input']} = {result['factored']}\n"
          f"verified ({result['method']})")


@main.command()
@click.argument("hyps")
@click.option("--oracle", type=click.Choice(["fm", "cas"]), default="fm",
              help="Certificate search: local Fourier-Motzkin or the "
                   "algebra engine's linear programming.")
@pass_runtime
def linarith(runtime: Runtime, hyps: str, oracle: str):
    """Refute semicolon-separated linear hypotheses."""
    parts = [h.strip() for h in hyps.split(";") if h.strip()]
    result = _run_kernel_cmd(runtime, "run_tactic",
                             {"name": "linarith", "hyps": parts,
                              "oracle": oracle})
    cert = ",".join(result["certificate"])
    _emit(runtime, result, f"false (certificate {cert} checked)")


@main.command()
@click.argument("matrix")
@pass_runtime
def lu(runtime: Runtime, matrix: str):
    """Verified LU decomposition of a rational matrix like
    [[1,2],[3,4]]."""
    try:
        rows = json.loads(matrix)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"matrix must be JSON rows: {exc}")
    result = _run_kernel_cmd(runtime, "run_tactic",
                             {"name": "lu", "matrix": rows})
    text = (f"L = {result['l']}\nU = {result['u']}\n"
            f"verified ({result['method']})")
    _emit(runtime, result, text)


@main.command()
@click.argument("system")
@pass_runtime
def solve(runtime: Runtime, system: str):
    """Solve semicolon-separated equations and verify the solution."""
    parts = [e.strip() for e in system.split(";") if e.strip()]
    result = _run_kernel_cmd(runtime, "run_tactic",
                             {"name": "solve", "equations": parts})
    assignment = ", ".join(f"{k} = {v}"
                           for k, v in sorted(result["assignment"].items()))
    _emit(runtime, result,
          f"{assignment}\nverified ({result['method']})")


@main.command()
@click.argument("hyps")
@click.argument("goal")
@pass_runtime
def plausible(runtime: Runtime, hyps: str, goal: str):
    """Search for a countermodel to hypotheses => goal."""
    parts = [h.strip() for h in hyps.split(";") if h.strip()]
    response = runtime.kernel_request("run_tactic",
                                      {"name": "plausible", "hyps": parts,
                                       "goal": goal})
    if not response.ok:
        if "UnsupportedFragment" in (response.error or "") or \
                "UnsupportedHypothesis" in (response.error or ""):
            _emit(runtime, {"plausible": None, "error": response.error},
                  "inconclusive (outside the linear fragment)")
            sys.exit(1)
        _fail(runtime, {"ok": False, "error": response.error},
              f"error: {response.error}")
    result = response.result
    if result["plausible"]:
        _emit(runtime, result, "plausible (no countermodel found)")
    else:
        model = ", ".join(f"{k} = {v}"
                          for k, v in sorted(result["countermodel"].items()))
        _emit(runtime, result, f"not plausible; countermodel: {model}")
        sys.exit(1)


@main.command()
@click.argument("formula")
@click.option("--tactic", default="intuit",
              type=click.Choice(["intuit", "norm_num", "linarith", "ring"]))
@pass_runtime
def prove(runtime: Runtime, formula: str, tactic: str):
    """Prove an engine-syntax proposition with a kernel tactic."""
    response = runtime.kernel_request("prove",
                                      {"source": formula, "tactic": tactic})
    if not response.ok:
        _fail(runtime, {"ok": False, "error": response.error},
              f"failed: {response.error}")
    result = response.result
    lines = [f"proved: {result['statement']} ({result['tactic']})"]
    if result.get("proof_text"):
        lines.append(f"proof: {result['proof_text']}")
    for step in result.get("explode", []):
        indent = "  " * step["depth"]
        refs = f" [{', '.join(map(str, step['args']))}]" if step["args"] else ""
        lines.append(f"{step['index']:>3} {indent}{step['rule']}{refs} "
                     f"⊢ {step['goal']}")
    _emit(runtime, result, "\n".join(lines))


@main.command()
@click.argument("decl")
@pass_runtime
def explode(runtime: Runtime, decl: str):
    """Render a declaration's proof term as indexed steps."""
    result = _run_kernel_cmd(runtime, "explode", {"name": decl})
    lines = []
    for step in result["steps"]:
        indent = "  " * step["depth"]
        refs = f" [{', '.join(map(str, step['args']))}]" if step["args"] else ""
        lines.append(f"{step['index']:>3} {indent}{step['rule']}{refs} "
                     f"⊢ {step['goal']}")
    _emit(runtime, result, "\n".join(lines))


@main.command()
@click.argument("decl")
@pass_runtime
def info(runtime: Runtime, decl: str):
    """Kind, type, and documentation of a declaration."""
    result = _run_kernel_cmd(runtime, "get_decl_info", {"name": decl})
    doc = result.get("doc") or "(no documentation)"
    _emit(runtime, result,
          f"{result['kind']} {result['name']} : {result['type']}\n{doc}")


if __name__ == "__main__":
    main()
