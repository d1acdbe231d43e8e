"""Interactive sessions: antiquotation resolution, REPL commands,
mm-block files, and notebook cells.

A command is a sequence of algebra-engine source fragments and kernel
antiquotations. Antiquotes are parsed against the prelude, elaborated,
reflected, wrapped in `Activate[LeanForm[...]]`, and spliced into the
surrounding command, which is then evaluated over the link. Results are
back-translated and pretty-printed whenever the registry succeeds,
otherwise shown in engine syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .bridge.backtrans import (
    NoApplicableRule,
    RuleRegistry,
    TransEnv,
    default_registry,
    pexpr_of_mmexpr,
)
from .bridge.reflect import reflect
from .cas.expr import App as CApp
from .cas.expr import CasError, CasExpr, MStr, Sym, app, from_wire, render
from .cas.parser import parse as cas_parse
from .kernel.elaborate import ElaborationFailure, TypeMismatch, elaborate
from .kernel.env import Environment
from .kernel.expr import (
    App,
    Const,
    Expr,
    KernelError,
    Lam,
    Let,
    LocalConst,
    MVar,
    Pi,
    app_spine,
    mk_app,
)
from .kernel.pretty import pretty
from .kernel.surface import parse_preexpr
from .link.client import InProcessLink, Link
from .link.protocol import Response

_BLOCK_RE = re.compile(
    r"begin_mm_block(?P<params>[^\n]*)\n(?P<body>.*?)end_mm_block",
    re.DOTALL)


class SessionError(KernelError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


@dataclass
class CommandOutput:
    text: str
    display: str = "text"
    image_svg: Optional[str] = None
    result: Optional[CasExpr] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class MmCommand:
    segments: tuple[Union[str, "KernelSegment"], ...]
    as_image: bool = False


@dataclass(frozen=True)
class KernelSegment:
    source: str


@dataclass(frozen=True)
class MmBlock:
    unfolding: tuple[str, ...]
    commands: tuple[MmCommand, ...]


def unfold_definitions(env: Environment, e: Expr, names: Sequence[str]) -> Expr:
    """Replace named definitions by their bodies and reduce the redexes so
    the algebra side can see through them."""
    targets = {n for n in names}

    def subst(t: Expr) -> Expr:
        match t:
            case Const(name, _) if str(name) in targets:
                decl = env.get(name)
                if decl is not None and decl.value is not None:
                    return decl.value
                return t
            case App(f, a):
                return App(subst(f), subst(a))
            case Lam(n, bi, ty, b):
                return Lam(n, bi, subst(ty), subst(b))
            case Pi(n, bi, ty, b):
                return Pi(n, bi, subst(ty), subst(b))
            case Let(n, ty, v, b):
                return Let(n, subst(ty), subst(v), subst(b))
            case MVar(n, ty):
                return MVar(n, subst(ty))
            case LocalConst(u, p, bi, ty):
                return LocalConst(u, p, bi, subst(ty))
            case _:
                return t

    return _beta(subst(e))


def _beta(e: Expr) -> Expr:
    from .kernel.expr import instantiate

    head, args = app_spine(e)
    while isinstance(head, Lam) and args:
        head = instantiate(head.body, args[0])
        args = args[1:]
        head, extra = app_spine(head)
        args = extra + args
    out = head
    match out:
        case Lam(n, bi, t, b):
            out = Lam(n, bi, _beta(t), _beta(b))
        case Pi(n, bi, t, b):
            out = Pi(n, bi, _beta(t), _beta(b))
        case _:
            pass
    for a in args:
        out = App(out, _beta(a))
    return out


class Session:
    """One interactive session: a prelude environment, a translation
    registry, a link to the algebra engine, and the shared free-variable
    table that keeps `x` meaning the same local across commands."""

    def __init__(self, env: Optional[Environment] = None,
                 link: Optional[Link] = None,
                 registry: Optional[RuleRegistry] = None):
        from .kernel.env import load_prelude

        self.env = env if env is not None else load_prelude()
        self.link = link if link is not None else InProcessLink()
        self.registry = registry if registry is not None else default_registry()
        self.free: dict[str, LocalConst] = {}

    # --- antiquotation ---------------------------------------------------

    def resolve_antiquote(self, source: str,
                          unfolding: Sequence[str] = ()) -> CasExpr:
        try:
            pre = parse_preexpr(source, self.env, self.free)
            e = elaborate(self.env, pre)
        except (KernelError, ElaborationFailure, TypeMismatch) as exc:
            raise SessionError("elaborate", str(exc)) from exc
        if unfolding:
            e = unfold_definitions(self.env, e, unfolding)
        return app("Activate", app("LeanForm", reflect(e)))

    def build_command(self, command: MmCommand,
                      unfolding: Sequence[str] = ()) -> CasExpr:
        parts: list[Union[str, CasExpr]] = []
        for seg in command.segments:
            if isinstance(seg, KernelSegment):
                parts.append(self.resolve_antiquote(seg.source, unfolding))
            else:
                parts.append(seg)
        try:
            return cas_parse(parts)
        except CasError as exc:
            raise SessionError("parse", str(exc)) from exc

    # --- execution -------------------------------------------------------

    def run_command(self, command: MmCommand,
                    unfolding: Sequence[str] = ()) -> CommandOutput:
        try:
            expr = self.build_command(command, unfolding)
            response = self.link.request("eval", render(expr))
        except SessionError as exc:
            return CommandOutput(text=str(exc), error=str(exc))
        return self._output_of(response, command.as_image)

    def run_source(self, source: str, as_image: bool = False) -> CommandOutput:
        """A REPL line: double-quoted segments are kernel antiquotes."""
        try:
            command = parse_repl_command(source, as_image=as_image)
        except SessionError as exc:
            return CommandOutput(text=str(exc), error=str(exc))
        return self.run_command(command)

    def _output_of(self, response: Response, want_image: bool) -> CommandOutput:
        if not response.ok:
            message = f"[eval] {response.error}"
            return CommandOutput(text=message, error=message)
        result = from_wire(response.result)
        if response.display == "image" and response.image_svg:
            return CommandOutput(text="[image]", display="image",
                                 image_svg=response.image_svg, result=result)
        if want_image:
            message = "[display] command did not produce an image"
            return CommandOutput(text=message, error=message, result=result)
        return CommandOutput(text=self.display_result(result), result=result)

    def display_result(self, result: CasExpr) -> str:
        """Back-translate when possible, engine syntax otherwise."""
        match result:
            case CApp(Sym("Failure"), (MStr(reason),)):
                return f"[failure] {reason}"
            case _:
                pass
        try:
            pexpr = pexpr_of_mmexpr(self.registry, TransEnv(), result)
            e = elaborate(self.env, pexpr)
            return pretty(self.env, e)
        except (NoApplicableRule, ElaborationFailure, TypeMismatch,
                KernelError, CasError):
            return render(result)


# --- command and block parsing -----------------------------------------------

def split_quoted(source: str) -> list[Union[str, KernelSegment]]:
    """Alternate text/antiquote segments on double quotes (REPL form:
    quoted segments are the kernel expressions)."""
    parts = source.split('"')
    out: list[Union[str, KernelSegment]] = []
    for i, part in enumerate(parts):
        if i % 2 == 0:
            out.append(part)
        else:
            out.append(KernelSegment(part))
    if len(parts) % 2 == 0:
        raise SessionError("parse", "unbalanced quotes in command")
    return out


def parse_repl_command(source: str, as_image: bool = False) -> MmCommand:
    stripped = source.strip()
    if stripped.startswith("as image"):
        as_image = True
        stripped = stripped[len("as image"):].strip()
    segments = split_quoted(stripped)
    # a command that is exactly one quoted string is a plain engine
    # command, not an antiquotation
    if len(segments) == 3 and segments[0] == "" and segments[2] == "" \
            and isinstance(segments[1], KernelSegment):
        return MmCommand((segments[1].source,), as_image)
    return MmCommand(tuple(segments), as_image)


def parse_mm_blocks(text: str) -> list[MmBlock]:
    """Extract `begin_mm_block ... end_mm_block` regions from a file. In
    block files the quoted segments are engine source and the bare
    in-between segments are kernel antiquotes (the dual of the REPL)."""
    blocks = []
    for m in _BLOCK_RE.finditer(text):
        params = m.group("params").strip()
        unfolding: tuple[str, ...] = ()
        if params:
            pm = re.match(r"\(\s*unfolding\s+([^)]*)\)", params)
            if not pm:
                raise SessionError("parse", f"bad block parameters {params!r}")
            unfolding = tuple(pm.group(1).split())
        commands = []
        for chunk in _split_commands(m.group("body")):
            command = _parse_block_command(chunk)
            if command is not None:
                commands.append(command)
        blocks.append(MmBlock(unfolding, tuple(commands)))
    if not blocks:
        raise SessionError("parse", "no mm blocks found")
    return blocks


def _split_commands(body: str) -> list[str]:
    chunks = []
    current = []
    in_string = False
    for ch in body:
        if ch == '"':
            in_string = not in_string
            current.append(ch)
        elif ch == ";" and not in_string:
            chunks.append("".join(current))
            current = []
        else:
            current.append(ch)
    tail = "".join(current).strip()
    if tail:
        chunks.append(tail)
    return [c.strip() for c in chunks if c.strip()]


def _parse_block_command(chunk: str) -> Optional[MmCommand]:
    as_image = False
    if chunk.startswith("as image"):
        as_image = True
        chunk = chunk[len("as image"):].strip()
    parts = chunk.split('"')
    if len(parts) % 2 == 0:
        raise SessionError("parse", f"unbalanced quotes in command {chunk!r}")
    segments: list[Union[str, KernelSegment]] = []
    for i, part in enumerate(parts):
        if i % 2 == 1:
            segments.append(part)  # quoted: engine source
        elif part.strip():
            segments.append(KernelSegment(part.strip()))  # bare: antiquote
    if not segments:
        return None
    return MmCommand(tuple(segments), as_image)


def run_mm_block(session: Session, block: MmBlock) -> list[CommandOutput]:
    """Evaluate the block's commands in order; later commands still run
    when earlier ones fail."""
    outputs = []
    for command in block.commands:
        outputs.append(session.run_command(command,
                                           unfolding=block.unfolding))
    return outputs
