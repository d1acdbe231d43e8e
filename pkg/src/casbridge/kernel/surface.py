"""Infix surface syntax for kernel pre-expressions.

This is the syntax accepted by REPL antiquotations and the tactic
subcommands: arithmetic over `+ - * / ^`, comparisons, the logical
connectives `&& || !`, lambda binders (`fun x, body`), and juxtaposition
for application. Unknown identifiers become free local constants of type
`real` (shared within one parse), known names resolve to constants.
"""

from __future__ import annotations

import re
from typing import Optional

from .env import Environment
from .expr import (
    BinderInfo,
    Expr,
    KernelError,
    Lam,
    LocalConst,
    Name,
    NatNumeral,
    Pi,
    abstract,
    fresh_local,
    lift,
    mk_app,
    mk_const,
)

TOKEN = re.compile(r"""
    (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(\.[A-Za-z_][A-Za-z0-9_']*)*)
  | (?P<op><=|>=|==|!=|&&|\|\||->|[-+*/^()=<>!,:λ∧∨¬])
  | (?P<ws>\s+)
""", re.VERBOSE)

_CMP = {"=": "eq", "==": "eq", "!=": "ne", "<": "lt", "<=": "le",
        ">": "gt", ">=": "ge"}


class SurfaceSyntaxError(KernelError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at {pos})")
        self.pos = pos


def _lex(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if m is None:
            raise SurfaceSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    return out


class _Parser:
    """Precedence-climbing parser producing pre-expressions."""

    def __init__(self, text: str, env: Optional[Environment],
                 free: Optional[dict[str, LocalConst]] = None,
                 free_type: Optional[Expr] = None):
        self.tokens = _lex(text)
        self.pos = 0
        self.env = env
        self.free: dict[str, LocalConst] = free if free is not None else {}
        self.free_type = free_type or mk_const("real")
        self.bound: list[tuple[str, LocalConst]] = []

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise SurfaceSyntaxError("unexpected end of input", len(self.tokens))
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.next()
        if tok[1] != text:
            raise SurfaceSyntaxError(f"expected {text!r}, got {tok[1]!r}", tok[2])

    def parse(self) -> Expr:
        e = self.expr(0)
        if self.peek() is not None:
            raise SurfaceSyntaxError(f"trailing input {self.peek()[1]!r}",
                                     self.peek()[2])
        return e

    # precedence table: || 14, && 16, comparisons 20, + - 30, * / 40, ^ 50
    def expr(self, min_prec: int) -> Expr:
        lhs = self.unary()
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op":
                return lhs
            op = tok[1]
            entry = _BINOPS.get(op)
            if entry is None or entry[0] < min_prec:
                return lhs
            prec, right_assoc, const = entry
            self.next()
            rhs = self.expr(prec if right_assoc else prec + 1)
            if const == "_arrow":
                lhs = Pi(Name(("h",)), BinderInfo.DEFAULT, lhs, lift(rhs, 1))
            else:
                lhs = mk_app(mk_const(const), lhs, rhs)

    def unary(self) -> Expr:
        tok = self.peek()
        if tok is not None and tok[1] == "-":
            self.next()
            return mk_app(mk_const("neg"), self.unary())
        if tok is not None and tok[1] in ("!", "¬"):
            self.next()
            return mk_app(mk_const("not"), self.unary())
        return self.application()

    def application(self) -> Expr:
        head = self.atom()
        args = []
        while True:
            tok = self.peek()
            if tok is None or tok[0] == "op" and tok[1] != "(":
                break
            if tok[0] in ("num", "ident") or tok[1] == "(":
                args.append(self.atom())
            else:
                break
        return mk_app(head, *args) if args else head

    def atom(self) -> Expr:
        kind, text, pos = self.next()
        if kind == "num":
            return NatNumeral(int(text))
        if text == "(":
            e = self.expr(0)
            self.expect(")")
            return e
        if kind == "ident" or text == "λ":
            if text in ("fun", "λ"):
                return self.lambda_tail()
            return self.identifier(text, pos)
        raise SurfaceSyntaxError(f"unexpected token {text!r}", pos)

    def lambda_tail(self) -> Expr:
        kind, name, pos = self.next()
        if kind != "ident":
            raise SurfaceSyntaxError("expected binder name", pos)
        btype: Expr = self.free_type
        if self.peek() is not None and self.peek()[1] == ":":
            self.next()
            tk, tname, tpos = self.next()
            if tk != "ident":
                raise SurfaceSyntaxError("expected type name", tpos)
            btype = self.identifier(tname, tpos)
        self.expect(",")
        local = fresh_local(name, btype)
        self.bound.append((name, local))
        body = self.expr(0)
        self.bound.pop()
        return Lam(local.pretty, BinderInfo.DEFAULT, btype,
                   abstract(body, local))

    def identifier(self, text: str, pos: int) -> Expr:
        for bname, local in reversed(self.bound):
            if bname == text:
                return local
        if self.env is not None and text in self.env:
            return mk_const(text)
        if "." in text:
            raise SurfaceSyntaxError(f"unknown constant {text!r}", pos)
        if text not in self.free:
            self.free[text] = fresh_local(text, self.free_type)
        return self.free[text]


_BINOPS: dict[str, tuple[int, bool, str]] = {
    "||": (14, True, "or"),
    "&&": (16, True, "and"),
    "∨": (14, True, "or"),
    "∧": (16, True, "and"),
    "->": (12, True, "_arrow"),
    "=": (20, False, "eq"),
    "==": (20, False, "eq"),
    "!=": (20, False, "ne"),
    "<": (20, False, "lt"),
    "<=": (20, False, "le"),
    ">": (20, False, "gt"),
    ">=": (20, False, "ge"),
    "+": (30, False, "add"),
    "-": (30, False, "sub"),
    "*": (40, False, "mul"),
    "/": (40, False, "div"),
    "^": (50, True, "pow_nat"),
}


def parse_preexpr(text: str, env: Optional[Environment] = None,
                  free: Optional[dict[str, LocalConst]] = None,
                  free_type: Optional[Expr] = None) -> Expr:
    """Parse surface syntax into a pre-expression. `free` (name -> local)
    is shared and extended across calls so `x` means the same variable in
    every hypothesis of one tactic invocation."""
    return _Parser(text, env, free, free_type).parse()
