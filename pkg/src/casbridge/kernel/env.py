"""Declaration environments and the plain-text prelude format.

A declaration file holds one declaration per line:

    <kind> <name> [{u v ...}] <type-sexp> [:= <value-sexp>] ["doc string"]

where kind is `axiom`, `def`, `theorem` or `trusted`, the optional brace
group names universe parameters, and the s-expression syntax is:

    atom                  bound variable (innermost binder of that name),
                          otherwise a constant reference
    Prop / Type           Sort 0 / Sort 1
    (sort N)              explicit sort
    (pi x BI TYPE BODY)   dependent function type, BI in default/implicit/inst
    (lam x BI TYPE BODY)  abstraction
    (let x TYPE VAL BODY) local definition
    (f a b ...)           application, folded left

References to earlier constants are resolved with their declared universe
arity instantiated at literal level 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Iterable, Optional

from .expr import (
    App,
    BinderInfo,
    Const,
    Expr,
    KernelError,
    Lam,
    Let,
    LevelLit,
    Name,
    Pi,
    Sort,
    Var,
    mk_app,
)


class DeclKind(Enum):
    AXIOM = "axiom"
    DEFINITION = "def"
    THEOREM = "theorem"
    TRUSTED_AXIOM = "trusted"


class DuplicateName(KernelError):
    pass


class UnknownDeclaration(KernelError):
    pass


class PreludeSyntaxError(KernelError):
    pass


@dataclass(frozen=True)
class Declaration:
    name: Name
    kind: DeclKind
    type: Expr
    level_params: tuple[str, ...] = ()
    value: Optional[Expr] = None
    doc: Optional[str] = None

    def __post_init__(self) -> None:
        has_value = self.value is not None
        needs_value = self.kind in (DeclKind.DEFINITION, DeclKind.THEOREM)
        if needs_value and not has_value:
            raise ValueError(f"{self.kind.value} {self.name} needs a value")
        if not needs_value and has_value:
            raise ValueError(f"{self.kind.value} {self.name} cannot carry a value")


class Environment:
    """Ordered name -> declaration mapping with copy-on-extend semantics."""

    def __init__(self, decls: Iterable[Declaration] = ()) -> None:
        self._decls: dict[Name, Declaration] = {}
        self._instances: dict[tuple[str, str], Name] = {}
        for d in decls:
            self._insert(d)

    def _insert(self, decl: Declaration) -> None:
        if decl.name in self._decls:
            raise DuplicateName(str(decl.name))
        self._decls[decl.name] = decl
        # instance constants are recognized by their type shape `cls carrier`
        match decl.type:
            case App(Const(cls, _), Const(carrier, _)):
                self._instances.setdefault((str(cls), str(carrier)), decl.name)
            case _:
                pass

    def insert(self, decl: Declaration) -> Environment:
        """Return a new environment extended with `decl`."""
        new = Environment()
        new._decls = dict(self._decls)
        new._instances = dict(self._instances)
        new._insert(decl)
        return new

    def lookup(self, name: str | Name) -> Declaration:
        key = Name.of(name)
        try:
            return self._decls[key]
        except KeyError:
            raise UnknownDeclaration(str(key)) from None

    def get(self, name: str | Name) -> Optional[Declaration]:
        return self._decls.get(Name.of(name))

    def __contains__(self, name: str | Name) -> bool:
        return Name.of(name) in self._decls

    def __iter__(self):
        return iter(self._decls.values())

    def __len__(self) -> int:
        return len(self._decls)

    def instance_for(self, cls: str, carrier: str) -> Optional[Name]:
        return self._instances.get((cls, carrier))

    def trusted_axioms(self) -> list[Declaration]:
        """Audit listing of every declaration admitted without checking."""
        return [d for d in self._decls.values()
                if d.kind == DeclKind.TRUSTED_AXIOM]


# --- declaration file parsing ------------------------------------------------

def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        elif c == '"':
            j = i + 1
            while j < len(text) and text[j] != '"':
                j += 1
            if j >= len(text):
                raise PreludeSyntaxError("unterminated string")
            tokens.append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


class _SexpReader:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise PreludeSyntaxError("unexpected end of line")
        self.pos += 1
        return tok

    def read(self) -> object:
        tok = self.next()
        if tok == "(":
            items = []
            while self.peek() != ")":
                if self.peek() is None:
                    raise PreludeSyntaxError("unbalanced parentheses")
                items.append(self.read())
            self.next()
            return items
        if tok == ")":
            raise PreludeSyntaxError("unexpected )")
        return tok


_BINFO = {
    "default": BinderInfo.DEFAULT,
    "implicit": BinderInfo.IMPLICIT,
    "inst": BinderInfo.INST_IMPLICIT,
}


def _expr_of_sexp(sexp: object, binders: list[str],
                  arity_of: dict[str, int]) -> Expr:
    if isinstance(sexp, str):
        if sexp == "Prop":
            return Sort(LevelLit(0))
        if sexp == "Type":
            return Sort(LevelLit(1))
        if sexp in binders:
            # innermost binder wins
            return Var(len(binders) - 1 - max(i for i, b in enumerate(binders)
                                              if b == sexp))
        if sexp not in arity_of:
            raise PreludeSyntaxError(f"unknown constant {sexp!r}")
        return Const(Name.of(sexp), (LevelLit(0),) * arity_of[sexp])
    assert isinstance(sexp, list)
    if not sexp:
        raise PreludeSyntaxError("empty ()")
    head = sexp[0]
    if head == "sort":
        if len(sexp) != 2 or not isinstance(sexp[1], str):
            raise PreludeSyntaxError("(sort N)")
        return Sort(LevelLit(int(sexp[1])))
    if head in ("pi", "lam"):
        if len(sexp) != 5:
            raise PreludeSyntaxError(f"({head} x binfo type body)")
        _, x, bi, t, b = sexp
        if bi not in _BINFO:
            raise PreludeSyntaxError(f"bad binder info {bi!r}")
        ty = _expr_of_sexp(t, binders, arity_of)
        body = _expr_of_sexp(b, binders + [x], arity_of)
        ctor = Pi if head == "pi" else Lam
        return ctor(Name.of(x), _BINFO[bi], ty, body)
    if head == "let":
        if len(sexp) != 5:
            raise PreludeSyntaxError("(let x type value body)")
        _, x, t, v, b = sexp
        return Let(Name.of(x),
                   _expr_of_sexp(t, binders, arity_of),
                   _expr_of_sexp(v, binders, arity_of),
                   _expr_of_sexp(b, binders + [x], arity_of))
    parts = [_expr_of_sexp(s, binders, arity_of) for s in sexp]
    return mk_app(parts[0], *parts[1:])


def parse_declarations(text: str) -> list[Declaration]:
    decls: list[Declaration] = []
    arity_of: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            decls.append(_parse_decl_line(line, arity_of))
        except (PreludeSyntaxError, ValueError) as exc:
            raise PreludeSyntaxError(f"line {lineno}: {exc}") from exc
        d = decls[-1]
        arity_of[str(d.name)] = len(d.level_params)
    return decls


def _parse_decl_line(line: str, arity_of: dict[str, int]) -> Declaration:
    reader = _SexpReader(_tokenize(line))
    kind_tok = reader.next()
    try:
        kind = DeclKind(kind_tok)
    except ValueError:
        raise PreludeSyntaxError(f"unknown declaration kind {kind_tok!r}")
    name = Name.of(reader.next())
    level_params: tuple[str, ...] = ()
    if reader.peek() is not None and reader.peek().startswith("{"):
        group = reader.next()
        if not group.endswith("}"):
            raise PreludeSyntaxError("unterminated level parameter group")
        level_params = tuple(p for p in group[1:-1].split() if p)
    type_expr = _expr_of_sexp(reader.read(), [], arity_of)
    value: Optional[Expr] = None
    doc: Optional[str] = None
    if reader.peek() == ":=":
        reader.next()
        value = _expr_of_sexp(reader.read(), [], arity_of)
    tok = reader.peek()
    if tok is not None and tok.startswith('"'):
        doc = reader.next()[1:-1]
    if reader.peek() is not None:
        raise PreludeSyntaxError(f"trailing tokens from {reader.peek()!r}")
    return Declaration(name, kind, type_expr, level_params, value, doc)


def load_prelude(path: Optional[str] = None) -> Environment:
    """Load the bundled prelude, or a declaration file at `path`."""
    if path is None:
        text = (resources.files("casbridge.data") / "prelude.txt").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return Environment(parse_declarations(text))
