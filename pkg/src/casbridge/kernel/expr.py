"""Kernel expression trees: hierarchical names, universe levels, binders,
and de Bruijn manipulation (lift / instantiate / abstract).

Expressions are immutable values; structural equality is definitional
equality for everything this package needs outside the type checker.
Pre-expressions share the same node types and additionally may contain
``NatNumeral`` and ``Placeholder`` nodes, which elaboration removes.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

_NAME_COMPONENT = re.compile(r"[^.]+$")


class KernelError(Exception):
    """Base class for kernel-side failures."""


@dataclass(frozen=True)
class Name:
    """Hierarchical name; rendered with `.` between components, so the
    components themselves must be dot-free and non-empty."""

    components: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("empty name")
        for c in self.components:
            if not c or not _NAME_COMPONENT.match(c):
                raise ValueError(f"bad name component: {c!r}")

    @staticmethod
    def of(text: str | Name) -> Name:
        if isinstance(text, Name):
            return text
        return Name(tuple(text.split(".")))

    def __str__(self) -> str:
        return ".".join(self.components)

    def __repr__(self) -> str:
        return f"Name({str(self)!r})"


@dataclass(frozen=True)
class LevelLit:
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative universe literal")


@dataclass(frozen=True)
class LevelParam:
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("empty level parameter name")


Level = Union[LevelLit, LevelParam]


class BinderInfo(Enum):
    DEFAULT = "default"
    IMPLICIT = "implicit"
    INST_IMPLICIT = "inst"


class Expr:
    """Base class for expression nodes. Subclasses are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    index: int


@dataclass(frozen=True)
class Sort(Expr):
    level: Level


@dataclass(frozen=True)
class Const(Expr):
    name: Name
    levels: tuple[Level, ...] = ()


@dataclass(frozen=True)
class MVar(Expr):
    name: Name
    type: Expr


@dataclass(frozen=True)
class LocalConst(Expr):
    unique: Name
    pretty: Name
    binfo: BinderInfo
    type: Expr


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True)
class Lam(Expr):
    binder: Name
    binfo: BinderInfo
    type: Expr
    body: Expr


@dataclass(frozen=True)
class Pi(Expr):
    binder: Name
    binfo: BinderInfo
    type: Expr
    body: Expr


@dataclass(frozen=True)
class Let(Expr):
    binder: Name
    type: Expr
    value: Expr
    body: Expr


@dataclass(frozen=True)
class NatNumeral(Expr):
    """Pre-expression node for an untyped nonnegative integer literal."""

    value: int

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("NatNumeral must be nonnegative")


@dataclass(frozen=True)
class Placeholder(Expr):
    """Pre-expression node for an argument to be inferred."""


PRE_ONLY_NODES = (NatNumeral, Placeholder)


def mk_const(name: str | Name, levels: tuple[Level, ...] = ()) -> Const:
    return Const(Name.of(name), levels)


def mk_app(fn: Expr, *args: Expr) -> Expr:
    for a in args:
        fn = App(fn, a)
    return fn


def app_spine(e: Expr) -> tuple[Expr, list[Expr]]:
    """Decompose nested applications into (head, [arg1 .. argn])."""
    args: list[Expr] = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fn
    args.reverse()
    return e, args


_local_counter = itertools.count()


def fresh_local(pretty: str | Name, type: Expr,
                binfo: BinderInfo = BinderInfo.DEFAULT) -> LocalConst:
    """Make a local constant whose unique name cannot collide with any
    other fresh local in this process."""
    p = Name.of(pretty)
    unique = Name(("_fresh", str(next(_local_counter)), *p.components))
    return LocalConst(unique, p, binfo, type)


def lift(e: Expr, by: int, cutoff: int = 0) -> Expr:
    """Shift loose de Bruijn indices >= cutoff upward by `by`."""
    if by == 0:
        return e
    match e:
        case Var(k):
            return Var(k + by) if k >= cutoff else e
        case App(f, a):
            return App(lift(f, by, cutoff), lift(a, by, cutoff))
        case Lam(n, bi, t, b):
            return Lam(n, bi, lift(t, by, cutoff), lift(b, by, cutoff + 1))
        case Pi(n, bi, t, b):
            return Pi(n, bi, lift(t, by, cutoff), lift(b, by, cutoff + 1))
        case Let(n, t, v, b):
            return Let(n, lift(t, by, cutoff), lift(v, by, cutoff),
                       lift(b, by, cutoff + 1))
        case MVar(n, t):
            return MVar(n, lift(t, by, cutoff))
        case LocalConst(u, p, bi, t):
            return LocalConst(u, p, bi, lift(t, by, cutoff))
        case _:
            return e


def instantiate(body: Expr, replacement: Expr, depth: int = 0) -> Expr:
    """Substitute `replacement` for Var(depth), decrementing deeper loose
    indices; free variables of `replacement` are lifted past the binders
    crossed on the way down."""
    match body:
        case Var(k):
            if k == depth:
                return lift(replacement, depth)
            if k > depth:
                return Var(k - 1)
            return body
        case App(f, a):
            return App(instantiate(f, replacement, depth),
                       instantiate(a, replacement, depth))
        case Lam(n, bi, t, b):
            return Lam(n, bi, instantiate(t, replacement, depth),
                       instantiate(b, replacement, depth + 1))
        case Pi(n, bi, t, b):
            return Pi(n, bi, instantiate(t, replacement, depth),
                      instantiate(b, replacement, depth + 1))
        case Let(n, t, v, b):
            return Let(n, instantiate(t, replacement, depth),
                       instantiate(v, replacement, depth),
                       instantiate(b, replacement, depth + 1))
        case MVar(n, t):
            return MVar(n, instantiate(t, replacement, depth))
        case LocalConst(u, p, bi, t):
            return LocalConst(u, p, bi, instantiate(t, replacement, depth))
        case _:
            return body


def abstract(e: Expr, local: LocalConst, depth: int = 0) -> Expr:
    """Replace occurrences of `local` (matched by unique name) with the
    bound variable for the binder at `depth` binders above."""
    match e:
        case LocalConst(u, _, _, _) if u == local.unique:
            return Var(depth)
        case Var(k):
            return Var(k + 1) if k >= depth else e
        case App(f, a):
            return App(abstract(f, local, depth), abstract(a, local, depth))
        case Lam(n, bi, t, b):
            return Lam(n, bi, abstract(t, local, depth),
                       abstract(b, local, depth + 1))
        case Pi(n, bi, t, b):
            return Pi(n, bi, abstract(t, local, depth),
                      abstract(b, local, depth + 1))
        case Let(n, t, v, b):
            return Let(n, abstract(t, local, depth),
                       abstract(v, local, depth),
                       abstract(b, local, depth + 1))
        case MVar(n, t):
            return MVar(n, abstract(t, local, depth))
        case LocalConst(u, p, bi, t):
            return LocalConst(u, p, bi, abstract(t, local, depth))
        case _:
            return e
