"""Lossless reflection of kernel expressions into algebra-engine syntax:
one head symbol per expression constructor, nothing stripped, so decoding
an unmodified reflection recovers the original expression exactly."""

from __future__ import annotations

from ..cas.expr import App as CApp
from ..cas.expr import CasError, CasExpr, MInt, MStr, Sym, app, list_expr
from ..kernel.expr import (
    App,
    BinderInfo,
    Const,
    Expr,
    Lam,
    Let,
    Level,
    LevelLit,
    LevelParam,
    LocalConst,
    MVar,
    Name,
    Pi,
    Sort,
    Var,
)


class MalformedReflection(CasError):
    def __init__(self, message: str, subtree: CasExpr | None = None):
        super().__init__(message)
        self.subtree = subtree


_BINFO_STR = {
    BinderInfo.DEFAULT: "default",
    BinderInfo.IMPLICIT: "implicit",
    BinderInfo.INST_IMPLICIT: "inst",
}
# "bi" appears as a default-binder placeholder in reflected examples
_STR_BINFO = {"default": BinderInfo.DEFAULT, "implicit": BinderInfo.IMPLICIT,
              "inst": BinderInfo.INST_IMPLICIT, "bi": BinderInfo.DEFAULT}


def _reflect_level(level: Level) -> CasExpr:
    if isinstance(level, LevelLit):
        return MInt(level.n)
    return app("LeanLevelParam", MStr(level.name))


def _decode_level(e: CasExpr) -> Level:
    match e:
        case MInt(n) if n >= 0:
            return LevelLit(n)
        case CApp(Sym("LeanLevelParam"), (MStr(p),)):
            return LevelParam(p)
        case _:
            raise MalformedReflection("bad universe level", e)


def reflect(e: Expr) -> CasExpr:
    """Constructor-homomorphic encoding of a kernel expression."""
    match e:
        case Var(i):
            return app("LeanVar", MInt(i))
        case Sort(level):
            return app("LeanSort", _reflect_level(level))
        case Const(name, levels):
            return app("LeanConst", MStr(str(name)),
                       list_expr(*[_reflect_level(l) for l in levels]))
        case MVar(name, t):
            return app("LeanMVar", MStr(str(name)), reflect(t))
        case LocalConst(unique, pretty, binfo, t):
            return app("LeanLocal", MStr(str(unique)), MStr(str(pretty)),
                       MStr(_BINFO_STR[binfo]), reflect(t))
        case App(f, a):
            return app("LeanApp", reflect(f), reflect(a))
        case Lam(n, bi, t, b):
            return app("LeanLambda", MStr(str(n)), MStr(_BINFO_STR[bi]),
                       reflect(t), reflect(b))
        case Pi(n, bi, t, b):
            return app("LeanPi", MStr(str(n)), MStr(_BINFO_STR[bi]),
                       reflect(t), reflect(b))
        case Let(n, t, v, b):
            return app("LeanLet", MStr(str(n)), reflect(t), reflect(v),
                       reflect(b))
        case _:
            raise CasError(f"cannot reflect pre-expression node {e!r}")


def _binfo(e: CasExpr) -> BinderInfo:
    match e:
        case MStr(s) if s in _STR_BINFO:
            return _STR_BINFO[s]
        case _:
            raise MalformedReflection("bad binder info", e)


def _name(e: CasExpr) -> Name:
    match e:
        case MStr(s):
            try:
                return Name.of(s)
            except ValueError as exc:
                raise MalformedReflection(f"bad name: {exc}", e) from exc
        case _:
            raise MalformedReflection("expected a name string", e)


def decode_reflection(e: CasExpr) -> Expr:
    """Exact inverse of `reflect`."""
    match e:
        case CApp(Sym("LeanVar"), (MInt(i),)) if i >= 0:
            return Var(i)
        case CApp(Sym("LeanSort"), (level,)):
            return Sort(_decode_level(level))
        case CApp(Sym("LeanConst"), (name, CApp(Sym("List"), levels))):
            return Const(_name(name), tuple(_decode_level(l) for l in levels))
        case CApp(Sym("LeanMVar"), (name, t)):
            return MVar(_name(name), decode_reflection(t))
        case CApp(Sym("LeanLocal"), (unique, pretty, binfo, t)):
            return LocalConst(_name(unique), _name(pretty), _binfo(binfo),
                              decode_reflection(t))
        case CApp(Sym("LeanApp"), (f, a)):
            return App(decode_reflection(f), decode_reflection(a))
        case CApp(Sym("LeanLambda"), (n, binfo, t, b)):
            return Lam(_name(n), _binfo(binfo), decode_reflection(t),
                       decode_reflection(b))
        case CApp(Sym("LeanPi"), (n, binfo, t, b)):
            return Pi(_name(n), _binfo(binfo), decode_reflection(t),
                      decode_reflection(b))
        case CApp(Sym("LeanLet"), (n, t, v, b)):
            return Let(_name(n), decode_reflection(t), decode_reflection(v),
                       decode_reflection(b))
        case _:
            raise MalformedReflection("not a reflected kernel expression", e)
