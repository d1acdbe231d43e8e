"""Rendering kernel expressions: standard notation with implicit arguments
hidden, plus a bare prefix form for pre-expressions."""

from __future__ import annotations

from typing import Optional

from .env import Environment
from .expr import (
    App,
    BinderInfo,
    Const,
    Expr,
    Lam,
    Let,
    LevelLit,
    LocalConst,
    MVar,
    NatNumeral,
    Pi,
    Placeholder,
    Sort,
    Var,
    app_spine,
    fresh_local,
    instantiate,
)
from .numerals import NotANumeral, numeral_decode

# (symbol, precedence, kind, tight); kind: "inl"/"inr" associativity;
# tight operators print without surrounding spaces (`2*x`, `x^2`)
_NOTATION = {
    "iff": ("↔", 20, "inl", False),
    "or": ("∨", 25, "inr", False),
    "and": ("∧", 30, "inr", False),
    "eq": ("=", 50, "inl", False),
    "ne": ("≠", 50, "inl", False),
    "lt": ("<", 50, "inl", False),
    "le": ("≤", 50, "inl", False),
    "gt": (">", 50, "inl", False),
    "ge": ("≥", 50, "inl", False),
    "add": ("+", 65, "inl", False),
    "sub": ("-", 65, "inl", False),
    "mul": ("*", 70, "inl", True),
    "div": ("/", 70, "inl", True),
    "pow_nat": ("^", 80, "inr", True),
}

_PREC_NOT = 40
_PREC_NEG = 75
_PREC_APP = 100
_PREC_BINDER = 5
_PREC_ARROW = 15


def _paren(s: str, prec: int, limit: int) -> str:
    return f"({s})" if prec < limit else s


def pretty(env: Optional[Environment], e: Expr, prec: int = 0) -> str:
    """Standard-notation rendering with implicit arguments hidden."""
    try:
        return str(numeral_decode(e))
    except NotANumeral:
        pass
    match e:
        case Var(i):
            return f"#{i}"
        case Sort(LevelLit(0)):
            return "Prop"
        case Sort(LevelLit(1)):
            return "Type"
        case Sort(level):
            return f"Sort {level!r}"
        case Const(name, _):
            return str(name)
        case MVar(name, _):
            return f"?{name}"
        case LocalConst(_, p, _, _):
            return str(p)
        case NatNumeral(n):
            return str(n)
        case Placeholder():
            return "_"
        case Let(n, _, v, b):
            local = fresh_local(n, Sort(LevelLit(0)))
            body = pretty(env, instantiate(b, local))
            return _paren(f"let {n} := {pretty(env, v)} in {body}",
                          _PREC_BINDER, prec)
        case Lam(n, _, t, b):
            local = fresh_local(n, t)
            body = pretty(env, instantiate(b, local))
            return _paren(f"λ {n} : {pretty(env, t)}, {body}",
                          _PREC_BINDER, prec)
        case Pi(n, _, t, b):
            if _mentions_var0(b):
                local = fresh_local(n, t)
                body = pretty(env, instantiate(b, local))
                return _paren(f"Π {n} : {pretty(env, t)}, {body}",
                              _PREC_BINDER, prec)
            lhs = pretty(env, t, _PREC_ARROW + 1)
            rhs = pretty(env, instantiate(b, fresh_local(n, t)), _PREC_ARROW)
            return _paren(f"{lhs} → {rhs}", _PREC_ARROW, prec)
        case App(_, _):
            return _pretty_app(env, e, prec)
    return repr(e)


def _is_numeric_atom(e: Expr) -> bool:
    from .numerals import is_numeral

    if is_numeral(e):
        return True
    head, args = app_spine(e)
    return (isinstance(head, Const) and str(head.name) == "neg"
            and bool(args) and is_numeral(args[-1]))


def _mentions_var0(b: Expr, depth: int = 0) -> bool:
    match b:
        case Var(k):
            return k == depth
        case App(f, a):
            return _mentions_var0(f, depth) or _mentions_var0(a, depth)
        case Lam(_, _, t, bb) | Pi(_, _, t, bb):
            return _mentions_var0(t, depth) or _mentions_var0(bb, depth + 1)
        case Let(_, t, v, bb):
            return (_mentions_var0(t, depth) or _mentions_var0(v, depth)
                    or _mentions_var0(bb, depth + 1))
        case LocalConst(_, _, _, t) | MVar(_, t):
            return _mentions_var0(t, depth)
        case _:
            return False


def _explicit_args(env: Optional[Environment], head: Const,
                   args: list[Expr]) -> list[Expr]:
    """Drop arguments sitting under implicit binders of the head constant."""
    if env is None:
        return [a for a in args if not isinstance(a, Placeholder)]
    decl = env.get(head.name)
    if decl is None:
        return args
    binfos = []
    t = decl.type
    while isinstance(t, Pi):
        binfos.append(t.binfo)
        t = t.body
    out = []
    for i, a in enumerate(args):
        if i < len(binfos) and binfos[i] != BinderInfo.DEFAULT:
            continue
        if isinstance(a, Placeholder):
            continue
        out.append(a)
    return out


def _pretty_app(env: Optional[Environment], e: Expr, prec: int) -> str:
    head, args = app_spine(e)
    if isinstance(head, Const):
        shown = _explicit_args(env, head, args)
        name = str(head.name)
        if name == "neg" and len(shown) == 1:
            return _paren("-" + pretty(env, shown[0], _PREC_NEG + 1),
                          _PREC_NEG, prec)
        if name == "not" and len(shown) == 1:
            # parenthesize comparisons and connectives under negation
            return _paren("¬" + pretty(env, shown[0], 51),
                          _PREC_NOT, prec)
        if name == "Exists" and len(shown) == 1 and isinstance(shown[0], Lam):
            lam = shown[0]
            local = fresh_local(lam.binder, lam.type)
            body = pretty(env, instantiate(lam.body, local))
            return _paren(f"∃ {lam.binder} : {pretty(env, lam.type)}, {body}",
                          _PREC_BINDER, prec)
        if name in _NOTATION and len(shown) == 2:
            sym, p, kind, tight = _NOTATION[name]
            lhs, rhs = shown
            # numeric summands read better last: add (neg one) x -> x + -1
            if name == "add" and _is_numeric_atom(lhs) and not _is_numeric_atom(rhs):
                lhs, rhs = rhs, lhs
            lp = p if kind == "inl" else p + 1
            rp = p + 1 if kind == "inl" else p
            sep = "" if tight else " "
            s = f"{pretty(env, lhs, lp)}{sep}{sym}{sep}{pretty(env, rhs, rp)}"
            return _paren(s, p, prec)
        if not shown:
            return name
        parts = " ".join(pretty(env, a, _PREC_APP + 1) for a in shown)
        return _paren(f"{name} {parts}", _PREC_APP, prec)
    parts = [pretty(env, head, _PREC_APP + 1)]
    parts += [pretty(env, a, _PREC_APP + 1) for a in args]
    return _paren(" ".join(parts), _PREC_APP, prec)


def prefix_form(e: Expr) -> str:
    """Bare applicative rendering of a pre-expression: placeholders are
    dropped, constants keep their plain names, no notation is used."""
    match e:
        case App(_, _):
            head, args = app_spine(e)
            shown = [a for a in args if not isinstance(a, Placeholder)]
            parts = [prefix_form(head)] + [_prefix_atom(a) for a in shown]
            return " ".join(parts)
        case _:
            return _prefix_atom(e, top=True)


def _prefix_atom(e: Expr, top: bool = False) -> str:
    match e:
        case App(_, _):
            inner = prefix_form(e)
            return inner if top or " " not in inner else f"({inner})"
        case Const(name, _):
            return str(name)
        case LocalConst(_, p, _, _):
            return str(p)
        case Var(i):
            return f"#{i}"
        case NatNumeral(n):
            return str(n)
        case Placeholder():
            return "_"
        case Sort(LevelLit(0)):
            return "Prop"
        case Sort(LevelLit(1)):
            return "Type"
        case Lam(n, _, _, b):
            return f"(λ {n}, {prefix_form(b)})"
        case Pi(n, _, t, b):
            return f"(Π {n} : {prefix_form(t)}, {prefix_form(b)})"
        case _:
            return repr(e)
