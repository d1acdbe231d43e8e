"""Propositional formulas. Negation and bi-implication are sugar: they
desugar at construction so the search and the checker only ever see
atoms, conjunction, disjunction, implication, and falsity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..kernel.elaborate import whnf
from ..kernel.env import Environment
from ..kernel.expr import (
    BinderInfo,
    Const,
    Expr,
    KernelError,
    LocalConst,
    Name,
    Pi,
    Sort,
    LevelLit,
    app_spine,
    fresh_local,
    instantiate,
    lift,
    mk_app,
    mk_const,
)


class UnsupportedFormula(KernelError):
    pass


class PropFormula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(PropFormula):
    name: str


@dataclass(frozen=True)
class And(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True)
class Or(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True)
class Implies(PropFormula):
    left: PropFormula
    right: PropFormula


@dataclass(frozen=True)
class FalseProp(PropFormula):
    pass


FALSE = FalseProp()


def Not(p: PropFormula) -> PropFormula:
    return Implies(p, FALSE)


def Iff(a: PropFormula, b: PropFormula) -> PropFormula:
    return And(Implies(a, b), Implies(b, a))


class AtomTable:
    """Stable atom-name to local-constant mapping for one proving session."""

    def __init__(self, seed: Optional[dict[str, LocalConst]] = None):
        self.locals: dict[str, LocalConst] = dict(seed) if seed else {}

    def local(self, name: str) -> LocalConst:
        if name not in self.locals:
            self.locals[name] = fresh_local(name, Sort(LevelLit(0)))
        return self.locals[name]


def kernel_of_formula(f: PropFormula, atoms: AtomTable) -> Expr:
    match f:
        case Atom(name):
            return atoms.local(name)
        case And(l, r):
            return mk_app(mk_const("and"), kernel_of_formula(l, atoms),
                          kernel_of_formula(r, atoms))
        case Or(l, r):
            return mk_app(mk_const("or"), kernel_of_formula(l, atoms),
                          kernel_of_formula(r, atoms))
        case Implies(l, r):
            return Pi(Name.of("h"), BinderInfo.DEFAULT,
                      kernel_of_formula(l, atoms),
                      lift(kernel_of_formula(r, atoms), 1))
        case FalseProp():
            return mk_const("false")
    raise UnsupportedFormula(f"unknown formula node {f!r}")


def formula_of_kernel(env: Environment, e: Expr,
                      atoms: Optional[AtomTable] = None) -> PropFormula:
    """Read a propositional statement back off its kernel encoding;
    `not` and `iff` applications unfold to their definitions."""
    table = atoms if atoms is not None else AtomTable()

    def conv(t: Expr) -> PropFormula:
        match t:
            case LocalConst(_, pretty, _, Sort(LevelLit(0))):
                table.locals.setdefault(str(pretty), t)
                return Atom(str(pretty))
            case Const(name, _) if str(name) == "false":
                return FALSE
            case Pi(n, _, dom, body):
                opened = instantiate(body, fresh_local(n, dom))
                return Implies(conv(dom), conv(opened))
        head, args = app_spine(t)
        if isinstance(head, Const):
            name = str(head.name)
            if name == "and" and len(args) == 2:
                return And(conv(args[0]), conv(args[1]))
            if name == "or" and len(args) == 2:
                return Or(conv(args[0]), conv(args[1]))
            if name == "not" and len(args) == 1:
                return Not(conv(args[0]))
            if name == "iff" and len(args) == 2:
                return Iff(conv(args[0]), conv(args[1]))
        raise UnsupportedFormula(f"not a propositional statement: {t!r}")

    return conv(whnf(env, e))
