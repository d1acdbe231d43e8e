"""Contraction-free intuitionistic proof search producing kernel proof
terms. Invertible rules are applied eagerly; the only backtracking points
are disjunction goals and the nested-implication left rule. Termination
follows from the calculus's decreasing weight; a defensive depth cap
guards against regressions."""

from __future__ import annotations

from typing import Optional

from ..kernel.expr import (
    App,
    BinderInfo,
    Expr,
    Lam,
    LocalConst,
    abstract,
    fresh_local,
    mk_app,
    mk_const,
)
from .formula import (
    And,
    Atom,
    AtomTable,
    FalseProp,
    Implies,
    Or,
    PropFormula,
    kernel_of_formula,
)

_DEPTH_CAP = 10_000

Hyp = tuple[PropFormula, Expr]


class _Search:
    def __init__(self, atoms: AtomTable):
        self.atoms = atoms

    def k(self, f: PropFormula) -> Expr:
        return kernel_of_formula(f, self.atoms)

    def intro(self, f: PropFormula, name: str = "h") -> LocalConst:
        return fresh_local(name, self.k(f))

    def lam(self, local: LocalConst, body: Expr) -> Expr:
        return Lam(local.pretty, BinderInfo.DEFAULT, local.type,
                   abstract(body, local))

    def prove(self, ctx: list[Hyp], goal: PropFormula,
              depth: int) -> Optional[Expr]:
        if depth > _DEPTH_CAP:
            return None
        depth += 1
        # invertible right rules
        match goal:
            case And(a, b):
                ta = self.prove(ctx, a, depth)
                if ta is None:
                    return None
                tb = self.prove(ctx, b, depth)
                if tb is None:
                    return None
                return mk_app(mk_const("and.intro"), self.k(a), self.k(b),
                              ta, tb)
            case Implies(a, b):
                h = self.intro(a)
                body = self.prove(ctx + [(a, h)], b, depth)
                if body is None:
                    return None
                return self.lam(h, body)
            case _:
                pass
        # invertible left rules, first applicable hypothesis
        for i, (f, t) in enumerate(ctx):
            rest = ctx[:i] + ctx[i + 1:]
            match f:
                case FalseProp():
                    return mk_app(mk_const("false.elim"), self.k(goal), t)
                case And(a, b):
                    ha = mk_app(mk_const("and.elim_left"), self.k(a),
                                self.k(b), t)
                    hb = mk_app(mk_const("and.elim_right"), self.k(a),
                                self.k(b), t)
                    return self.prove(rest + [(a, ha), (b, hb)], goal, depth)
                case Or(a, b):
                    ha = self.intro(a)
                    ta = self.prove(rest + [(a, ha)], goal, depth)
                    if ta is None:
                        return None
                    hb = self.intro(b)
                    tb = self.prove(rest + [(b, hb)], goal, depth)
                    if tb is None:
                        return None
                    return mk_app(mk_const("or.elim"), self.k(a), self.k(b),
                                  self.k(goal), t,
                                  self.lam(ha, ta), self.lam(hb, tb))
                case Implies(FalseProp(), _):
                    return self.prove(rest, goal, depth)
                case Implies(And(c, d), b):
                    curried = Implies(c, Implies(d, b))
                    hc = self.intro(c)
                    hd = self.intro(d)
                    term = self.lam(hc, self.lam(hd, App(t, mk_app(
                        mk_const("and.intro"), self.k(c), self.k(d),
                        hc, hd))))
                    return self.prove(rest + [(curried, term)], goal, depth)
                case Implies(Or(c, d), b):
                    hc = self.intro(c)
                    left = self.lam(hc, App(t, mk_app(
                        mk_const("or.inl"), self.k(c), self.k(d), hc)))
                    hd = self.intro(d)
                    right = self.lam(hd, App(t, mk_app(
                        mk_const("or.inr"), self.k(c), self.k(d), hd)))
                    return self.prove(
                        rest + [(Implies(c, b), left), (Implies(d, b), right)],
                        goal, depth)
                case Implies(Atom(p), b):
                    witness = next((tt for ff, tt in rest
                                    if ff == Atom(p)), None)
                    if witness is not None:
                        return self.prove(rest + [(b, App(t, witness))],
                                          goal, depth)
                case _:
                    pass
        # choice points
        match goal:
            case Atom(_):
                for f, t in ctx:
                    if f == goal:
                        return t
            case Or(a, b):
                ta = self.prove(ctx, a, depth)
                if ta is not None:
                    return mk_app(mk_const("or.inl"), self.k(a), self.k(b), ta)
                tb = self.prove(ctx, b, depth)
                if tb is not None:
                    return mk_app(mk_const("or.inr"), self.k(a), self.k(b), tb)
            case _:
                pass
        for i, (f, t) in enumerate(ctx):
            match f:
                case Implies(Implies(c, d), b):
                    rest = ctx[:i] + ctx[i + 1:]
                    hd = self.intro(d)
                    hc = self.intro(c)
                    # D -> B from the nested hypothesis
                    k_term = self.lam(hd, App(t, self.lam(hc, hd)))
                    t1 = self.prove(rest + [(Implies(d, b), k_term)],
                                    Implies(c, d), depth)
                    if t1 is None:
                        continue
                    t2 = self.prove(rest + [(b, App(t, t1))], goal, depth)
                    if t2 is not None:
                        return t2
                case _:
                    pass
        return None


def intuit(f: PropFormula, atoms: Optional[AtomTable] = None
           ) -> Optional[Expr]:
    """A type-checking proof term for an intuitionistic tautology, or None
    when the formula is not provable."""
    table = atoms if atoms is not None else AtomTable()
    return _Search(table).prove([], f, 0)
