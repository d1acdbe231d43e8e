"""The evaluation engine: blank-pattern matching, user rewrite rules,
evaluation contexts, and the innermost repeat-to-fixpoint driver with a
step budget.

Argument evaluation is suppressed for expressions whose outer head symbol
holds its arguments (`Hold`, `Inactive`, `Function`, `SetDelayed`, ...).
After arguments are evaluated, user rules apply in definition order
(request context first, then the global context), then built-ins.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from .expr import App, CasError, CasExpr, MStr, Sym, app

HOLD_HEADS = frozenset({
    "Hold", "Inactive", "Function", "SetDelayed", "Set",
    "Pattern", "Blank", "Failure", "SVGImage",
})


class StepBudgetExceeded(CasError):
    pass


def head_symbol(e: CasExpr) -> Optional[str]:
    """Name of the outermost spine head, if it is a symbol."""
    while isinstance(e, App):
        e = e.head
    return e.name if isinstance(e, Sym) else None


def failure(reason: str) -> App:
    return app("Failure", MStr(reason))


def is_failure(e: CasExpr) -> bool:
    return isinstance(e, App) and e.head == Sym("Failure")


# --- pattern matching ---------------------------------------------------------

def match(pattern: CasExpr, e: CasExpr,
          bindings: Optional[dict[str, CasExpr]] = None
          ) -> Optional[dict[str, CasExpr]]:
    """Structural match with named blanks; nonlinear occurrences must agree.
    Returns the binding map or None."""
    if bindings is None:
        bindings = {}
    match pattern:
        case App(Sym("Pattern"), (Sym(name), sub)):
            inner = match(sub, e, bindings)
            if inner is None:
                return None
            if name in inner and inner[name] != e:
                return None
            inner[name] = e
            return inner
        case App(Sym("Blank"), ()):
            return bindings
        case App(phead, pargs):
            if not isinstance(e, App) or len(pargs) != len(e.args):
                return None
            out = match(phead, e.head, bindings)
            if out is None:
                return None
            for p_arg, e_arg in zip(pargs, e.args):
                out = match(p_arg, e_arg, out)
                if out is None:
                    return None
            return out
        case _:
            return bindings if pattern == e else None


def substitute(e: CasExpr, bindings: dict[str, CasExpr]) -> CasExpr:
    match e:
        case Sym(name) if name in bindings:
            return bindings[name]
        case App(head, args):
            return App(substitute(head, bindings),
                       tuple(substitute(a, bindings) for a in args))
        case _:
            return e


def pattern_names(e: CasExpr) -> set[str]:
    match e:
        case App(Sym("Pattern"), (Sym(name), sub)):
            return {name} | pattern_names(sub)
        case App(head, args):
            out = pattern_names(head)
            for a in args:
                out |= pattern_names(a)
            return out
        case _:
            return set()


@dataclass(frozen=True)
class RewriteRule:
    lhs: CasExpr
    rhs: CasExpr
    scope: str = "global"

    def __post_init__(self) -> None:
        unbound = pattern_names(self.rhs) - pattern_names(self.lhs)
        if unbound:
            raise ValueError(f"rhs pattern variables not bound: {unbound}")


_ctx_counter = itertools.count()


class EvalContext:
    """An ordered rule list with an optional parent (the global context)."""

    def __init__(self, ctx_id: Optional[str] = None,
                 parent: Optional["EvalContext"] = None):
        self.id = ctx_id if ctx_id is not None else f"ctx{next(_ctx_counter)}"
        self.parent = parent
        self.rules: list[RewriteRule] = []
        self._lock = threading.Lock()

    def add_rule(self, lhs: CasExpr, rhs: CasExpr) -> None:
        with self._lock:
            self.rules.append(RewriteRule(lhs, rhs, scope=self.id))

    def clear(self) -> None:
        with self._lock:
            self.rules.clear()

    def chain(self) -> list["EvalContext"]:
        out: list[EvalContext] = [self]
        if self.parent is not None:
            out.extend(self.parent.chain())
        return out


Builtin = Callable[["EvalState", App], Optional[CasExpr]]


@dataclass
class EvalState:
    engine: "Engine"
    ctx: EvalContext
    steps_left: int

    def tick(self) -> None:
        self.steps_left -= 1
        if self.steps_left < 0:
            raise StepBudgetExceeded("rewrite step budget exhausted")

    def eval(self, e: CasExpr) -> CasExpr:
        return self.engine._eval(e, self)


class Engine:
    def __init__(self, step_budget: int = 100_000):
        self.step_budget = step_budget
        self.builtins: dict[str, Builtin] = {}
        self.global_context = EvalContext("global")
        self.known_symbols: set[str] = set(HOLD_HEADS) | {
            "True", "False", "Null", "List", "Rule",
        }
        from . import builtins as _core
        _core.install(self)

    def register_builtin(self, name: str, fn: Builtin) -> None:
        self.builtins[name] = fn
        self.known_symbols.add(name)

    def fresh_context(self) -> EvalContext:
        return EvalContext(parent=self.global_context)

    def evaluate(self, e: CasExpr, ctx: Optional[EvalContext] = None,
                 budget: Optional[int] = None) -> CasExpr:
        state = EvalState(self, ctx if ctx is not None else self.global_context,
                          budget if budget is not None else self.step_budget)
        return self._eval(e, state)

    def activate(self, e: CasExpr, ctx: Optional[EvalContext] = None) -> CasExpr:
        """Strip Inactive wrappers, then evaluate."""
        return self.evaluate(strip_inactive(e), ctx=ctx)

    # evaluation core

    def _eval(self, e: CasExpr, state: EvalState) -> CasExpr:
        while True:
            state.tick()
            if isinstance(e, App):
                outer = head_symbol(e)
                if outer in HOLD_HEADS:
                    candidate = e
                else:
                    head = self._eval(e.head, state) if isinstance(e.head, App) \
                        else e.head
                    candidate = App(head, tuple(self._eval(a, state)
                                                for a in e.args))
                rewritten = self._rewrite_once(candidate, state)
                if rewritten is None:
                    return candidate
                e = rewritten
            else:
                rewritten = self._rewrite_once(e, state)
                if rewritten is None:
                    return e
                e = rewritten

    def user_rewrite(self, state: EvalState, e: CasExpr) -> Optional[CasExpr]:
        """One application of the first matching user rule, if any."""
        for ctx in state.ctx.chain():
            with ctx._lock:
                rules = list(ctx.rules)
            for rule in rules:
                bindings = match(rule.lhs, e)
                if bindings is not None:
                    return substitute(rule.rhs, bindings)
        return None

    def _rewrite_once(self, e: CasExpr, state: EvalState) -> Optional[CasExpr]:
        rewritten = self.user_rewrite(state, e)
        if rewritten is not None:
            return rewritten
        if isinstance(e, App):
            # beta: applying a pure function to arguments
            match e.head:
                case App(Sym("Function"), (Sym(s), body)) if len(e.args) == 1:
                    return substitute(body, {s: e.args[0]})
                case _:
                    pass
            outer = head_symbol(e)
            if outer is not None and outer in self.builtins:
                result = self.builtins[outer](state, e)
                if result is not None and result != e:
                    return result
        return None


def strip_inactive(e: CasExpr) -> CasExpr:
    match e:
        case App(App(Sym("Inactive"), (inner_head,)), args):
            return App(strip_inactive(inner_head),
                       tuple(strip_inactive(a) for a in args))
        case App(Sym("Inactive"), (inner,)):
            return strip_inactive(inner)
        case App(head, args):
            return App(strip_inactive(head),
                       tuple(strip_inactive(a) for a in args))
        case _:
            return e
