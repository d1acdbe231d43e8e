"""The semantic interpretation pass on reflected expressions: rewrite
known constant applications into native algebra-engine heads (inactivated
to block eager simplification), decode numerals, turn lambda binders into
pure functions with an environment of fresh symbols, and leave everything
else untouched so the back-translation can restore it.

Installed as the `LeanForm` / `LeanConvert` built-ins; users extend the
pass by defining ordinary rewrite rules on `LeanForm[...]`, which are
consulted before the built-in table at every node.
"""

from __future__ import annotations

from typing import Callable, Optional

from ..cas.engine import Engine, EvalState, failure
from ..cas.expr import App, CasError, CasExpr, MInt, MStr, Sym, app


class BinderDepthError(CasError):
    pass


def _inactive(head: str, *args: CasExpr) -> CasExpr:
    return App(app("Inactive", Sym(head)), tuple(args))


def _numeral(state: EvalState, built: CasExpr) -> CasExpr:
    return state.eval(built)


# constant name -> (spine length, explicit args kept, builder)
Builder = Callable[[EvalState, list[CasExpr]], CasExpr]


def _table() -> dict[str, tuple[int, int, Builder]]:
    def inact(head: str) -> Builder:
        return lambda state, args: _inactive(head, *args)

    def plain(head: str) -> Builder:
        return lambda state, args: app(head, *args)

    return {
        "add": (4, 2, inact("Plus")),
        "mul": (4, 2, inact("Times")),
        "sub": (4, 2, inact("Subtract")),
        "div": (4, 2, inact("Divide")),
        "pow_nat": (4, 2, inact("Power")),
        "neg": (3, 1, inact("Minus")),
        "eq": (3, 2, inact("Equal")),
        "ne": (3, 2, inact("Unequal")),
        "lt": (4, 2, inact("Less")),
        "le": (4, 2, inact("LessEqual")),
        "gt": (4, 2, inact("Greater")),
        "ge": (4, 2, inact("GreaterEqual")),
        "and": (2, 2, inact("And")),
        "or": (2, 2, inact("Or")),
        "not": (1, 1, inact("Not")),
        "iff": (2, 2, inact("Equivalent")),
        "zero": (2, 0, lambda state, args: MInt(0)),
        "one": (2, 0, lambda state, args: MInt(1)),
        "bit0": (3, 1, lambda state, args: _numeral(
            state, app("Times", MInt(2), args[0]))),
        "bit1": (4, 1, lambda state, args: _numeral(
            state, app("Plus", app("Times", MInt(2), args[0]), MInt(1)))),
        # the propositional proof calculus
        "and.intro": (4, 2, plain("AndIntro")),
        "and.elim_left": (3, 1, plain("AndElimLeft")),
        "and.elim_right": (3, 1, plain("AndElimRight")),
        "or.inl": (3, 1, plain("OrIntroLeft")),
        "or.inr": (3, 1, plain("OrIntroRight")),
        "or.elim": (6, 3, plain("OrElim")),
        "false.elim": (2, 1, plain("FalseElim")),
    }


LEANFORM_TABLE = _table()


def _spine(e: CasExpr) -> tuple[CasExpr, list[CasExpr]]:
    """Unravel nested LeanApp nodes into (base, args)."""
    args: list[CasExpr] = []
    while True:
        match e:
            case App(Sym("LeanApp"), (f, a)):
                args.append(a)
                e = f
            case _:
                args.reverse()
                return e, args


class _LeanFormPass:
    def __init__(self, state: EvalState):
        self.state = state
        self.counter = 0

    def fresh_sym(self) -> Sym:
        s = Sym(f"s{self.counter}")
        self.counter += 1
        return s

    def run(self, e: CasExpr, env: list[CasExpr]) -> CasExpr:
        rewritten = self._user_rule(e, env)
        if rewritten is not None:
            return rewritten
        match e:
            case App(Sym("LeanVar"), (MInt(i),)):
                if i >= len(env):
                    raise BinderDepthError(
                        f"bound variable {i} exceeds binder depth {len(env)}")
                return env[i]
            case App(Sym("LeanLambda"), (MStr(_), MStr(_), _, body)):
                s = self.fresh_sym()
                return app("Function", s, self.run(body, [s] + env))
            case App(Sym("LeanApp"), _):
                return self._spine_case(e, env)
            case _:
                return e

    def _user_rule(self, e: CasExpr, env: list[CasExpr]) -> Optional[CasExpr]:
        probe = app("LeanForm", e, app("List", *env)) if env \
            else app("LeanForm", e)
        hit = self.state.engine.user_rewrite(self.state, probe)
        if hit is None and env:
            hit = self.state.engine.user_rewrite(self.state,
                                                 app("LeanForm", e))
        if hit is None:
            return None
        return self.state.eval(hit)

    def _spine_case(self, e: CasExpr, env: list[CasExpr]) -> CasExpr:
        base, args = _spine(e)
        match base:
            case App(Sym("LeanConst"), (MStr(name), _)):
                entry = LEANFORM_TABLE.get(name)
                if entry is not None:
                    arity, keep, build = entry
                    if len(args) == arity:
                        kept = [self.run(a, env) for a in
                                (args[arity - keep:] if keep else [])]
                        return build(self.state, kept)
        # no interpretation: rebuild the application spine, still
        # translating the argument positions underneath
        out = base
        for a in args:
            out = app("LeanApp", out, self.run(a, env))
        return out


def install(engine: Engine) -> None:
    def lean_form_builtin(state: EvalState, e: App) -> Optional[CasExpr]:
        if len(e.args) == 1:
            target, env_list = e.args[0], []
        elif len(e.args) == 2:
            match e.args[1]:
                case App(Sym("List"), syms):
                    target, env_list = e.args[0], list(syms)
                case _:
                    return failure("LeanForm: second argument must be a list")
        else:
            return None
        try:
            return _LeanFormPass(state).run(target, env_list)
        except BinderDepthError as exc:
            return failure(f"LeanForm: {exc}")

    def lean_convert_builtin(state: EvalState, e: App) -> Optional[CasExpr]:
        if len(e.args) != 1:
            return None
        return app("LeanForm", e.args[0])

    engine.register_builtin("LeanForm", lean_form_builtin)
    engine.register_builtin("LeanConvert", lean_convert_builtin)
    for head in ("AndIntro", "AndElimLeft", "AndElimRight", "OrIntroLeft",
                 "OrIntroRight", "OrElim", "FalseElim", "ImpIntro", "ImpElim",
                 "Hyp", "SVGImage", "LeanVar", "LeanSort", "LeanConst",
                 "LeanMVar", "LeanLocal", "LeanApp", "LeanLambda", "LeanPi",
                 "LeanLet", "LeanLevelParam"):
        engine.known_symbols.add(head)


def lean_form(engine: Engine, e: CasExpr,
              env: Optional[list[CasExpr]] = None,
              ctx=None) -> CasExpr:
    """Run the interpretation pass directly (python-level entry point)."""
    call = app("LeanForm", e, app("List", *env)) if env else app("LeanForm", e)
    return engine.evaluate(call, ctx=ctx)
