"""Translation of propositional proof terms into the engine-side proof
calculus: AndIntro, OrIntroLeft, OrElim, ImpIntro/ImpElim, Hyp, and
friends, so the algebra side receives a pure expression it can process."""

from __future__ import annotations

import itertools

from ..cas.expr import CasExpr, Sym, app
from ..kernel.expr import (
    Const,
    Expr,
    KernelError,
    Lam,
    LocalConst,
    app_spine,
    fresh_local,
    instantiate,
)


class UnsupportedProofConstant(KernelError):
    pass


# constant name -> (total argument count, proof arguments kept, head symbol)
_CALCULUS = {
    "and.intro": (4, 2, "AndIntro"),
    "and.elim_left": (3, 1, "AndElimLeft"),
    "and.elim_right": (3, 1, "AndElimRight"),
    "or.inl": (3, 1, "OrIntroLeft"),
    "or.inr": (3, 1, "OrIntroRight"),
    "or.elim": (6, 3, "OrElim"),
    "false.elim": (2, 1, "FalseElim"),
    "true.intro": (0, 0, "TrueIntro"),
}


def to_cas_calculus(proof: Expr) -> CasExpr:
    """Map a checked propositional proof term onto the engine calculus;
    anything outside the propositional fragment is rejected."""
    counter = itertools.count()
    names: dict = {}

    def walk(term: Expr) -> CasExpr:
        match term:
            case LocalConst(unique, _, _, _):
                if unique not in names:
                    raise UnsupportedProofConstant(
                        f"free hypothesis {unique} outside any binder")
                return app("Hyp", Sym(names[unique]))
            case Lam(n, _, ty, body):
                hyp_name = f"h{next(counter)}"
                local = fresh_local(n, ty)
                names[local.unique] = hyp_name
                inner = walk(instantiate(body, local))
                return app("ImpIntro", Sym(hyp_name), inner)
            case _:
                pass
        head, args = app_spine(term)
        if isinstance(head, Const):
            name = str(head.name)
            entry = _CALCULUS.get(name)
            if entry is None:
                raise UnsupportedProofConstant(name)
            total, keep, target = entry
            if len(args) < total:
                raise UnsupportedProofConstant(
                    f"{name} applied to {len(args)} arguments, expected {total}")
            out: CasExpr = app(target,
                               *[walk(a) for a in args[total - keep:total]])
            # an eliminated hypothesis applied further is modus ponens
            for extra in args[total:]:
                out = app("ImpElim", out, walk(extra))
            return out
        if isinstance(head, LocalConst):
            out: CasExpr = walk(head)
            for a in args:
                out = app("ImpElim", out, walk(a))
            return out
        raise UnsupportedProofConstant(f"unsupported proof node {head!r}")

    return walk(proof)
