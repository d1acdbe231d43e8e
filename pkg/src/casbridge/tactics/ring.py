"""Ring-normalization equality: both sides are converted to canonical
polynomials over their free local constants and compared exactly. This is
the trusted checker behind the factoring pipeline."""

from __future__ import annotations

from ..cas.expr import MStr
from ..cas.poly import Poly
from ..kernel.elaborate import type_check
from ..kernel.env import Environment
from ..kernel.expr import (
    App,
    Const,
    Expr,
    LevelLit,
    LocalConst,
    app_spine,
    mk_app,
    mk_const,
)
from ..kernel.numerals import NotANumeral, numeral_decode
from .results import RingNormalizationFailed, VerifiedResult

# generic arithmetic constants: name -> number of trailing explicit args
_RING_OPS = {"add": 2, "mul": 2, "sub": 2, "div": 2, "neg": 1, "pow_nat": 2}


def ring_poly(e: Expr) -> Poly:
    """Canonical polynomial of an elaborated arithmetic expression;
    variables are keyed by the unique names of the local constants."""
    try:
        return Poly.const(numeral_decode(e))
    except NotANumeral:
        pass
    if isinstance(e, LocalConst):
        return Poly.var(MStr(str(e.unique)))
    head, args = app_spine(e)
    if isinstance(head, Const):
        name = str(head.name)
        n = _RING_OPS.get(name)
        if n is not None and len(args) >= n:
            operands = args[len(args) - n:]
            if name == "add":
                return ring_poly(operands[0]) + ring_poly(operands[1])
            if name == "mul":
                return ring_poly(operands[0]) * ring_poly(operands[1])
            if name == "sub":
                return ring_poly(operands[0]) - ring_poly(operands[1])
            if name == "neg":
                return -ring_poly(operands[0])
            if name == "div":
                divisor = ring_poly(operands[1])
                if not divisor.is_const() or not divisor.const_value():
                    raise RingNormalizationFailed(
                        "unable to simplify: division by a non-constant",
                        stage="ring")
                return ring_poly(operands[0]).scale(1 / divisor.const_value())
            if name == "pow_nat":
                try:
                    exponent = numeral_decode(operands[1])
                except NotANumeral:
                    raise RingNormalizationFailed(
                        "unable to simplify: non-numeral exponent",
                        stage="ring") from None
                return ring_poly(operands[0]) ** exponent
    raise RingNormalizationFailed(
        f"unable to simplify: non-ring operation {head!r}", stage="ring")


def eq_statement(env: Environment, l: Expr, r: Expr) -> Expr:
    carrier = type_check(env, l)
    return mk_app(Const(mk_const("eq").name, (LevelLit(0),)), carrier, l, r)


def eq_by_ring(env: Environment, l: Expr, r: Expr) -> VerifiedResult:
    """Succeeds iff both sides share one canonical polynomial form."""
    pl = ring_poly(l)
    pr = ring_poly(r)
    if pl != pr:
        raise RingNormalizationFailed("unable to simplify", stage="ring")
    return VerifiedResult(eq_statement(env, l, r), method="ring")
