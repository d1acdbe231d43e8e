"""Exact evaluation of ground numeral arithmetic and comparisons."""

from __future__ import annotations

from fractions import Fraction

from ..kernel.env import Environment
from ..kernel.expr import Const, Expr, app_spine, mk_app, mk_const
from ..kernel.numerals import NotANumeral, numeral_decode
from .results import NotGround, VerifiedResult

_ARITH = {"add": 2, "mul": 2, "sub": 2, "div": 2, "neg": 1, "pow_nat": 2}
_RELATIONS = {
    "eq": lambda a, b: a == b,
    "ne": lambda a, b: a != b,
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
}


def ground_value(e: Expr) -> Fraction:
    """Exact rational value of a closed arithmetic expression."""
    try:
        return Fraction(numeral_decode(e))
    except NotANumeral:
        pass
    head, args = app_spine(e)
    if isinstance(head, Const):
        name = str(head.name)
        n = _ARITH.get(name)
        if n is not None and len(args) >= n:
            ops = [ground_value(a) for a in args[len(args) - n:]]
            if name == "add":
                return ops[0] + ops[1]
            if name == "mul":
                return ops[0] * ops[1]
            if name == "sub":
                return ops[0] - ops[1]
            if name == "neg":
                return -ops[0]
            if name == "div":
                if not ops[1]:
                    raise NotGround("division by zero", stage="norm_num")
                return ops[0] / ops[1]
            if name == "pow_nat":
                return ops[0] ** int(ops[1])
    raise NotGround(f"not a ground numeral expression: {head!r}",
                    stage="norm_num")


def comparison_parts(e: Expr) -> tuple[str, Expr, Expr]:
    head, args = app_spine(e)
    if isinstance(head, Const) and str(head.name) in _RELATIONS \
            and len(args) >= 2:
        return str(head.name), args[-2], args[-1]
    raise NotGround("not a comparison of two sides", stage="norm_num")


def norm_num_holds(e: Expr) -> bool:
    rel, lhs, rhs = comparison_parts(e)
    return _RELATIONS[rel](ground_value(lhs), ground_value(rhs))


def norm_num(env: Environment, e: Expr) -> VerifiedResult:
    """Verify a ground comparison, or refute it by verifying its negation."""
    if norm_num_holds(e):
        return VerifiedResult(e, method="norm_num")
    return VerifiedResult(mk_app(mk_const("not"), e), method="norm_num")
