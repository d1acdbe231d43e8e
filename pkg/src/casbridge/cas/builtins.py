"""Core built-in heads: exact arithmetic with canonical flatten/sort/fold
for the variadic heads, comparisons, logic, assignment, activation, and
the mathematical operations (Factor, LUDecomposition, FindInstance, ...)."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .expr import (
    App,
    CasExpr,
    MInt,
    MReal,
    MStr,
    Sym,
    app,
    as_fraction,
    canonical_order_key,
    is_number,
    numeric_value,
    rational,
)
from .engine import Engine, EvalState, failure, strip_inactive

TRUE = Sym("True")
FALSE = Sym("False")
NULL = Sym("Null")


def _flatten(name: str, args: tuple[CasExpr, ...]) -> list[CasExpr]:
    out: list[CasExpr] = []
    for a in args:
        if isinstance(a, App) and a.head == Sym(name):
            out.extend(_flatten(name, a.args))
        else:
            out.append(a)
    return out


def _fold_numbers(args: list[CasExpr], mul: bool) -> tuple[Optional[CasExpr], list[CasExpr]]:
    numbers = [a for a in args if is_number(a)]
    rest = [a for a in args if not is_number(a)]
    if not numbers:
        return None, rest
    if any(isinstance(n, MReal) for n in numbers):
        acc = 1.0 if mul else 0.0
        for n in numbers:
            acc = acc * float(numeric_value(n)) if mul else acc + float(numeric_value(n))
        return MReal(acc), rest
    acc_f = Fraction(1) if mul else Fraction(0)
    for n in numbers:
        acc_f = acc_f * as_fraction(n) if mul else acc_f + as_fraction(n)
    return rational(acc_f), rest


def _plus(state: EvalState, e: App) -> Optional[CasExpr]:
    args = _flatten("Plus", e.args)
    num, rest = _fold_numbers(args, mul=False)
    out = list(rest)
    if num is not None and numeric_value(num) != 0:
        out.append(num)
    if not out:
        return MInt(0)
    out.sort(key=canonical_order_key)
    if len(out) == 1:
        return out[0]
    result = App(Sym("Plus"), tuple(out))
    return None if result == e else result


def _times(state: EvalState, e: App) -> Optional[CasExpr]:
    args = _flatten("Times", e.args)
    num, rest = _fold_numbers(args, mul=True)
    if num is not None and numeric_value(num) == 0:
        return MInt(0)
    out = list(rest)
    if num is not None and numeric_value(num) != 1:
        out.append(num)
    if not out:
        return MInt(1)
    out.sort(key=canonical_order_key)
    if len(out) == 1:
        return out[0]
    result = App(Sym("Times"), tuple(out))
    return None if result == e else result


_POW_LIMIT = 4096


def _power(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 2:
        return None
    base, exp = e.args
    if isinstance(exp, MInt):
        if exp.value == 0:
            return MInt(1)
        if exp.value == 1:
            return base
        if is_number(base) and abs(exp.value) <= _POW_LIMIT:
            if isinstance(base, MReal):
                try:
                    return MReal(base.value ** exp.value)
                except (OverflowError, ZeroDivisionError):
                    return failure("Power: numeric overflow")
            b = as_fraction(base)
            if b == 0 and exp.value < 0:
                return failure("Power: division by zero")
            return rational(b ** exp.value)
    if isinstance(exp, MReal) and is_number(base):
        try:
            return MReal(float(numeric_value(base)) ** exp.value)
        except (OverflowError, ValueError, ZeroDivisionError):
            return failure("Power: numeric error")
    return None


def _subtract(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 2:
        return None
    a, b = e.args
    return app("Plus", a, app("Times", MInt(-1), b))


def _minus(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 1:
        return None
    return app("Times", MInt(-1), e.args[0])


def _divide(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 2:
        return None
    a, b = e.args
    if is_number(a) and is_number(b):
        if isinstance(a, MReal) or isinstance(b, MReal):
            bv = float(numeric_value(b))
            if bv == 0.0:
                return failure("Divide: division by zero")
            return MReal(float(numeric_value(a)) / bv)
        bf = as_fraction(b)
        if bf == 0:
            return failure("Divide: division by zero")
        return rational(as_fraction(a) / bf)
    return app("Times", a, app("Power", b, MInt(-1)))


def _rational(state: EvalState, e: App) -> Optional[CasExpr]:
    match e.args:
        case (MInt(n), MInt(d)):
            if d == 0:
                return failure("Rational: zero denominator")
            norm = rational(Fraction(n, d))
            return None if norm == e else norm
        case _:
            return None


_REL_OPS = {
    "Equal": lambda a, b: a == b,
    "Less": lambda a, b: a < b,
    "LessEqual": lambda a, b: a <= b,
    "Greater": lambda a, b: a > b,
    "GreaterEqual": lambda a, b: a >= b,
}


def _relation(name: str):
    op = _REL_OPS[name]

    def run(state: EvalState, e: App) -> Optional[CasExpr]:
        if len(e.args) < 2:
            return None
        if all(is_number(a) for a in e.args):
            vals = [numeric_value(a) for a in e.args]
            ok = all(op(vals[i], vals[i + 1]) for i in range(len(vals) - 1))
            return TRUE if ok else FALSE
        if name == "Equal" and all(a == e.args[0] for a in e.args):
            return TRUE
        return None

    return run


def _and(state: EvalState, e: App) -> Optional[CasExpr]:
    out = []
    for a in _flatten("And", e.args):
        if a == FALSE:
            return FALSE
        if a != TRUE:
            out.append(a)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    result = App(Sym("And"), tuple(out))
    return None if result == e else result


def _or(state: EvalState, e: App) -> Optional[CasExpr]:
    out = []
    for a in _flatten("Or", e.args):
        if a == TRUE:
            return TRUE
        if a != FALSE:
            out.append(a)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    result = App(Sym("Or"), tuple(out))
    return None if result == e else result


def _not(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 1:
        return None
    if e.args[0] == TRUE:
        return FALSE
    if e.args[0] == FALSE:
        return TRUE
    return None


def _set(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 2:
        return failure("Set expects lhs and rhs")
    lhs, rhs = e.args
    value = state.eval(rhs)
    state.ctx.add_rule(lhs, value)
    return value


def _set_delayed(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 2:
        return failure("SetDelayed expects lhs and rhs")
    lhs, rhs = e.args
    try:
        state.ctx.add_rule(lhs, rhs)
    except ValueError as exc:
        return failure(f"SetDelayed: {exc}")
    return NULL


def _activate(state: EvalState, e: App) -> Optional[CasExpr]:
    if len(e.args) != 1:
        return None
    return strip_inactive(e.args[0])


def _part(state: EvalState, e: App) -> Optional[CasExpr]:
    match e.args:
        case (App(Sym("List"), items), MInt(i)):
            if 1 <= i <= len(items):
                return items[i - 1]
            return failure("Part: index out of range")
        case _:
            return None


def _factor(state: EvalState, e: App) -> Optional[CasExpr]:
    from .poly import NotAPolynomial, UnsupportedShape, factor_cas

    if len(e.args) != 1:
        return None
    try:
        result = factor_cas(e.args[0])
    except NotAPolynomial:
        return None
    except UnsupportedShape as exc:
        return failure(f"Factor: {exc}")
    return result


def _expand(state: EvalState, e: App) -> Optional[CasExpr]:
    from .poly import NotAPolynomial, UnsupportedShape, expand_cas

    if len(e.args) != 1:
        return None
    try:
        result = expand_cas(e.args[0])
    except (NotAPolynomial, UnsupportedShape):
        return None
    return result


def _lu(state: EvalState, e: App) -> Optional[CasExpr]:
    from .matrix import NotSquare, ZeroPivot, lu_decompose_cas

    if len(e.args) != 1:
        return None
    try:
        return lu_decompose_cas(e.args[0])
    except (NotSquare, ZeroPivot) as exc:
        return failure(f"LUDecomposition: {exc}")
    except Exception:
        return None


def _find_instance(state: EvalState, e: App) -> Optional[CasExpr]:
    from .linear import UnsupportedFragment, find_instance_cas

    if len(e.args) not in (2, 3):
        return None
    try:
        return find_instance_cas(e.args[0], e.args[1])
    except UnsupportedFragment as exc:
        return failure(f"FindInstance: {exc}")


def _farkas_certificate(state: EvalState, e: App) -> Optional[CasExpr]:
    from .linear import UnsupportedFragment, lp_certificate_cas

    if len(e.args) != 2:
        return None
    try:
        return lp_certificate_cas(e.args[0], e.args[1])
    except UnsupportedFragment as exc:
        return failure(f"FarkasCertificate: {exc}")


def _solve(state: EvalState, e: App) -> Optional[CasExpr]:
    from .solve import UnsupportedSystem, solve_cas

    if len(e.args) not in (2, 3):
        return None
    try:
        return solve_cas(e.args[0], e.args[1], values_only=False)
    except UnsupportedSystem as exc:
        return failure(f"Solve: {exc}")


def _solve_values(state: EvalState, e: App) -> Optional[CasExpr]:
    from .solve import UnsupportedSystem, solve_cas

    if len(e.args) not in (2, 3):
        return None
    try:
        return solve_cas(e.args[0], e.args[1], values_only=True)
    except UnsupportedSystem as exc:
        return failure(f"SolveValues: {exc}")


def _plot(state: EvalState, e: App) -> Optional[CasExpr]:
    from .plot import EvalError, plot_svg

    if len(e.args) != 3:
        return None
    try:
        lo = as_fraction(e.args[1])
        hi = as_fraction(e.args[2])
        svg = plot_svg(state, e.args[0], lo, hi)
    except EvalError as exc:
        return failure(f"Plot: {exc}")
    except Exception as exc:
        return failure(f"Plot: {exc}")
    return app("SVGImage", MStr(svg))


def install(engine: Engine) -> None:
    engine.register_builtin("Plus", _plus)
    engine.register_builtin("Times", _times)
    engine.register_builtin("Power", _power)
    engine.register_builtin("Subtract", _subtract)
    engine.register_builtin("Minus", _minus)
    engine.register_builtin("Divide", _divide)
    engine.register_builtin("Rational", _rational)
    for name in _REL_OPS:
        engine.register_builtin(name, _relation(name))
    engine.register_builtin("And", _and)
    engine.register_builtin("Or", _or)
    engine.register_builtin("Not", _not)
    engine.register_builtin("Set", _set)
    engine.register_builtin("SetDelayed", _set_delayed)
    engine.register_builtin("Activate", _activate)
    engine.register_builtin("Part", _part)
    engine.register_builtin("Factor", _factor)
    engine.register_builtin("Expand", _expand)
    engine.register_builtin("LUDecomposition", _lu)
    engine.register_builtin("FindInstance", _find_instance)
    engine.register_builtin("FarkasCertificate", _farkas_certificate)
    engine.register_builtin("Solve", _solve)
    engine.register_builtin("SolveValues", _solve_values)
    engine.register_builtin("Plot", _plot)
