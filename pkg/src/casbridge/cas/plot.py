"""Minimal deterministic function plotter: 256 uniform samples rendered
as an SVG polyline."""

from __future__ import annotations

from fractions import Fraction

from .engine import EvalState
from .expr import (
    App,
    CasError,
    CasExpr,
    Sym,
    is_number,
    numeric_value,
    rational,
)

SAMPLES = 256
WIDTH, HEIGHT, PAD = 400, 300, 10


class EvalError(CasError):
    pass


def _free_symbols(e: CasExpr, known: set[str]) -> set[str]:
    match e:
        case Sym(name):
            return set() if name in known else {name}
        case App(head, args):
            out = _free_symbols(head, known)
            for a in args:
                out |= _free_symbols(a, known)
            return out
        case _:
            return set()


def _substitute_sym(e: CasExpr, name: str, value: CasExpr) -> CasExpr:
    match e:
        case Sym(n) if n == name:
            return value
        case App(head, args):
            return App(_substitute_sym(head, name, value),
                       tuple(_substitute_sym(a, name, value) for a in args))
        case _:
            return e


def plot_svg(state: EvalState, f: CasExpr, lo: Fraction, hi: Fraction) -> str:
    """Sample `f` (a Function or an expression with at most one free
    symbol) uniformly on [lo, hi] and draw the polyline."""
    if lo >= hi:
        raise EvalError("empty interval")
    match f:
        case App(Sym("Function"), (Sym(s), body)):
            var, body = s, body
        case _:
            free = sorted(_free_symbols(f, state.engine.known_symbols))
            if len(free) > 1:
                raise EvalError(f"more than one free symbol: {free}")
            var = free[0] if free else None
            body = f
    ys: list[float] = []
    for i in range(SAMPLES):
        x = lo + (hi - lo) * Fraction(i, SAMPLES - 1)
        sample = body if var is None else _substitute_sym(body, var, rational(x))
        value = state.eval(sample)
        if not is_number(value):
            raise EvalError(f"not a number at sample {i}")
        ys.append(float(numeric_value(value)))
    y_min, y_max = min(ys), max(ys)
    span = (y_max - y_min) or 1.0
    points = []
    for i, y in enumerate(ys):
        px = PAD + (WIDTH - 2 * PAD) * i / (SAMPLES - 1)
        py = HEIGHT - PAD - (HEIGHT - 2 * PAD) * (y - y_min) / span
        points.append(f"{px:.2f},{py:.2f}")
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>'
        f'<polyline fill="none" stroke="#1f6feb" stroke-width="1.5" '
        f'points="{" ".join(points)}"/></svg>'
    )
