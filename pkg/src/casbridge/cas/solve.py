"""Restricted equation solving: linear systems by Gaussian elimination,
univariate polynomial equations with rational roots, and triangular
systems reducible by back-substitution."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .expr import (
    App,
    CasError,
    CasExpr,
    Sym,
    app,
    rational,
)
from .poly import (
    NotAPolynomial,
    Poly,
    _dense,
    _int_divisors,
    _primitive,
    poly_of_cas,
)


class UnsupportedSystem(CasError):
    pass


class NoSolution(CasError):
    pass


def _equation_poly(e: CasExpr) -> Poly:
    match e:
        case App(Sym("Equal"), (lhs, rhs)):
            try:
                return poly_of_cas(lhs) - poly_of_cas(rhs)
            except NotAPolynomial as exc:
                raise UnsupportedSystem(str(exc)) from exc
        case _:
            raise UnsupportedSystem("expected an equation lhs == rhs")


def _substitute(p: Poly, var: CasExpr, value: Fraction) -> Poly:
    out = Poly()
    for mono, coeff in p.terms.items():
        factor = coeff
        rest: list[tuple[CasExpr, int]] = []
        for v, exp in mono:
            if v == var:
                factor *= value ** exp
            else:
                rest.append((v, exp))
        out = out + Poly({tuple(rest): factor})
    return out


def _rational_roots(p: Poly, var: CasExpr) -> list[Fraction]:
    dense = _dense(p, var)
    if len(dense) <= 1:
        return []
    _, ints = _primitive(dense)
    k = 0
    while ints and ints[0] == 0:
        ints.pop(0)
        k += 1
    roots = [Fraction(0)] if k else []
    if not ints or len(ints) == 1:
        return roots
    for num in _int_divisors(ints[0]):
        for den in _int_divisors(ints[-1]):
            for r in (Fraction(num, den), Fraction(-num, den)):
                if r in roots:
                    continue
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * r + c
                if acc == 0:
                    roots.append(r)
    return roots


def solve_system(equations: list[Poly], variables: list[CasExpr]
                 ) -> Optional[dict[CasExpr, Fraction]]:
    """One rational solution of the system, or None; raises
    UnsupportedSystem outside the decidable fragment."""
    todo = [p for p in equations]
    assignment: dict[CasExpr, Fraction] = {}
    remaining = list(variables)
    guard = len(variables) + len(equations) + 1
    while todo and guard > 0:
        guard -= 1
        todo = [q for p in todo
                if not (q := _apply_assignment(p, assignment)).is_zero()]
        if not todo:
            break
        if any(p.is_const() for p in todo):
            return None  # a nonzero constant equation is unsatisfiable
        if all(p.total_degree() <= 1 for p in todo):
            lin = _solve_linear(todo, [v for v in remaining
                                       if v not in assignment])
            if lin is None:
                return None
            assignment.update(lin)
            todo = []
            break
        prog = False
        for p in todo:
            pvars = [v for v in p.variables() if v not in assignment]
            if len(pvars) == 1:
                roots = _rational_roots(_apply_assignment(p, assignment),
                                        pvars[0])
                if not roots:
                    raise UnsupportedSystem(
                        "univariate equation with no rational root")
                assignment[pvars[0]] = roots[0]
                prog = True
                break
        if not prog:
            raise UnsupportedSystem("system is not triangular")
    for v in variables:
        assignment.setdefault(v, Fraction(0))
    for p in equations:
        if not _apply_assignment(p, assignment).is_zero():
            return None
    return assignment


def _apply_assignment(p: Poly, assignment: dict[CasExpr, Fraction]) -> Poly:
    for v, val in assignment.items():
        p = _substitute(p, v, val)
    return p


def _solve_linear(equations: list[Poly], variables: list[CasExpr]
                  ) -> Optional[dict[CasExpr, Fraction]]:
    rows = []
    for p in equations:
        row = []
        const = Fraction(0)
        cmap: dict[CasExpr, Fraction] = {}
        for mono, c in p.terms.items():
            if mono == ():
                const = c
            else:
                (v, e), = mono
                if e != 1:
                    return None
                cmap[v] = cmap.get(v, Fraction(0)) + c
        row = [cmap.get(v, Fraction(0)) for v in variables] + [-const]
        rows.append(row)
    n = len(variables)
    pivots: list[tuple[int, int]] = []
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        rows[rank] = [v / rows[rank][col] for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        pivots.append((rank, col))
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][-1] != 0:
            return None
    # free variables in underdetermined systems default to zero, so each
    # pivot variable is just the reduced right-hand side
    solution = {v: Fraction(0) for v in variables}
    for r, col in pivots:
        solution[variables[col]] = rows[r][-1]
    return solution


def _list_items(e: CasExpr) -> list[CasExpr]:
    match e:
        case App(Sym("List"), items):
            return list(items)
        case _:
            return [e]


def solve_cas(equations: CasExpr, variables: CasExpr,
              values_only: bool) -> CasExpr:
    """Engine entry point. `Solve` yields `{{x -> v, ...}}`; `SolveValues`
    does the rule-to-value projection before anything crosses the wire."""
    eq_items = _list_items(equations)
    var_items = _list_items(variables)
    polys = [_equation_poly(e) for e in eq_items]
    solution = solve_system(polys, var_items)
    if solution is None:
        return app("List")
    if values_only:
        return app("List", app("List", *[rational(solution[v])
                                         for v in var_items]))
    rules = [app("Rule", v, rational(solution[v])) for v in var_items]
    return app("List", app("List", *rules))
