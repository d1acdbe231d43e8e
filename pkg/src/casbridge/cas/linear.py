"""Exact linear arithmetic: constraint extraction, a two-phase rational
simplex with Bland's rule, satisfying-assignment search, and Farkas
certificate search via the dual system.

Strict inequalities get a shared slack variable bounded by 1 that the
second phase maximizes; the system is strictly feasible iff its optimum
is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Optional, Sequence

from .expr import (
    App,
    CasError,
    CasExpr,
    MInt,
    Sym,
    app,
    as_fraction,
    is_number,
    rational,
)

Rel = str  # "lt" | "le" | "eq", read as `expr REL 0`


class UnsupportedFragment(CasError):
    pass


@dataclass(frozen=True)
class LinearAtom:
    """A normalized constraint  sum(coeffs) + const REL 0."""

    coeffs: tuple[tuple[Hashable, Fraction], ...]
    const: Fraction
    rel: Rel

    @staticmethod
    def make(coeffs: dict[Hashable, Fraction], const, rel: Rel) -> "LinearAtom":
        items = tuple(sorted(((v, c) for v, c in coeffs.items() if c),
                             key=lambda vc: repr(vc[0])))
        return LinearAtom(items, Fraction(const), rel)

    def coeff_map(self) -> dict[Hashable, Fraction]:
        return dict(self.coeffs)

    def scale(self, k: Fraction) -> "LinearAtom":
        if k <= 0:
            raise ValueError("scaling must be positive")
        return LinearAtom(tuple((v, c * k) for v, c in self.coeffs),
                          self.const * k, self.rel)

    def holds(self, assignment: dict[Hashable, Fraction]) -> bool:
        total = self.const
        for v, c in self.coeffs:
            total += c * assignment.get(v, Fraction(0))
        if self.rel == "lt":
            return total < 0
        if self.rel == "le":
            return total <= 0
        return total == 0


# --- extraction from engine expressions ----------------------------------------

def _linear_parts(e: CasExpr) -> tuple[dict[CasExpr, Fraction], Fraction]:
    if is_number(e):
        return {}, as_fraction(e)
    match e:
        case Sym(_):
            return {e: Fraction(1)}, Fraction(0)
        case App(Sym("Plus"), args):
            coeffs: dict[CasExpr, Fraction] = {}
            const = Fraction(0)
            for a in args:
                c2, k2 = _linear_parts(a)
                const += k2
                for v, c in c2.items():
                    coeffs[v] = coeffs.get(v, Fraction(0)) + c
            return coeffs, const
        case App(Sym("Subtract"), (a, b)):
            ca, ka = _linear_parts(a)
            cb, kb = _linear_parts(b)
            for v, c in cb.items():
                ca[v] = ca.get(v, Fraction(0)) - c
            return ca, ka - kb
        case App(Sym("Minus"), (a,)):
            ca, ka = _linear_parts(a)
            return {v: -c for v, c in ca.items()}, -ka
        case App(Sym("Times"), args):
            factor = Fraction(1)
            symbolic: list[CasExpr] = []
            for a in args:
                if is_number(a):
                    factor *= as_fraction(a)
                else:
                    symbolic.append(a)
            if not symbolic:
                return {}, factor
            if len(symbolic) == 1:
                coeffs, const = _linear_parts(symbolic[0])
                return ({v: c * factor for v, c in coeffs.items()},
                        const * factor)
            raise UnsupportedFragment("nonlinear product")
        case App(Sym("Divide"), (a, b)):
            if is_number(b):
                d = as_fraction(b)
                if not d:
                    raise UnsupportedFragment("division by zero")
                coeffs, const = _linear_parts(a)
                return {v: c / d for v, c in coeffs.items()}, const / d
            raise UnsupportedFragment("division by a non-number")
        case _:
            raise UnsupportedFragment(f"nonlinear or foreign term: {e!r}")


_REL_HEADS = {"Less": "lt", "LessEqual": "le", "Greater": "lt",
              "GreaterEqual": "le", "Equal": "eq"}


def atoms_of_constraints(e: CasExpr) -> list[LinearAtom]:
    """Flatten an And-tree of (possibly chained) comparisons."""
    match e:
        case Sym("True"):
            return []
        case Sym("False"):
            return [LinearAtom.make({}, Fraction(1), "le")]  # 1 <= 0
        case App(Sym("And"), args):
            out = []
            for a in args:
                out.extend(atoms_of_constraints(a))
            return out
        case App(Sym(h), args) if h in _REL_HEADS and len(args) >= 2:
            out = []
            for lhs, rhs in zip(args, args[1:]):
                if h in ("Greater", "GreaterEqual"):
                    lhs, rhs = rhs, lhs
                cl, kl = _linear_parts(lhs)
                cr, kr = _linear_parts(rhs)
                for v, c in cr.items():
                    cl[v] = cl.get(v, Fraction(0)) - c
                out.append(LinearAtom.make(cl, kl - kr, _REL_HEADS[h]))
            return out
        case _:
            raise UnsupportedFragment(f"not a linear constraint: {e!r}")


# --- exact simplex --------------------------------------------------------------

def _pivot(tableau: list[list[Fraction]], basis: list[int],
           row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    for r in range(len(tableau)):
        if r != row and tableau[r][col]:
            f = tableau[r][col]
            prow = tableau[row]
            tableau[r] = [a - f * b for a, b in zip(tableau[r], prow)]
    basis[row] = col


def _optimize(tableau: list[list[Fraction]], basis: list[int],
              obj: list[Fraction], allowed: Sequence[bool]) -> list[Fraction]:
    """Maximize with Bland's rule; obj is the working objective row
    (reduced costs negated, value in the last entry). Mutates everything."""
    ncols = len(obj) - 1
    while True:
        entering = -1
        for j in range(ncols):
            if allowed[j] and obj[j] < 0 and j not in basis:
                entering = j
                break
        if entering < 0:
            return obj
        leaving = -1
        best: Optional[Fraction] = None
        for i, row in enumerate(tableau):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leaving]):
                    best = ratio
                    leaving = i
        if leaving < 0:
            raise UnsupportedFragment("unbounded linear program")
        _pivot(tableau, basis, leaving, entering)
        f = obj[entering]
        if f:
            prow = tableau[leaving]
            for j in range(len(obj)):
                obj[j] -= f * prow[j]


def _feasible_point(rows: list[tuple[list[Fraction], Fraction]],
                    ncols: int,
                    objective: Optional[list[Fraction]] = None
                    ) -> Optional[tuple[list[Fraction], Fraction]]:
    """Solve Ax = b, x >= 0 (rows as (coeffs, b)); optionally maximize
    `objective` afterwards. Returns (x values, objective value) or None."""
    m = len(rows)
    width = ncols + m + 1
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    for i, (coeffs, b) in enumerate(rows):
        coeffs = list(coeffs) + [Fraction(0)] * (ncols - len(coeffs))
        if b < 0:
            coeffs = [-c for c in coeffs]
            b = -b
        row = coeffs + [Fraction(0)] * m + [b]
        row[ncols + i] = Fraction(1)
        tableau.append(row)
        basis.append(ncols + i)
    # phase 1: maximize -(sum of artificials)
    obj = [Fraction(0)] * width
    for j in range(ncols, ncols + m):
        obj[j] = Fraction(1)
    for row in tableau:
        for j in range(width):
            obj[j] -= row[j]
    allowed = [True] * (ncols + m)
    _optimize(tableau, basis, obj, allowed)
    if obj[-1] != 0:
        return None
    # drive leftover artificials out of the basis
    for i in range(m):
        if basis[i] >= ncols:
            for j in range(ncols):
                if tableau[i][j]:
                    _pivot(tableau, basis, i, j)
                    break
    live = [i for i in range(m) if basis[i] < ncols or tableau[i][-1] == 0]
    keep = [i for i in range(m) if basis[i] < ncols]
    redundant = [i for i in range(m) if basis[i] >= ncols]
    if redundant:
        tableau = [tableau[i] for i in keep]
        basis = [basis[i] for i in keep]
    value = Fraction(0)
    if objective is not None:
        obj2 = [Fraction(-c) for c in objective]
        obj2 += [Fraction(0)] * (width - len(obj2))
        for i, b_col in enumerate(basis):
            if obj2[b_col]:
                f = obj2[b_col]
                prow = tableau[i]
                for j in range(width):
                    obj2[j] -= f * prow[j]
        allowed = [j < ncols for j in range(ncols + m)]
        _optimize(tableau, basis, obj2, allowed)
        value = obj2[-1]
    xs = [Fraction(0)] * ncols
    for i, b_col in enumerate(basis):
        if b_col < ncols:
            xs[b_col] = tableau[i][-1]
    return xs, value


def solve_atoms(atoms: Sequence[LinearAtom],
                variables: Sequence[Hashable]
                ) -> Optional[dict[Hashable, Fraction]]:
    """A rational assignment satisfying every atom, or None."""
    var_list = list(variables)
    index = {v: i for i, v in enumerate(var_list)}
    for atom in atoms:
        for v, _ in atom.coeffs:
            if v not in index:
                raise UnsupportedFragment(f"unconstrained variable {v!r}")
    nv = len(var_list)
    strict = [a for a in atoms if a.rel == "lt"]
    n_slack = sum(1 for a in atoms if a.rel in ("lt", "le"))
    has_eps = bool(strict)
    ncols = 2 * nv + n_slack + (2 if has_eps else 0)
    eps_col = 2 * nv + n_slack if has_eps else -1
    rows: list[tuple[list[Fraction], Fraction]] = []
    slack_i = 0
    for atom in atoms:
        coeffs = [Fraction(0)] * ncols
        cmap = atom.coeff_map()
        for v, c in cmap.items():
            coeffs[2 * index[v]] += c
            coeffs[2 * index[v] + 1] -= c
        if atom.rel in ("lt", "le"):
            coeffs[2 * nv + slack_i] = Fraction(1)
            slack_i += 1
        if atom.rel == "lt":
            coeffs[eps_col] = Fraction(1)
        rows.append((coeffs, -atom.const))
    if has_eps:
        cap = [Fraction(0)] * ncols
        cap[eps_col] = Fraction(1)
        cap[eps_col + 1] = Fraction(1)
        rows.append((cap, Fraction(1)))
        objective = [Fraction(0)] * ncols
        objective[eps_col] = Fraction(1)
    else:
        objective = None
    result = _feasible_point(rows, ncols, objective)
    if result is None:
        return None
    xs, value = result
    if has_eps and value <= 0:
        return None
    assignment = {v: xs[2 * i] - xs[2 * i + 1] for v, i in
                  ((v, index[v]) for v in var_list)}
    if not all(a.holds(assignment) for a in atoms):
        return None
    return assignment


# --- certificate search ----------------------------------------------------------

def lp_certificate(hyps: Sequence[LinearAtom]) -> Optional[list[int]]:
    """Nonnegative integer Farkas multipliers for an unsatisfiable system,
    found by solving the dual with the assignment search and scaling by
    the least common multiple of the denominators."""
    if not hyps:
        return None
    c_vars = [f"c{i}" for i in range(len(hyps))]
    dual: list[LinearAtom] = []
    variables: set[Hashable] = set()
    for h in hyps:
        variables.update(v for v, _ in h.coeffs)
    for v in sorted(variables, key=repr):
        coeffs = {c_vars[i]: h.coeff_map().get(v, Fraction(0))
                  for i, h in enumerate(hyps)}
        dual.append(LinearAtom.make(coeffs, 0, "eq"))
    for i, h in enumerate(hyps):
        if h.rel != "eq":
            dual.append(LinearAtom.make({c_vars[i]: Fraction(-1)}, 0, "le"))
    q_coeffs = {c_vars[i]: h.const for i, h in enumerate(hyps)}
    strict_idx = [i for i, h in enumerate(hyps) if h.rel == "lt"]
    attempts = []
    if strict_idx:
        # q >= 0 together with a unit mass on the strict multipliers
        attempts.append(dual
                        + [LinearAtom.make({v: -c for v, c in q_coeffs.items()},
                                           0, "le"),
                           LinearAtom.make({c_vars[i]: Fraction(1)
                                            for i in strict_idx}, -1, "eq")])
    # q = 1 certificates (constant contradictions)
    attempts.append(dual + [LinearAtom.make(q_coeffs, -1, "eq")])
    for atoms in attempts:
        sol = solve_atoms(atoms, c_vars)
        if sol is not None:
            values = [sol.get(c, Fraction(0)) for c in c_vars]
            scale = 1
            for v in values:
                scale = scale * v.denominator // math.gcd(scale, v.denominator)
            return [int(v * scale) for v in values]
    return None


# --- engine-facing wrappers -------------------------------------------------------

def _sym_list(e: CasExpr) -> list[Sym]:
    match e:
        case App(Sym("List"), args) if all(isinstance(a, Sym) for a in args):
            return list(args)
        case Sym(_):
            return [e]
        case _:
            raise UnsupportedFragment("expected a list of symbols")


def find_instance_cas(constraints: CasExpr, variables: CasExpr) -> CasExpr:
    syms = _sym_list(variables)
    atoms = atoms_of_constraints(constraints)
    assignment = solve_atoms(atoms, syms)
    if assignment is None:
        return app("List")
    rules = [app("Rule", s, rational(assignment[s])) for s in syms]
    return app("List", app("List", *rules))


def lp_certificate_cas(hyps: CasExpr, variables: CasExpr) -> CasExpr:
    match hyps:
        case App(Sym("List"), items):
            pass
        case _:
            raise UnsupportedFragment("expected a list of constraints")
    _sym_list(variables)  # validated, variable order comes from the atoms
    atoms: list[LinearAtom] = []
    for item in items:
        got = atoms_of_constraints(item)
        if len(got) != 1:
            raise UnsupportedFragment("one comparison per hypothesis")
        atoms.extend(got)
    cert = lp_certificate(atoms)
    if cert is None:
        return app("List")
    return app("List", *[MInt(c) for c in cert])
