"""Tactics that consult the algebra engine over the link and certify the
imported results with small trusted checkers: factoring, LU
decomposition, restricted equation solving, plausibility checking, and
axiomatized import."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..cas.expr import App as CApp
from ..cas.expr import MInt, Sym, app, as_fraction, rational, render
from ..cas.linear import UnsupportedFragment
from ..cas.matrix import (
    Matrix,
    is_lower_unitriangular,
    is_upper_triangular,
    mat_mul,
)
from ..kernel.elaborate import type_check
from ..kernel.env import Declaration, DeclKind, Environment
from ..kernel.expr import (
    BinderInfo,
    Expr,
    Lam,
    LocalConst,
    Name,
    Sort,
    LevelLit,
    abstract,
    mk_app,
    mk_const,
)
from ..kernel.numerals import numeral_encode
from ..bridge.reflect import reflect
from ..link.client import Link, RemoteError, execute, run_command_using
from .linarith import LinAtom, linatom_of_kernel
from .norm_num import norm_num_holds
from .results import TacticError, VerificationFailed, VerifiedResult
from .ring import eq_by_ring

FACTOR_TEMPLATE = "% // LeanConvert // Activate // Factor"


def rational_kernel(q: Fraction) -> Expr:
    """A rational literal as a pre-expression: numerals, div, neg."""
    q = Fraction(q)
    if q < 0:
        return mk_app(mk_const("neg"), rational_kernel(-q))
    if q.denominator == 1:
        return numeral_encode(q.numerator)
    return mk_app(mk_const("div"), numeral_encode(q.numerator),
                  numeral_encode(q.denominator))


def factor_tactic(env: Environment, link: Link, e: Expr
                  ) -> tuple[Expr, VerifiedResult]:
    """Reflect, interpret, factor remotely, back-translate, elaborate at
    the input's type, and certify equality by ring normalization."""
    try:
        expected = type_check(env, e)
    except Exception as exc:
        raise TacticError(str(exc), stage="typecheck") from exc
    try:
        pexpr = run_command_using(link, FACTOR_TEMPLATE, e)
    except TacticError:
        raise
    except Exception as exc:
        raise TacticError(str(exc), stage="link") from exc
    try:
        from ..kernel.elaborate import elaborate

        back = elaborate(env, pexpr, expected=expected)
    except Exception as exc:
        raise TacticError(str(exc), stage="elaborate") from exc
    proof = eq_by_ring(env, e, back)
    return back, proof


# --- LU ----------------------------------------------------------------------------

def _matrix_kernel(m: Matrix) -> Expr:
    def kernel_list(items: list[Expr]) -> Expr:
        out: Expr = mk_app(mk_const("list.nil"))
        for item in reversed(items):
            out = mk_app(mk_const("list.cons"), item, out)
        return out

    return kernel_list([kernel_list([rational_kernel(v) for v in row])
                        for row in m])


def lu_statement(env: Environment, m: Matrix) -> Expr:
    """The decomposition statement:
    exists l u, lower(l) and upper(u) and l ** u = m."""
    from ..kernel.elaborate import elaborate

    mat_ty = mk_app(mk_const("list"), mk_app(mk_const("list"),
                                             mk_const("real")))
    l_loc = LocalConst(Name.of("stmt.l"), Name.of("l"), BinderInfo.DEFAULT,
                       mat_ty)
    u_loc = LocalConst(Name.of("stmt.u"), Name.of("u"), BinderInfo.DEFAULT,
                       mat_ty)
    body = mk_app(
        mk_const("and"),
        mk_app(mk_const("is_lower_triangular"), l_loc),
        mk_app(mk_const("and"),
               mk_app(mk_const("is_upper_triangular"), u_loc),
               mk_app(mk_const("eq"),
                      mk_app(mk_const("mat_mul"), l_loc, u_loc),
                      _matrix_kernel(m))))
    inner = mk_app(mk_const("Exists"),
                   Lam(Name.of("u"), BinderInfo.DEFAULT, mat_ty,
                       abstract(body, u_loc)))
    stmt = mk_app(mk_const("Exists"),
                  Lam(Name.of("l"), BinderInfo.DEFAULT, mat_ty,
                      abstract(inner, l_loc)))
    return elaborate(env, stmt, expected=Sort(LevelLit(0)))


def verify_lu(env: Environment, m: Matrix, lower: Matrix, upper: Matrix
              ) -> VerifiedResult:
    """Trusted check: triangularity structurally, the product entrywise
    through exact numeral comparison."""
    if not is_lower_unitriangular(lower):
        raise VerificationFailed("L is not unit lower triangular", stage="lu")
    if not is_upper_triangular(upper):
        raise VerificationFailed("U is not upper triangular", stage="lu")
    product = mat_mul(lower, upper)
    n = len(m)
    if len(product) != n or any(len(r) != len(m[0]) for r in product):
        raise VerificationFailed("shape mismatch", stage="lu")
    for i in range(n):
        for j in range(len(m[0])):
            comparison = mk_app(mk_const("eq"),
                                rational_kernel(product[i][j]),
                                rational_kernel(m[i][j]))
            if not norm_num_holds(comparison):
                raise VerificationFailed(
                    f"product differs from input at ({i}, {j})", stage="lu")
    return VerifiedResult(lu_statement(env, m), method="lu:multiply-back")


def lu_decomp_tactic(env: Environment, link: Link, m: Matrix
                     ) -> tuple[Matrix, Matrix, VerifiedResult]:
    from ..cas.matrix import cas_of_matrix, matrix_of_cas

    command = f"LUDecomposition[{render(cas_of_matrix(m))}]"
    try:
        result = execute(link, command)
    except RemoteError as exc:
        raise TacticError(str(exc), stage="link") from exc
    match result:
        case CApp(Sym("List"), (lower_e, upper_e)):
            lower = matrix_of_cas(lower_e)
            upper = matrix_of_cas(upper_e)
        case _:
            raise TacticError(f"unexpected reply {render(result)}",
                              stage="link")
    return lower, upper, verify_lu(env, m, lower, upper)


# --- equation systems ---------------------------------------------------------------

def solve_polys(env: Environment, link: Link, equations: Sequence[Expr]
                ) -> tuple[dict[str, Fraction], VerifiedResult]:
    """Ask the engine for candidate solutions (rule lists are projected to
    plain values before transport), substitute, and verify each equation
    exactly."""
    locals_in_order = _free_locals(equations)
    if not locals_in_order:
        raise TacticError("no unknowns to solve for", stage="solve")
    eq_parts = [f"{render(reflect(e))} // LeanConvert // Activate"
                for e in equations]
    var_parts = [f"{render(reflect(l))} // LeanConvert // Activate"
                 for l in locals_in_order]
    command = (f"SolveValues[{{{', '.join(eq_parts)}}}, "
               f"{{{', '.join(var_parts)}}}]")
    try:
        result = execute(link, command)
    except RemoteError as exc:
        raise TacticError(f"unsupported system: {exc}", stage="solve") from exc
    match result:
        case CApp(Sym("List"), ()):
            from ..cas.solve import NoSolution

            raise NoSolution("no solution found")
        case CApp(Sym("List"), (CApp(Sym("List"), values), *_)) \
                if len(values) == len(locals_in_order):
            assignment = {l: as_fraction(v)
                          for l, v in zip(locals_in_order, values)}
        case _:
            raise TacticError(f"unexpected reply {render(result)}",
                              stage="solve")
    for equation in equations:
        substituted = equation
        for l, val in assignment.items():
            substituted = _subst_local(substituted, l, rational_kernel(val))
        if not norm_num_holds(substituted):
            raise VerificationFailed(
                "candidate solution fails exact verification", stage="solve")
    statement = _exists_statement(env, locals_in_order, equations)
    named = {str(l.pretty): v for l, v in assignment.items()}
    return named, VerifiedResult(statement, method="solve:norm_num")


def _free_locals(exprs: Sequence[Expr]) -> list[LocalConst]:
    seen: dict[Name, LocalConst] = {}

    def walk(e: Expr) -> None:
        from ..kernel.expr import App, Lam, Let, MVar, Pi

        match e:
            case LocalConst(u, _, _, _):
                seen.setdefault(u, e)
            case App(f, a):
                walk(f)
                walk(a)
            case Lam(_, _, t, b) | Pi(_, _, t, b):
                walk(t)
                walk(b)
            case Let(_, t, v, b):
                walk(t)
                walk(v)
                walk(b)
            case MVar(_, t):
                walk(t)
            case _:
                pass

    for e in exprs:
        walk(e)
    return sorted(seen.values(), key=lambda l: str(l.pretty))


def _subst_local(e: Expr, local: LocalConst, replacement: Expr) -> Expr:
    from ..kernel.expr import App, Lam, Let, MVar, Pi

    match e:
        case LocalConst(u, _, _, _) if u == local.unique:
            return replacement
        case App(f, a):
            return App(_subst_local(f, local, replacement),
                       _subst_local(a, local, replacement))
        case Lam(n, bi, t, b):
            return Lam(n, bi, _subst_local(t, local, replacement),
                       _subst_local(b, local, replacement))
        case Pi(n, bi, t, b):
            return Pi(n, bi, _subst_local(t, local, replacement),
                      _subst_local(b, local, replacement))
        case Let(n, t, v, b):
            return Let(n, _subst_local(t, local, replacement),
                       _subst_local(v, local, replacement),
                       _subst_local(b, local, replacement))
        case _:
            return e


def _exists_statement(env: Environment, locals_in_order: list[LocalConst],
                      equations: Sequence[Expr]) -> Expr:
    from ..kernel.elaborate import elaborate

    body: Optional[Expr] = None
    for equation in reversed(equations):
        body = equation if body is None else mk_app(mk_const("and"),
                                                    equation, body)
    assert body is not None
    for local in reversed(locals_in_order):
        body = mk_app(mk_const("Exists"),
                      Lam(local.pretty, BinderInfo.DEFAULT, local.type,
                          abstract(body, local)))
    return elaborate(env, body, expected=Sort(LevelLit(0)))


# --- plausibility -------------------------------------------------------------------

@dataclass(frozen=True)
class PlausibilityReport:
    plausible: bool
    countermodel: Optional[dict[str, Fraction]] = None

    def __bool__(self) -> bool:
        return self.plausible


def _negate(atom: LinAtom) -> LinAtom:
    negated = {v: -c for v, c in atom.terms}
    if atom.rel == "le":
        return LinAtom.make(negated, -atom.const, "lt")
    if atom.rel == "lt":
        return LinAtom.make(negated, -atom.const, "le")
    raise UnsupportedFragment("cannot negate an equality goal in the "
                              "linear fragment")


def plausibility_check(env: Environment, link: Link, hyps: Sequence[Expr],
                       goal: Expr) -> PlausibilityReport:
    """Search for an assignment satisfying the hypotheses and the negated
    goal; finding one refutes plausibility. Fragment failures surface as
    UnsupportedFragment, never as success."""
    atoms = [linatom_of_kernel(h) for h in hyps]
    atoms.append(_negate(linatom_of_kernel(goal)))
    var_names = sorted({v for a in atoms for v in a.variables()})
    rename = {v: Sym(f"v{i}") for i, v in enumerate(var_names)}
    constraints = []
    for a in atoms:
        terms = [app("Times", rational(c), rename[v]) for v, c in a.terms]
        lhs = app("Plus", *terms, rational(a.const)) if terms \
            else rational(a.const)
        head = {"lt": "Less", "le": "LessEqual", "eq": "Equal"}[a.rel]
        constraints.append(render(app(head, lhs, MInt(0))))
    command = (f"FindInstance[{' && '.join(constraints)}, "
               f"{{{', '.join(s.name for s in rename.values())}}}]")
    try:
        result = execute(link, command)
    except RemoteError as exc:
        raise UnsupportedFragment(str(exc)) from exc
    match result:
        case CApp(Sym("List"), ()):
            return PlausibilityReport(True)
        case CApp(Sym("List"), (CApp(Sym("List"), rules), *_)):
            model: dict[str, Fraction] = {}
            back = {sym.name: v for v, sym in rename.items()}
            for rule in rules:
                match rule:
                    case CApp(Sym("Rule"), (Sym(sname), value)):
                        model[back[sname]] = as_fraction(value)
            return PlausibilityReport(False, model)
        case _:
            raise UnsupportedFragment(f"unexpected reply {render(result)}")


# --- axiomatized import -------------------------------------------------------------

def axiomatize(env: Environment, name: str, statement: Expr,
               source: str) -> Environment:
    """Admit a statement without proof, tagged for audit."""
    decl = Declaration(Name.of(name), DeclKind.TRUSTED_AXIOM, statement,
                       doc=f"trusted import: {source}")
    return env.insert(decl)
