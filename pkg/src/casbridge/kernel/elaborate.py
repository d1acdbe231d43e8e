"""Elaboration of pre-expressions into fully applied kernel expressions,
plus the small type checker used to validate every elaboration and every
proof term produced elsewhere in the package.

Elaboration fills three kinds of holes:

* implicit type arguments, by first-order unification against the
  signatures of prelude constants;
* instance arguments, by a static (class name, carrier name) table
  derived from the environment;
* numeral nodes, expanded through the binary numeral encoding and typed
  at the expected carrier (`real` when nothing constrains them).
"""

from __future__ import annotations

import itertools
from typing import Optional

from .env import Environment, UnknownDeclaration
from .expr import (
    App,
    BinderInfo,
    Const,
    Expr,
    KernelError,
    Lam,
    Let,
    LevelLit,
    LocalConst,
    MVar,
    Name,
    NatNumeral,
    Pi,
    Placeholder,
    Sort,
    Var,
    abstract,
    app_spine,
    fresh_local,
    instantiate,
    mk_app,
)
from .numerals import numeral_encode

NUMERAL_HEADS = {"zero", "one", "bit0", "bit1"}


class ElaborationFailure(KernelError):
    pass


class TypeMismatch(KernelError):
    pass


class KernelTypeError(KernelError):
    def __init__(self, message: str, subterm: Optional[Expr] = None):
        super().__init__(message)
        self.subterm = subterm


# --- reduction ---------------------------------------------------------------

def whnf(env: Environment, e: Expr) -> Expr:
    """Weak head normal form: beta, let, and unfolding of definitions."""
    fuel = 10_000
    while fuel > 0:
        fuel -= 1
        head, args = app_spine(e)
        if isinstance(head, Lam) and args:
            e = mk_app(instantiate(head.body, args[0]), *args[1:])
            continue
        if isinstance(head, Let):
            e = mk_app(instantiate(head.body, head.value), *args)
            continue
        if isinstance(head, Const):
            decl = env.get(head.name)
            if decl is not None and decl.value is not None:
                e = mk_app(decl.value, *args)
                continue
        return e
    raise KernelTypeError("reduction fuel exhausted", e)


def normalize(env: Environment, e: Expr) -> Expr:
    """Full beta/let/delta normal form (prelude definitions unfold)."""
    e = whnf(env, e)
    match e:
        case App(f, a):
            return App(normalize(env, f), normalize(env, a))
        case Lam(n, bi, t, b):
            return Lam(n, bi, normalize(env, t), normalize(env, b))
        case Pi(n, bi, t, b):
            return Pi(n, bi, normalize(env, t), normalize(env, b))
        case LocalConst(u, p, bi, t):
            return LocalConst(u, p, bi, normalize(env, t))
        case MVar(n, t):
            return MVar(n, normalize(env, t))
        case _:
            return e


_ANON = Name(("_",))


def erase_binder_names(e: Expr) -> Expr:
    """Alpha-key: binder display names do not affect equality."""
    match e:
        case App(f, a):
            return App(erase_binder_names(f), erase_binder_names(a))
        case Lam(_, bi, t, b):
            return Lam(_ANON, bi, erase_binder_names(t), erase_binder_names(b))
        case Pi(_, bi, t, b):
            return Pi(_ANON, bi, erase_binder_names(t), erase_binder_names(b))
        case Let(_, t, v, b):
            return Let(_ANON, erase_binder_names(t), erase_binder_names(v),
                       erase_binder_names(b))
        case LocalConst(u, p, bi, t):
            return LocalConst(u, p, bi, erase_binder_names(t))
        case MVar(n, t):
            return MVar(n, erase_binder_names(t))
        case _:
            return e


def def_eq(env: Environment, a: Expr, b: Expr) -> bool:
    """Definitional equality: syntactic up to binder names, falling back
    to beta/let/delta normal forms."""
    if a == b:
        return True
    na = erase_binder_names(normalize(env, a))
    nb = erase_binder_names(normalize(env, b))
    return na == nb


# --- type checking -----------------------------------------------------------

def type_check(env: Environment, e: Expr) -> Expr:
    """Infer and return the type of a closed expression, or raise
    KernelTypeError naming the offending subterm."""
    match e:
        case Var(_):
            raise KernelTypeError("loose bound variable", e)
        case Sort(LevelLit(n)):
            return Sort(LevelLit(n + 1))
        case Sort(_):
            raise KernelTypeError("cannot type a parametric sort", e)
        case Const(name, levels):
            try:
                decl = env.lookup(name)
            except UnknownDeclaration:
                raise KernelTypeError(f"unknown constant {name}", e) from None
            if len(levels) != len(decl.level_params):
                raise KernelTypeError(f"level arity mismatch for {name}", e)
            return decl.type
        case LocalConst(_, _, _, t):
            return t
        case MVar(_, _):
            raise KernelTypeError("metavariable in checked term", e)
        case App(f, a):
            f_ty = whnf(env, type_check(env, f))
            if not isinstance(f_ty, Pi):
                raise KernelTypeError("applying a non-function", e)
            a_ty = type_check(env, a)
            if not def_eq(env, a_ty, f_ty.type):
                raise KernelTypeError("argument type mismatch", e)
            return instantiate(f_ty.body, a)
        case Lam(n, bi, t, b):
            _sort_of(env, t)
            local = fresh_local(n, t, bi)
            body_ty = type_check(env, instantiate(b, local))
            return Pi(n, bi, t, abstract(body_ty, local))
        case Pi(n, _, t, b):
            u = _sort_of(env, t)
            local = fresh_local(n, t)
            v = _sort_of(env, instantiate(b, local))
            # Prop is impredicative
            return Sort(LevelLit(0)) if v == 0 else Sort(LevelLit(max(u, v)))
        case Let(_, t, v, b):
            v_ty = type_check(env, v)
            if not def_eq(env, v_ty, t):
                raise KernelTypeError("let value type mismatch", e)
            return type_check(env, instantiate(b, v))
        case _:
            raise KernelTypeError("pre-expression node in checked term", e)


def _sort_of(env: Environment, t: Expr) -> int:
    s = whnf(env, type_check(env, t))
    if isinstance(s, Sort) and isinstance(s.level, LevelLit):
        return s.level.n
    raise KernelTypeError("expected a sort", t)


# --- elaboration -------------------------------------------------------------

_mvar_counter = itertools.count()


class Elaborator:
    def __init__(self, env: Environment):
        self.env = env
        self.subst: dict[Name, Expr] = {}
        self.instances: list[MVar] = []
        self.defaultable: set[Name] = set()

    # mvar plumbing

    def fresh_mvar(self, type_: Expr) -> MVar:
        return MVar(Name(("_m", str(next(_mvar_counter)))), type_)

    def walk_head(self, e: Expr) -> Expr:
        while isinstance(e, MVar) and e.name in self.subst:
            e = self.subst[e.name]
        return e

    def deep_walk(self, e: Expr) -> Expr:
        e = self.walk_head(e)
        match e:
            case App(f, a):
                return App(self.deep_walk(f), self.deep_walk(a))
            case Lam(n, bi, t, b):
                return Lam(n, bi, self.deep_walk(t), self.deep_walk(b))
            case Pi(n, bi, t, b):
                return Pi(n, bi, self.deep_walk(t), self.deep_walk(b))
            case Let(n, t, v, b):
                return Let(n, self.deep_walk(t), self.deep_walk(v),
                           self.deep_walk(b))
            case LocalConst(u, p, bi, t):
                return LocalConst(u, p, bi, self.deep_walk(t))
            case _:
                return e

    def _occurs(self, name: Name, e: Expr) -> bool:
        e = self.walk_head(e)
        match e:
            case MVar(n, _):
                return n == name
            case App(f, a):
                return self._occurs(name, f) or self._occurs(name, a)
            case Lam(_, _, t, b) | Pi(_, _, t, b):
                return self._occurs(name, t) or self._occurs(name, b)
            case Let(_, t, v, b):
                return (self._occurs(name, t) or self._occurs(name, v)
                        or self._occurs(name, b))
            case _:
                return False

    def unify(self, a: Expr, b: Expr) -> None:
        a = self.walk_head(a)
        b = self.walk_head(b)
        if a == b:
            return
        if isinstance(a, MVar):
            if self._occurs(a.name, b):
                raise ElaborationFailure(f"occurs check failed on {a.name}")
            self.subst[a.name] = b
            return
        if isinstance(b, MVar):
            return self.unify(b, a)
        match (a, b):
            case (App(f1, a1), App(f2, a2)):
                self.unify(f1, f2)
                self.unify(a1, a2)
                return
            case (Pi(_, _, t1, b1), Pi(_, _, t2, b2)) | \
                 (Lam(_, _, t1, b1), Lam(_, _, t2, b2)):
                self.unify(t1, t2)
                self.unify(b1, b2)
                return
            case _:
                # fall back to weak head reduction before giving up
                a2 = whnf(self.env, self.deep_walk(a))
                b2 = whnf(self.env, self.deep_walk(b))
                if (a2, b2) != (a, b):
                    return self.unify(a2, b2)
                raise ElaborationFailure(
                    f"unification clash: {a!r} vs {b!r}")

    # inference

    def infer(self, e: Expr, expected: Optional[Expr] = None) -> tuple[Expr, Expr]:
        match e:
            case NatNumeral(n):
                return self.infer(numeral_encode(n), expected)
            case Placeholder():
                if expected is None:
                    raise ElaborationFailure("unresolvable placeholder")
                m = self.fresh_mvar(expected)
                return m, expected
            case Var(_):
                raise ElaborationFailure("loose bound variable in pre-expression")
            case Sort(LevelLit(n)):
                return e, Sort(LevelLit(n + 1))
            case Sort(_):
                return e, e
            case Const(name, levels):
                try:
                    decl = self.env.lookup(name)
                except UnknownDeclaration:
                    raise ElaborationFailure(f"unknown constant {name}") from None
                want = len(decl.level_params)
                if not levels and want:
                    e = Const(name, (LevelLit(0),) * want)
                elif len(levels) != want:
                    raise ElaborationFailure(f"level arity mismatch for {name}")
                out, ty = e, decl.type
                if expected is not None:
                    # a bare constant checked against a type still receives
                    # its leading implicit arguments (e.g. list.nil)
                    numeral = str(name) in NUMERAL_HEADS
                    out, ty = self._insert_trailing(out, ty, numeral)
            case LocalConst(_, _, _, t):
                out, ty = e, t
            case MVar(_, t):
                out, ty = e, t
            case App(_, _):
                out, ty = self._infer_app(e)
            case Lam(n, bi, t, b):
                if isinstance(t, Placeholder):
                    # untyped binder (e.g. a back-translated pure function);
                    # unification or the `real` default settles the domain
                    t_e: Expr = self.fresh_mvar(Sort(LevelLit(1)))
                    self.defaultable.add(t_e.name)
                else:
                    t_e, _ = self.infer(t)
                local = fresh_local(n, t_e, bi)
                b_e, b_ty = self.infer(instantiate(b, local))
                out = Lam(n, bi, t_e, abstract(b_e, local))
                ty = Pi(n, bi, t_e, abstract(b_ty, local))
            case Pi(n, bi, t, b):
                t_e, _ = self.infer(t)
                local = fresh_local(n, t_e, bi)
                b_e, _ = self.infer(instantiate(b, local))
                out = Pi(n, bi, t_e, abstract(b_e, local))
                ty = Sort(LevelLit(0))
            case Let(n, t, v, b):
                t_e, _ = self.infer(t)
                v_e, _ = self.infer(v, expected=self.deep_walk(t_e))
                local = fresh_local(n, t_e)
                b_e, b_ty = self.infer(instantiate(b, local))
                out = Let(n, t_e, v_e, abstract(b_e, local))
                ty = instantiate(abstract(b_ty, local), v_e)
            case _:
                raise ElaborationFailure(f"cannot elaborate {e!r}")
        if expected is not None:
            self.unify(ty, expected)
        return out, ty

    def _infer_app(self, e: Expr) -> tuple[Expr, Expr]:
        head, args = app_spine(e)
        head_e, head_ty = self.infer(head)
        numeral_head = (isinstance(head, Const)
                        and str(head.name) in NUMERAL_HEADS)
        binders = self._pi_binders(head_ty)
        # fewer arguments than the telescope: treat them as the explicit
        # ones and synthesize the implicit slots; a full (or longer) spine
        # is taken as already-explicit form
        insertion = len(args) < len(binders)
        out = head_e
        cur = head_ty
        queue = list(args)
        while queue:
            cur = self._force_pi(cur)
            if insertion and cur.binfo != BinderInfo.DEFAULT:
                arg_e = self._implicit_arg(cur, numeral_head)
            else:
                raw = queue.pop(0)
                if isinstance(raw, Placeholder):
                    arg_e = self._implicit_arg(cur, numeral_head)
                else:
                    arg_e, _ = self.infer(raw, expected=self.deep_walk(cur.type))
            out = App(out, arg_e)
            cur = instantiate(cur.body, arg_e)
        if insertion:
            out, cur = self._insert_trailing(out, cur, numeral_head)
        return out, cur

    def _insert_trailing(self, out: Expr, cur: Expr,
                         numeral_head: bool) -> tuple[Expr, Expr]:
        """Fill leading/trailing implicit binders with fresh holes."""
        while True:
            forced = self.walk_head(cur)
            if isinstance(forced, Pi) and forced.binfo != BinderInfo.DEFAULT:
                arg_e = self._implicit_arg(forced, numeral_head)
                out = App(out, arg_e)
                cur = instantiate(forced.body, arg_e)
            else:
                return out, cur

    def _implicit_arg(self, binder: Pi, numeral_head: bool) -> Expr:
        m = self.fresh_mvar(self.deep_walk(binder.type))
        if binder.binfo == BinderInfo.INST_IMPLICIT:
            self.instances.append(m)
        elif numeral_head:
            self.defaultable.add(m.name)
        return m

    def _pi_binders(self, ty: Expr) -> list[BinderInfo]:
        out = []
        ty = self.walk_head(ty)
        while isinstance(ty, Pi):
            out.append(ty.binfo)
            ty = ty.body
        return out

    def _force_pi(self, ty: Expr) -> Pi:
        ty = self.walk_head(ty)
        if not isinstance(ty, Pi):
            ty = whnf(self.env, self.deep_walk(ty))
        if not isinstance(ty, Pi):
            raise ElaborationFailure("too many arguments in application")
        return ty

    # finalization

    def _default_numerals(self) -> None:
        for name in self.defaultable:
            rep = self.walk_head(MVar(name, Sort(LevelLit(1))))
            if isinstance(rep, MVar):
                # assign the chain representative so unioned carriers follow
                self.subst[rep.name] = Const(Name.of("real"))

    def _resolve_instances(self) -> None:
        for m in self.instances:
            if not isinstance(self.walk_head(m), MVar):
                continue
            ty = whnf(self.env, self.deep_walk(m.type))
            head, args = app_spine(ty)
            if (isinstance(head, Const) and len(args) == 1
                    and isinstance(self.walk_head(args[0]), Const)):
                carrier = self.walk_head(args[0])
                inst = self.env.instance_for(str(head.name), str(carrier.name))
                if inst is None:
                    raise ElaborationFailure(
                        f"no instance of {head.name} for {carrier.name}")
                self.subst[m.name] = Const(inst)
            else:
                raise ElaborationFailure(f"unresolved instance argument: {ty!r}")

    def _assert_ground(self, e: Expr) -> None:
        match e:
            case MVar(_, _):
                raise ElaborationFailure("unresolvable placeholder remains")
            case App(f, a):
                self._assert_ground(f)
                self._assert_ground(a)
            case Lam(_, _, t, b) | Pi(_, _, t, b):
                self._assert_ground(t)
                self._assert_ground(b)
            case Let(_, t, v, b):
                self._assert_ground(t)
                self._assert_ground(v)
                self._assert_ground(b)
            case LocalConst(_, _, _, t):
                self._assert_ground(t)
            case _:
                pass

    def elaborate(self, p: Expr, expected: Optional[Expr] = None) -> Expr:
        out, _ = self.infer(p, expected=expected)
        self._default_numerals()
        self._resolve_instances()
        result = self.deep_walk(out)
        self._assert_ground(result)
        inferred = type_check(self.env, result)
        if expected is not None and not def_eq(self.env, inferred, expected):
            raise TypeMismatch(
                f"elaborated type does not match expectation: {inferred!r}")
        return result


def elaborate(env: Environment, p: Expr,
              expected: Optional[Expr] = None) -> Expr:
    """Fill every placeholder in `p`, producing a type-correct expression."""
    return Elaborator(env).elaborate(p, expected)
