"""Declaration queries and engine-initiated proving: the reverse
direction of the link, where the algebra side asks the kernel side for
information and proofs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..bridge.backtrans import (
    NoApplicableRule,
    RuleRegistry,
    TransEnv,
    default_registry,
    pexpr_of_mmexpr,
)
from ..bridge.reflect import reflect
from ..cas.expr import App as CApp
from ..cas.expr import CasExpr, Sym, render, to_wire
from ..kernel.elaborate import ElaborationFailure, TypeMismatch, elaborate, type_check
from ..kernel.env import Environment
from ..kernel.expr import Expr, KernelError, LevelLit, Sort, fresh_local, mk_const
from ..kernel.pretty import pretty
from ..tactics.results import TacticError
from .calculus import to_cas_calculus
from .explode import ExplodeStep, explode, steps_payload
from .formula import AtomTable, UnsupportedFormula, formula_of_kernel, kernel_of_formula
from .g4ip import intuit


class TranslationFailed(TacticError):
    pass


class TacticFailed(TacticError):
    pass


@dataclass(frozen=True)
class DeclInfo:
    name: str
    kind: str
    type_str: str
    type_expr: CasExpr
    doc: Optional[str]

    def to_payload(self) -> dict:
        return {"name": self.name, "kind": self.kind, "type": self.type_str,
                "type_expr": to_wire(self.type_expr), "doc": self.doc}


def get_decl_info(env: Environment, name: str) -> DeclInfo:
    decl = env.lookup(name)
    return DeclInfo(name=str(decl.name), kind=decl.kind.value,
                    type_str=pretty(env, decl.type),
                    type_expr=reflect(decl.type), doc=decl.doc)


@dataclass(frozen=True)
class ProveOutcome:
    status: str
    tactic: str
    statement: str
    proof: Optional[CasExpr] = None
    steps: tuple[ExplodeStep, ...] = ()
    method: Optional[str] = None
    env: Optional[Environment] = None

    def to_payload(self) -> dict:
        payload = {"status": self.status, "tactic": self.tactic,
                   "statement": self.statement,
                   "explode": steps_payload(list(self.steps), self.env)}
        if self.proof is not None:
            payload["proof"] = to_wire(self.proof)
            payload["proof_text"] = render(self.proof)
        if self.method is not None:
            payload["method"] = self.method
        return payload


_ARITH_HEADS = {"Plus", "Times", "Subtract", "Minus", "Divide", "Power",
                "Equal", "Unequal", "Less", "LessEqual", "Greater",
                "GreaterEqual", "Rational"}
_LOGIC_HEADS = {"And", "Or", "Not", "Implies", "Equivalent"}


def _collect_atoms(e: CasExpr, registry: RuleRegistry,
                   numeric: bool) -> dict[str, bool]:
    """Unknown symbols and whether they occur in arithmetic positions."""
    known = {r.cas_symbol for r in registry.sym_rules}
    out: dict[str, bool] = {}

    def walk(t: CasExpr, in_arith: bool) -> None:
        match t:
            case Sym(name):
                if name not in known and name not in _ARITH_HEADS \
                        and name not in _LOGIC_HEADS:
                    out[name] = out.get(name, False) or in_arith
            case CApp(Sym(head), args):
                inner = in_arith or head in _ARITH_HEADS
                for a in args:
                    walk(a, inner)
            case CApp(head, args):
                walk(head, in_arith)
                for a in args:
                    walk(a, in_arith)
            case _:
                pass

    walk(e, numeric)
    return out


def prove_for_cas(env: Environment, formula: CasExpr, tactic: str,
                  registry: Optional[RuleRegistry] = None,
                  engine=None) -> ProveOutcome:
    """Back-translate an engine proposition, elaborate it, and run the
    named tactic; intuit returns a calculus proof plus its exploded form."""
    registry = registry if registry is not None else default_registry()
    if tactic not in ("intuit", "norm_num", "linarith", "ring"):
        raise TacticFailed(f"unknown tactic {tactic!r}", stage="prove")
    atoms = _collect_atoms(formula, registry, numeric=tactic in
                           ("linarith", "ring"))
    tenv = TransEnv()
    table = AtomTable()
    for name, numeric in atoms.items():
        if numeric or tactic in ("linarith", "ring"):
            tenv = tenv.extend(name, fresh_local(name, mk_const("real")))
        else:
            tenv = tenv.extend(name, table.local(name))
    try:
        pexpr = pexpr_of_mmexpr(registry, tenv, formula)
        statement = elaborate(env, pexpr, expected=Sort(LevelLit(0)))
    except (NoApplicableRule, ElaborationFailure, TypeMismatch,
            KernelError) as exc:
        raise TranslationFailed(str(exc), stage="translate") from exc
    statement_str = pretty(env, statement)
    if tactic == "intuit":
        return _prove_intuit(env, statement, statement_str, table)
    if tactic == "norm_num":
        from ..tactics.norm_num import NotGround, norm_num_holds

        try:
            holds = norm_num_holds(statement)
        except NotGround as exc:
            raise TacticFailed(str(exc), stage="norm_num") from exc
        if not holds:
            raise TacticFailed("statement is refutable, not provable",
                               stage="norm_num")
        return ProveOutcome("proved", tactic, statement_str,
                            method="norm_num", env=env)
    if tactic == "ring":
        from ..tactics.norm_num import comparison_parts
        from ..tactics.ring import eq_by_ring

        rel, lhs, rhs = comparison_parts(statement)
        if rel != "eq":
            raise TacticFailed("ring proves equalities", stage="ring")
        eq_by_ring(env, lhs, rhs)
        return ProveOutcome("proved", tactic, statement_str, method="ring",
                            env=env)
    # linarith: the statement must be an implication chain ending in false
    from ..tactics.linarith import linatom_of_kernel, linarith
    from ..kernel.elaborate import whnf
    from ..kernel.expr import Pi, instantiate

    hyps = []

    def split_conj(t: Expr) -> None:
        from ..kernel.expr import Const, app_spine

        head, parts = app_spine(t)
        if isinstance(head, Const) and str(head.name) == "and" \
                and len(parts) == 2:
            split_conj(parts[0])
            split_conj(parts[1])
        else:
            hyps.append(t)

    current = whnf(env, statement)
    while isinstance(current, Pi):
        split_conj(current.type)
        current = whnf(env, instantiate(current.body,
                                        fresh_local("h", current.type)))
    if current != mk_const("false"):
        raise TacticFailed("linarith goals must be implications to false",
                           stage="linarith")
    result = linarith(env, [linatom_of_kernel(h) for h in hyps])
    return ProveOutcome("proved", tactic, statement_str,
                        method=result.method, env=env)


def _prove_intuit(env: Environment, statement: Expr, statement_str: str,
                  table: AtomTable) -> ProveOutcome:
    try:
        f = formula_of_kernel(env, statement, atoms=table)
    except UnsupportedFormula as exc:
        raise TacticFailed(str(exc), stage="intuit") from exc
    proof = intuit(f, atoms=table)
    if proof is None:
        raise TacticFailed("not an intuitionistic tautology", stage="intuit")
    encoded = kernel_of_formula(f, table)
    check = type_check(env, proof)
    from ..kernel.elaborate import def_eq

    if not def_eq(env, check, encoded):
        raise TacticFailed("internal: proof does not check at the statement",
                           stage="intuit")
    steps = explode(env, proof)
    return ProveOutcome("proved", "intuit", statement_str,
                        proof=to_cas_calculus(proof), steps=tuple(steps),
                        method="intuit", env=env)
