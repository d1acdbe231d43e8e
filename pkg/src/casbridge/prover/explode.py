"""Fitch-style rendering of proof terms as indexed steps, and the replay
that rebuilds a checkable term from the rendered steps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..kernel.elaborate import elaborate, type_check
from ..kernel.env import Environment
from ..kernel.expr import (
    BinderInfo,
    Const,
    Expr,
    KernelError,
    Lam,
    Let,
    LevelLit,
    LocalConst,
    MVar,
    Pi,
    Placeholder,
    Sort,
    abstract,
    app_spine,
    fresh_local,
    instantiate,
    mk_app,
)
from ..kernel.pretty import pretty

RULE_ASSUMPTION = "assumption"
RULE_IMP_INTRO = "→I"
RULE_FORALL_INTRO = "∀I"


class IllTypedProof(KernelError):
    pass


class ReplayError(KernelError):
    pass


@dataclass(frozen=True)
class ExplodeStep:
    index: int
    depth: int
    rule: str
    args: tuple[int, ...]
    goal: Expr

    def __post_init__(self) -> None:
        if any(a >= self.index for a in self.args):
            raise ValueError("step arguments must reference earlier steps")


def explode(env: Environment, proof: Expr) -> list[ExplodeStep]:
    """Post-order traversal: binder introductions become two-argument
    intro steps, hypothesis uses reference their introduction, constant
    applications cite the constant by name."""
    try:
        type_check(env, proof)
    except KernelError as exc:
        raise IllTypedProof(str(exc)) from exc
    steps: list[ExplodeStep] = []

    def emit(depth: int, rule: str, args: tuple[int, ...], goal: Expr) -> int:
        steps.append(ExplodeStep(len(steps), depth, rule, args, goal))
        return len(steps) - 1

    def walk(term: Expr, depth: int, intro_of: dict) -> int:
        match term:
            case LocalConst(unique, pretty_name, _, ty):
                refs = (intro_of[unique],) if unique in intro_of else ()
                return emit(depth, str(pretty_name), refs, ty)
            case Lam(n, _, ty, body):
                local = fresh_local(n, ty)
                intro_idx = emit(depth + 1, RULE_ASSUMPTION, (), ty)
                inner = dict(intro_of)
                inner[local.unique] = intro_idx
                body_idx = walk(instantiate(body, local), depth + 1, inner)
                rule = _intro_rule(env, ty)
                return emit(depth, rule, (intro_idx, body_idx),
                            type_check(env, term))
            case Let(_, _, _, _) | MVar(_, _):
                return emit(depth, "opaque", (), type_check(env, term))
            case _:
                pass
        head, args = app_spine(term)
        goal = type_check(env, term)
        if isinstance(head, Const):
            shown = _explicit_args(env, head, args)
            arg_idxs = tuple(walk(a, depth, intro_of) for a in shown)
            return emit(depth, str(head.name), arg_idxs, goal)
        if isinstance(head, LocalConst):
            head_idx = walk(head, depth, intro_of)
            arg_idxs = tuple(walk(a, depth, intro_of) for a in args)
            return emit(depth, str(head.pretty), (head_idx, *arg_idxs), goal)
        head_idx = walk(head, depth, intro_of)
        arg_idxs = tuple(walk(a, depth, intro_of) for a in args)
        return emit(depth, "app", (head_idx, *arg_idxs), goal)

    walk(proof, 0, {})
    return steps


def _intro_rule(env: Environment, binder_type: Expr) -> str:
    try:
        sort = type_check(env, binder_type)
    except KernelError:
        return RULE_IMP_INTRO
    if sort == Sort(LevelLit(0)):
        return RULE_IMP_INTRO
    return RULE_FORALL_INTRO


def _explicit_args(env: Environment, head: Const, args: list[Expr]
                   ) -> list[Expr]:
    decl = env.get(head.name)
    if decl is None:
        return list(args)
    binfos = []
    t = decl.type
    while isinstance(t, Pi):
        binfos.append(t.binfo)
        t = t.body
    return [a for i, a in enumerate(args)
            if i >= len(binfos) or binfos[i] == BinderInfo.DEFAULT]


def steps_payload(steps: list[ExplodeStep],
                  env: Optional[Environment] = None) -> list[dict]:
    return [{"index": s.index, "depth": s.depth, "rule": s.rule,
             "args": list(s.args), "goal": pretty(env, s.goal)}
            for s in steps]


def replay_explode(env: Environment, steps: list[ExplodeStep]) -> Expr:
    """Rebuild a term by interpreting each step; implicit arguments lost
    in rendering are re-inferred by elaboration against the step goals."""
    terms: dict[int, Expr] = {}
    locals_of: dict[int, LocalConst] = {}
    for step in steps:
        if step.rule == RULE_ASSUMPTION:
            local = fresh_local(f"h{step.index}", step.goal)
            locals_of[step.index] = local
            terms[step.index] = local
        elif step.rule in (RULE_IMP_INTRO, RULE_FORALL_INTRO):
            if len(step.args) != 2:
                raise ReplayError("intro steps take two arguments")
            var_idx, body_idx = step.args
            local = locals_of.get(var_idx)
            if local is None:
                raise ReplayError("intro argument is not an assumption step")
            terms[step.index] = Lam(local.pretty, BinderInfo.DEFAULT,
                                    local.type,
                                    abstract(terms[body_idx], local))
        elif step.rule in env:
            decl = env.lookup(step.rule)
            head = Const(decl.name, (LevelLit(0),) * len(decl.level_params))
            # re-open the implicit slots that the rendering dropped
            holes: list[Expr] = []
            t = decl.type
            while isinstance(t, Pi) and t.binfo != BinderInfo.DEFAULT:
                holes.append(Placeholder())
                t = t.body
            pre = mk_app(head, *holes, *[terms[i] for i in step.args])
            terms[step.index] = elaborate(env, pre, expected=step.goal)
        elif step.rule == "app" and step.args:
            terms[step.index] = mk_app(terms[step.args[0]],
                                       *[terms[i] for i in step.args[1:]])
        elif step.args and isinstance(terms.get(step.args[0]), LocalConst):
            # a hypothesis reference or its application to further steps
            head = terms[step.args[0]]
            terms[step.index] = mk_app(head,
                                       *[terms[i] for i in step.args[1:]])
        else:
            raise ReplayError(f"cannot interpret rule {step.rule!r}")
    if not steps:
        raise ReplayError("empty step list")
    return terms[steps[-1].index]
