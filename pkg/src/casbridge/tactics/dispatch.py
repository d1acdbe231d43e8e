"""Named-tactic dispatch for the kernel service: parses string arguments
in the surface syntaxes, runs the tactic, and returns wire-friendly
summaries."""

from __future__ import annotations

from fractions import Fraction

from ..kernel.elaborate import elaborate
from ..kernel.expr import LevelLit, Sort
from ..kernel.pretty import pretty
from ..kernel.surface import parse_preexpr
from ..link.client import InProcessLink
from .cas_tactics import (
    axiomatize,
    factor_tactic,
    lu_decomp_tactic,
    plausibility_check,
    solve_polys,
)
from .linarith import (
    FarkasCertificate,
    check_farkas,
    cas_oracle,
    fourier_motzkin_oracle,
    linatom_of_kernel,
)
from .norm_num import norm_num_holds
from .results import CertificateRejected, OracleFailed, TacticError


def _link_for(service):
    if getattr(service, "_tactic_link", None) is None:
        from ..link.service import CasService

        service._tactic_link = InProcessLink(CasService(engine=service.engine))
    return service._tactic_link


def _parse_hyps(service, texts):
    free: dict = {}
    out = []
    for text in texts:
        pre = parse_preexpr(text, service.env, free)
        out.append(elaborate(service.env, pre, expected=Sort(LevelLit(0))))
    return out, free


def run_named_tactic(service, args: dict) -> dict:
    name = args.get("name")
    if name == "linarith":
        hyps, _ = _parse_hyps(service, args["hyps"])
        atoms = [linatom_of_kernel(h) for h in hyps]
        oracle_name = args.get("oracle", "fm")
        oracle = cas_oracle(_link_for(service)) if oracle_name == "cas" \
            else fourier_motzkin_oracle
        found = oracle(atoms)
        if found is None:
            raise OracleFailed("no certificate found", stage="linarith")
        cert = FarkasCertificate.of(found)
        if not check_farkas(atoms, cert):
            raise CertificateRejected("certificate failed the Farkas check",
                                      stage="linarith")
        return {"verified": True, "statement": "false",
                "method": "linarith:farkas", "oracle": oracle_name,
                "certificate": [str(c) for c in cert.coeffs]}
    if name == "norm_num":
        pre = parse_preexpr(args["expr"], service.env, {})
        stmt = elaborate(service.env, pre, expected=Sort(LevelLit(0)))
        holds = norm_num_holds(stmt)
        return {"verified": holds, "statement": pretty(service.env, stmt),
                "method": "norm_num"}
    if name == "factor":
        pre = parse_preexpr(args["expr"], service.env, {})
        e = elaborate(service.env, pre)
        factored, proof = factor_tactic(service.env, _link_for(service), e)
        return {"verified": True, "input": pretty(service.env, e),
                "factored": pretty(service.env, factored),
                "method": proof.method}
    if name == "lu":
        matrix = [[Fraction(str(v)) for v in row] for row in args["matrix"]]
        lower, upper, proof = lu_decomp_tactic(service.env,
                                               _link_for(service), matrix)
        return {"verified": True,
                "l": [[str(v) for v in row] for row in lower],
                "u": [[str(v) for v in row] for row in upper],
                "statement": pretty(service.env, proof.statement),
                "method": proof.method}
    if name == "solve":
        free: dict = {}
        eqs = []
        for text in args["equations"]:
            pre = parse_preexpr(text, service.env, free)
            eqs.append(elaborate(service.env, pre,
                                 expected=Sort(LevelLit(0))))
        assignment, proof = solve_polys(service.env, _link_for(service), eqs)
        return {"verified": True,
                "assignment": {k: str(v) for k, v in assignment.items()},
                "statement": pretty(service.env, proof.statement),
                "method": proof.method}
    if name == "plausible":
        hyps, free = _parse_hyps(service, args["hyps"])
        goal_pre = parse_preexpr(args["goal"], service.env, free)
        goal = elaborate(service.env, goal_pre, expected=Sort(LevelLit(0)))
        report = plausibility_check(service.env, _link_for(service),
                                    hyps, goal)
        out = {"plausible": report.plausible}
        if report.countermodel is not None:
            out["countermodel"] = {k: str(v)
                                   for k, v in report.countermodel.items()}
        return out
    if name == "axiomatize":
        pre = parse_preexpr(args["statement"], service.env, {})
        stmt = elaborate(service.env, pre, expected=Sort(LevelLit(0)))
        service.env = axiomatize(service.env, args["decl_name"], stmt,
                                 args.get("source", "remote request"))
        return {"axiomatized": args["decl_name"],
                "trusted": [str(d.name) for d in service.env.trusted_axioms()]}
    raise TacticError(f"unknown tactic {name!r}", stage="dispatch")
