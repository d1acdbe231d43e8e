"""Linear arithmetic over hypotheses `p ⋈ 0`: Farkas certificate checking
(the trust boundary), a local Fourier-Motzkin certificate oracle, and a
remote oracle backed by the algebra engine's linear programming. The
search is a black box; only `check_farkas` is trusted."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..cas.expr import Sym, app, render
from ..kernel.env import Environment
from ..kernel.expr import Const, Expr, LocalConst, app_spine, mk_const
from ..link.client import Link, RemoteError, execute
from .results import (
    CertificateRejected,
    OracleFailed,
    UnsupportedHypothesis,
    VerifiedResult,
)
from .ring import ring_poly

Rel = str  # "le" | "lt" | "eq"


@dataclass(frozen=True)
class LinAtom:
    """Normalized linear hypothesis: terms + constant REL 0."""

    terms: tuple[tuple[str, Fraction], ...]
    const: Fraction
    rel: Rel

    @staticmethod
    def make(terms: dict[str, Fraction], const, rel: Rel) -> "LinAtom":
        return LinAtom(tuple(sorted((v, c) for v, c in terms.items() if c)),
                       Fraction(const), rel)

    def term_map(self) -> dict[str, Fraction]:
        return dict(self.terms)

    def variables(self) -> set[str]:
        return {v for v, _ in self.terms}


@dataclass(frozen=True)
class FarkasCertificate:
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(values: Sequence) -> "FarkasCertificate":
        return FarkasCertificate(tuple(Fraction(v) for v in values))


_FLIP = {"lt": "lt", "le": "le", "gt": "lt", "ge": "le", "eq": "eq"}


def linatom_of_kernel(e: Expr) -> LinAtom:
    """Normalize an elaborated comparison into `p ⋈ 0` form; `>=`/`>` flip
    sides, `!=` hypotheses are rejected."""
    head, args = app_spine(e)
    if not isinstance(head, Const) or len(args) < 2:
        raise UnsupportedHypothesis(f"not a comparison: {head!r}",
                                    stage="linarith")
    rel_name = str(head.name)
    if rel_name == "ne":
        raise UnsupportedHypothesis(
            "disequality hypotheses are not supported", stage="linarith")
    if rel_name not in _FLIP:
        raise UnsupportedHypothesis(f"unsupported relation {rel_name}",
                                    stage="linarith")
    lhs, rhs = args[-2], args[-1]
    if rel_name in ("gt", "ge"):
        lhs, rhs = rhs, lhs
    diff = ring_poly(lhs) - ring_poly(rhs)
    terms: dict[str, Fraction] = {}
    const = Fraction(0)
    for mono, coeff in diff.terms.items():
        if mono == ():
            const = coeff
        elif len(mono) == 1 and mono[0][1] == 1:
            terms[_var_name(mono[0][0])] = coeff
        else:
            raise UnsupportedHypothesis("nonlinear hypothesis",
                                        stage="linarith")
    return LinAtom.make(terms, const, _FLIP[rel_name])


def _var_name(key) -> str:
    # ring_poly keys variables by MStr(unique name); show the pretty tail
    text = getattr(key, "value", str(key))
    return text.rsplit(".", 1)[-1] if "." in text else text


def check_farkas(hyps: Sequence[LinAtom], cert: FarkasCertificate) -> bool:
    """Total predicate: the nonnegative combination of the hypotheses must
    cancel every variable and leave an impossible constant comparison.
    Equality hypotheses may carry multipliers of either sign."""
    if len(hyps) != len(cert.coeffs):
        return False
    if all(c == 0 for c in cert.coeffs):
        return False
    for h, c in zip(hyps, cert.coeffs):
        if h.rel != "eq" and c < 0:
            return False
    combined: dict[str, Fraction] = {}
    q = Fraction(0)
    for h, c in zip(hyps, cert.coeffs):
        q += c * h.const
        for v, coeff in h.terms:
            combined[v] = combined.get(v, Fraction(0)) + c * coeff
    if any(combined.values()):
        return False
    if q > 0:
        return True
    strict_mass = any(c > 0 for h, c in zip(hyps, cert.coeffs)
                      if h.rel == "lt")
    return q >= 0 and strict_mass


Oracle = Callable[[Sequence[LinAtom]], Optional[Sequence[Fraction]]]


# --- local Fourier-Motzkin oracle -------------------------------------------------

_FM_VAR_LIMIT = 12


def fourier_motzkin_oracle(hyps: Sequence[LinAtom]
                           ) -> Optional[list[Fraction]]:
    """Eliminate variables pairwise, tracking how each derived row was
    combined from the originals; an impossible constant row yields the
    certificate."""
    n = len(hyps)
    rows: list[tuple[dict[str, Fraction], Fraction, bool, list[Fraction]]] = []

    def add_row(terms, const, strict, mults):
        rows.append((dict(terms), const, strict, mults))

    for i, h in enumerate(hyps):
        mults = [Fraction(0)] * n
        mults[i] = Fraction(1)
        if h.rel == "eq":
            add_row(h.term_map(), h.const, False, mults)
            neg_mults = [Fraction(0)] * n
            neg_mults[i] = Fraction(-1)
            add_row({v: -c for v, c in h.terms}, -h.const, False, neg_mults)
        else:
            add_row(h.term_map(), h.const, h.rel == "lt", mults)
    variables = sorted({v for h in hyps for v in h.variables()})
    if len(variables) > _FM_VAR_LIMIT:
        return None
    for var in variables:
        positive = [r for r in rows if r[0].get(var, 0) > 0]
        negative = [r for r in rows if r[0].get(var, 0) < 0]
        keep = [r for r in rows if not r[0].get(var, 0)]
        for tp, cp, sp, mp in positive:
            for tn, cn, sn, mn in negative:
                a, b = tp[var], -tn[var]  # both positive
                terms = {}
                for v in set(tp) | set(tn):
                    coeff = b * tp.get(v, Fraction(0)) + a * tn.get(v, Fraction(0))
                    if coeff:
                        terms[v] = coeff
                const = b * cp + a * cn
                mults = [b * x + a * y for x, y in zip(mp, mn)]
                keep.append((terms, const, sp or sn, mults))
        rows = keep
    for terms, const, strict, mults in rows:
        assert not terms
        if const > 0 or (const == 0 and strict):
            return _eq_merged(mults, hyps)
    return None


def _eq_merged(mults: list[Fraction], hyps: Sequence[LinAtom]
               ) -> list[Fraction]:
    return list(mults)


# --- remote oracle -----------------------------------------------------------------

def cas_oracle(link: Link) -> Oracle:
    """Certificate search delegated to the engine's linear programming,
    exactly the dual-program query scaled to integers."""

    def run(hyps: Sequence[LinAtom]) -> Optional[list[Fraction]]:
        var_names = sorted({v for h in hyps for v in h.variables()})
        rename = {v: Sym(f"v{i}") for i, v in enumerate(var_names)}
        constraint_texts = []
        for h in hyps:
            terms = [app("Times", _frac_expr(c), rename[v]) for v, c in h.terms]
            lhs = app("Plus", *terms, _frac_expr(h.const)) if terms \
                else _frac_expr(h.const)
            head = {"lt": "Less", "le": "LessEqual", "eq": "Equal"}[h.rel]
            constraint_texts.append(render(app(head, lhs, _frac_expr(0))))
        cvars = ", ".join(f"c{i}" for i in range(len(hyps)))
        command = (f"FarkasCertificate[{{{', '.join(constraint_texts)}}}, "
                   f"{{{cvars}}}]")
        try:
            result = execute(link, command)
        except RemoteError as exc:
            raise OracleFailed(str(exc), stage="linarith") from exc
        from ..cas.expr import App as CApp, MInt
        match result:
            case CApp(Sym("List"), ()):
                return None
            case CApp(Sym("List"), items) if all(isinstance(i, MInt)
                                                 for i in items):
                return [Fraction(i.value) for i in items]
            case _:
                raise OracleFailed(f"unexpected oracle reply: {render(result)}",
                                   stage="linarith")

    return run


def _frac_expr(value):
    from ..cas.expr import rational

    return rational(Fraction(value))


# --- the tactic --------------------------------------------------------------------

def linarith(env: Environment, hyps: Sequence[LinAtom],
             oracle: Optional[Oracle] = None) -> VerifiedResult:
    """Refute a set of linear hypotheses: get a certificate from the
    oracle, check it independently, conclude falsity."""
    search = oracle if oracle is not None else fourier_motzkin_oracle
    found = search(hyps)
    if found is None:
        raise OracleFailed("no certificate found (system may be satisfiable)",
                           stage="linarith")
    cert = FarkasCertificate.of(found)
    if not check_farkas(hyps, cert):
        raise CertificateRejected(
            f"oracle certificate failed the Farkas check: {found}",
            stage="linarith")
    return VerifiedResult(mk_const("false"), method="linarith:farkas")
