"""Exact multivariate polynomials over the rationals, and the restricted
factorizer: square-free decomposition, rational-root extraction, quadratic
discriminant tests, and cyclotomic splitting of `t^n - 1` / `t^n + 1`.

Variables are arbitrary engine expressions (anything that is not a number
or an arithmetic application), so reflected kernel subtrees work as
polynomial indeterminates unchanged.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .expr import (
    App,
    CasError,
    CasExpr,
    MInt,
    Sym,
    app,
    as_fraction,
    canonical_order_key,
    is_number,
    rational,
    structural_key,
)

Monomial = tuple[tuple[CasExpr, int], ...]


class NotAPolynomial(CasError):
    pass


class UnsupportedShape(CasError):
    pass


class Poly:
    """Mapping from monomials to nonzero rational coefficients; the empty
    mapping is the zero polynomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict[Monomial, Fraction]] = None):
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = c

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({(): c} if c else {})

    @staticmethod
    def var(v: CasExpr) -> "Poly":
        return Poly({((v, 1),): Fraction(1)})

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"Poly({self.terms!r})"

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise NotAPolynomial("not a constant polynomial")
        return self.terms.get((), Fraction(0))

    def variables(self) -> list[CasExpr]:
        seen = {v for m in self.terms for v, _ in m}
        return sorted(seen, key=structural_key)

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def scale(self, k) -> "Poly":
        k = Fraction(k)
        if not k:
            return Poly()
        return Poly({m: c * k for m, c in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(out)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise NotAPolynomial("negative power")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    exps: dict[CasExpr, int] = {}
    for v, e in m1 + m2:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda ve: structural_key(ve[0])))


_ARITH_HEADS = {"Plus", "Times", "Power", "Subtract", "Minus", "Divide"}


def poly_of_cas(e: CasExpr) -> Poly:
    """Interpret an engine expression as a polynomial; non-arithmetic
    subtrees become indeterminates."""
    if is_number(e):
        f = as_fraction(e) if not _is_real(e) else None
        if f is None:
            raise NotAPolynomial("float coefficients are not exact")
        return Poly.const(f)
    match e:
        case App(Sym("Plus"), args):
            out = Poly()
            for a in args:
                out = out + poly_of_cas(a)
            return out
        case App(Sym("Times"), args):
            out = Poly.const(1)
            for a in args:
                out = out * poly_of_cas(a)
            return out
        case App(Sym("Subtract"), (a, b)):
            return poly_of_cas(a) - poly_of_cas(b)
        case App(Sym("Minus"), (a,)):
            return -poly_of_cas(a)
        case App(Sym("Divide"), (a, b)):
            divisor = poly_of_cas(b)
            if not divisor.is_const():
                raise NotAPolynomial("division by a non-constant")
            c = divisor.const_value()
            if not c:
                raise NotAPolynomial("division by zero")
            return poly_of_cas(a).scale(1 / c)
        case App(Sym("Power"), (b, MInt(n))):
            if n >= 0:
                return poly_of_cas(b) ** n
            base = poly_of_cas(b)
            if base.is_const() and base.const_value():
                return Poly.const(base.const_value() ** n)
            raise NotAPolynomial("negative power of a non-constant")
        case App(Sym(h), _) if h in _ARITH_HEADS:
            raise NotAPolynomial(f"malformed arithmetic application {h}")
        case _:
            return Poly.var(e)


def _is_real(e: CasExpr) -> bool:
    from .expr import MReal

    return isinstance(e, MReal)


def cas_of_poly(p: Poly) -> CasExpr:
    """Canonical rendering: terms in rising canonical order."""
    if p.is_zero():
        return MInt(0)
    parts = []
    for m, c in p.terms.items():
        factors: list[CasExpr] = []
        if c != 1 or not m:
            factors.append(rational(c))
        for v, e in m:
            factors.append(v if e == 1 else app("Power", v, MInt(e)))
        parts.append(factors[0] if len(factors) == 1
                     else app("Times", *factors))
    parts.sort(key=canonical_order_key)
    return parts[0] if len(parts) == 1 else app("Plus", *parts)


# --- dense univariate helpers (index = degree) ---------------------------------

def _dense(p: Poly, v: CasExpr) -> list[Fraction]:
    out = [Fraction(0)] * (p.total_degree() + 1)
    for m, c in p.terms.items():
        if not m:
            out[0] += c
        elif len(m) == 1 and m[0][0] == v:
            out[m[0][1]] += c
        else:
            raise NotAPolynomial("not univariate")
    return _trim(out)


def _from_dense(coeffs: list[Fraction], v: CasExpr) -> Poly:
    terms: dict[Monomial, Fraction] = {}
    for i, c in enumerate(coeffs):
        if c:
            terms[() if i == 0 else ((v, i),)] = c
    return Poly(terms)


def _trim(cs: list[Fraction]) -> list[Fraction]:
    while cs and not cs[-1]:
        cs.pop()
    return cs


def _deg(cs: list[Fraction]) -> int:
    return len(cs) - 1


def _d_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _trim(out)


def _d_divmod(a: list[Fraction], b: list[Fraction]
              ) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while _trim(a) and _deg(a) >= _deg(b):
        shift = _deg(a) - _deg(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i, cb in enumerate(b):
            a[i + shift] -= factor * cb
        a = _trim(a)
    return _trim(q), _trim(a)


def _d_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _d_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _d_deriv(a: list[Fraction]) -> list[Fraction]:
    return _trim([a[i] * i for i in range(1, len(a))])


def _primitive(cs: list[Fraction]) -> tuple[Fraction, list[int]]:
    """content * primitive-integer-part with positive leading coefficient."""
    if not cs:
        return Fraction(0), []
    den_lcm = 1
    for c in cs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in cs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    sign = -1 if ints[-1] < 0 else 1
    unit = g * sign
    return Fraction(unit, den_lcm), [v // unit for v in ints]


# --- cyclotomic table ----------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial (index = degree)."""
    if n == 1:
        return (-1, 1)
    num = [Fraction(0)] * (n + 1)
    num[0], num[n] = Fraction(-1), Fraction(1)
    den = [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            den = _d_mul(den, [Fraction(c) for c in cyclotomic(d)])
    q, r = _d_divmod(num, den)
    assert not r
    return tuple(int(c) for c in q)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# --- factoring ------------------------------------------------------------------

_ROOT_SEARCH_LIMIT = 10 ** 12
_CYCLOTOMIC_LIMIT = 12


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.add(i)
            out.add(n // i)
        i += 1
    return sorted(out)


def _cyclotomic_shape(q: list[int]) -> Optional[list[list[int]]]:
    """Split t^n - 1 / t^n + 1 (n <= limit) via the cyclotomic table."""
    n = len(q) - 1
    if n < 1 or n > _CYCLOTOMIC_LIMIT or q[-1] != 1:
        return None
    if any(q[i] for i in range(1, n)):
        return None
    if q[0] == -1:
        return [list(cyclotomic(d)) for d in _divisors(n)]
    if q[0] == 1:
        return [list(cyclotomic(d)) for d in _divisors(2 * n)
                if n % d != 0]
    return None


def _factor_squarefree_int(q: list[int]) -> tuple[Fraction, list[list[int]]]:
    """Factor a primitive square-free integer polynomial as far as the
    restricted method reaches; returns (unit, irreducible-or-residual parts)."""
    unit = Fraction(1)
    shape = _cyclotomic_shape(q)
    if shape is not None:
        return unit, shape
    factors: list[list[int]] = []
    work = [Fraction(c) for c in q]
    # rational roots give the linear factors
    if abs(q[0]) <= _ROOT_SEARCH_LIMIT and abs(q[-1]) <= _ROOT_SEARCH_LIMIT:
        cand_num = _int_divisors(q[0]) if q[0] else [0]
        cand_den = _int_divisors(q[-1])
        roots = []
        for p in cand_num:
            for d in cand_den:
                for r in (Fraction(p, d), Fraction(-p, d)):
                    if r not in roots and not _d_eval(work, r):
                        roots.append(r)
        for r in roots:
            lin = [Fraction(-r.numerator), Fraction(r.denominator)]
            quo, rem = _d_divmod(work, lin)
            if rem:
                continue
            work = quo
            c, ints = _primitive(lin)
            unit *= c
            factors.append(ints)
    if _deg(work) >= 1:
        # quadratics left here have a non-square discriminant (a square one
        # would have yielded rational roots above), so they are irreducible;
        # higher-degree residue is emitted unfactored
        c, ints = _primitive(work)
        unit *= c
        factors.append(ints)
    elif work:
        unit *= work[0]
    return unit, factors


def _d_eval(cs: Iterable[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(cs)):
        acc = acc * x + c
    return acc


def factor_poly_univariate(p: Poly, v: CasExpr
                           ) -> tuple[Fraction, list[tuple[Poly, int]]]:
    dense = _dense(p, v)
    if not dense:
        return Fraction(0), []
    content, ints = _primitive(dense)
    work = [Fraction(c) for c in ints]
    factors: list[tuple[Poly, int]] = []
    # powers of the variable itself
    k = 0
    while work and not work[0]:
        work.pop(0)
        k += 1
    if k:
        factors.append((Poly.var(v), k))
    if _deg(work) >= 1:
        for part, mult in _squarefree_parts(work):
            _, part_int = _primitive(part)
            unit, irreducibles = _factor_squarefree_int(part_int)
            content *= unit ** mult
            for f in irreducibles:
                factors.append((_from_dense([Fraction(c) for c in f], v), mult))
    elif work:
        content *= work[0]
    return content, factors


def _squarefree_parts(p: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: p = prod a_i^i with the a_i square-free, coprime."""
    out: list[tuple[list[Fraction], int]] = []
    g = _d_gcd(p, _d_deriv(p))
    if _deg(g) == 0:
        return [(p, 1)]
    b, _ = _d_divmod(p, g)
    c, _ = _d_divmod(_d_deriv(p), g)
    d = _trim([ci - bi for ci, bi in
               _zip_longest(c, _d_deriv(b))])
    i = 1
    while _deg(b) >= 1:
        a = _d_gcd(b, d)
        if _deg(a) >= 1:
            out.append((a, i))
        b, _ = _d_divmod(b, a or [Fraction(1)])
        c, _ = _d_divmod(d, a or [Fraction(1)])
        d = _trim([ci - bi for ci, bi in _zip_longest(c, _d_deriv(b))])
        i += 1
    return out


def _zip_longest(a: list[Fraction], b: list[Fraction]):
    n = max(len(a), len(b))
    for i in range(n):
        ca = a[i] if i < len(a) else Fraction(0)
        cb = b[i] if i < len(b) else Fraction(0)
        yield ca, cb


def factor_poly(p: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Factor over the rationals; univariate or homogeneous bivariate."""
    if p.is_zero():
        return Fraction(0), []
    if p.is_const():
        return p.const_value(), []
    variables = p.variables()
    if len(variables) == 1:
        return factor_poly_univariate(p, variables[0])
    if len(variables) == 2:
        return _factor_homogeneous(p, variables[0], variables[1])
    raise UnsupportedShape("only univariate or homogeneous bivariate input")


def _factor_homogeneous(p: Poly, x: CasExpr, y: CasExpr
                        ) -> tuple[Fraction, list[tuple[Poly, int]]]:
    # pull out the monomial gcd first so substituting y=1 keeps the degree
    min_x = min(_mono_exp(m, x) for m in p.terms)
    min_y = min(_mono_exp(m, y) for m in p.terms)
    factors: list[tuple[Poly, int]] = []
    if min_x:
        factors.append((Poly.var(x), min_x))
    if min_y:
        factors.append((Poly.var(y), min_y))
    reduced = Poly({_mono_strip(m, x, min_x, y, min_y): c
                    for m, c in p.terms.items()})
    degrees = {sum(e for _, e in m) for m in reduced.terms}
    if len(degrees) != 1:
        raise UnsupportedShape("multivariate input must be homogeneous")
    total = degrees.pop()
    if total == 0:
        return reduced.const_value(), factors
    dehom = Poly({_subst_one(m, y): c for m, c in reduced.terms.items()})
    content, parts = factor_poly_univariate(dehom, x)
    for f, mult in parts:
        factors.append((_rehomogenize(f, x, y), mult))
    return content, factors


def _mono_exp(m: Monomial, v: CasExpr) -> int:
    for var, e in m:
        if var == v:
            return e
    return 0


def _mono_strip(m: Monomial, x: CasExpr, dx: int, y: CasExpr, dy: int) -> Monomial:
    out = []
    for var, e in m:
        r = e - (dx if var == x else dy if var == y else 0)
        if r:
            out.append((var, r))
    return tuple(out)


def _subst_one(m: Monomial, y: CasExpr) -> Monomial:
    return tuple((var, e) for var, e in m if var != y)


def _rehomogenize(f: Poly, x: CasExpr, y: CasExpr) -> Poly:
    d = f.total_degree()
    terms: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        ex = _mono_exp(m, x)
        ey = d - ex
        mono = tuple(sorted(
            ([(x, ex)] if ex else []) + ([(y, ey)] if ey else []),
            key=lambda ve: structural_key(ve[0])))
        terms[mono] = c
    return Poly(terms)


def factor_cas(e: CasExpr) -> CasExpr:
    """Factor an expression, rendered as content * product of powers."""
    p = poly_of_cas(e)
    content, factors = factor_poly(p)
    parts: list[CasExpr] = []
    if content != 1 or not factors:
        parts.append(rational(content))
    for f, mult in sorted(factors,
                          key=lambda fm: canonical_order_key(cas_of_poly(fm[0]))):
        base = cas_of_poly(f)
        parts.append(base if mult == 1 else app("Power", base, MInt(mult)))
    if len(parts) == 1:
        return parts[0]
    return app("Times", *parts)


def expand_cas(e: CasExpr) -> CasExpr:
    return cas_of_poly(poly_of_cas(e))
