"""Independent reference implementations used only to cross-check the
package: a named-variable substituter, a random expression generator, a
naive polynomial expander, and a naive linear-combination summer."""

from __future__ import annotations

import random
from fractions import Fraction

from casbridge.kernel import (
    App,
    BinderInfo,
    Const,
    Expr,
    Lam,
    Let,
    LevelLit,
    LocalConst,
    MVar,
    Name,
    Pi,
    Sort,
    Var,
)

# --- named-variable substitution oracle --------------------------------------
#
# Convert to a named tree ("bvar", binder-id) / ("fvar", k), substitute the
# free variable 0 there, convert back. Shifting falls out of the conversions,
# so this path shares no code with kernel.instantiate.


def _to_named(e: Expr, stack: list[int], counter: list[int]):
    match e:
        case Var(k):
            if k < len(stack):
                return ("bvar", stack[k])
            return ("fvar", k - len(stack))
        case App(f, a):
            return ("app", _to_named(f, stack, counter),
                    _to_named(a, stack, counter))
        case Lam(n, bi, t, b) | Pi(n, bi, t, b):
            tag = "lam" if isinstance(e, Lam) else "pi"
            ident = counter[0]
            counter[0] += 1
            return (tag, str(n), bi, ident, _to_named(t, stack, counter),
                    _to_named(b, [ident] + stack, counter))
        case Let(n, t, v, b):
            ident = counter[0]
            counter[0] += 1
            return ("let", str(n), ident, _to_named(t, stack, counter),
                    _to_named(v, stack, counter),
                    _to_named(b, [ident] + stack, counter))
        case LocalConst(u, p, bi, t):
            return ("local", str(u), str(p), bi, _to_named(t, stack, counter))
        case MVar(n, t):
            return ("mvar", str(n), _to_named(t, stack, counter))
        case _:
            return ("leaf", e)


def _subst_named(tree, k: int, repl):
    match tree:
        case ("fvar", j):
            if j == k:
                return repl
            if j > k:
                return ("fvar", j - 1)
            return tree
        case ("app", f, a):
            return ("app", _subst_named(f, k, repl), _subst_named(a, k, repl))
        case ("lam" | "pi", n, bi, ident, t, b):
            return (tree[0], n, bi, ident, _subst_named(t, k, repl),
                    _subst_named(b, k, repl))
        case ("let", n, ident, t, v, b):
            return ("let", n, ident, _subst_named(t, k, repl),
                    _subst_named(v, k, repl), _subst_named(b, k, repl))
        case ("local", u, p, bi, t):
            return ("local", u, p, bi, _subst_named(t, k, repl))
        case ("mvar", n, t):
            return ("mvar", n, _subst_named(t, k, repl))
        case _:
            return tree


def _from_named(tree, stack: list[int]) -> Expr:
    match tree:
        case ("bvar", ident):
            return Var(stack.index(ident))
        case ("fvar", j):
            return Var(j + len(stack))
        case ("app", f, a):
            return App(_from_named(f, stack), _from_named(a, stack))
        case ("lam" | "pi", n, bi, ident, t, b):
            ctor = Lam if tree[0] == "lam" else Pi
            return ctor(Name.of(n), bi, _from_named(t, stack),
                        _from_named(b, [ident] + stack))
        case ("let", n, ident, t, v, b):
            return Let(Name.of(n), _from_named(t, stack),
                       _from_named(v, stack), _from_named(b, [ident] + stack))
        case ("local", u, p, bi, t):
            return LocalConst(Name.of(u), Name.of(p), bi,
                              _from_named(t, stack))
        case ("mvar", n, t):
            return MVar(Name.of(n), _from_named(t, stack))
        case ("leaf", e):
            return e
    raise AssertionError(tree)


def instantiate_oracle(body: Expr, replacement: Expr) -> Expr:
    counter = [0]
    named_body = _to_named(body, [], counter)
    named_repl = _to_named(replacement, [], counter)
    return _from_named(_subst_named(named_body, 0, named_repl), [])


# --- random expression generation --------------------------------------------

_CONST_POOL = ["real", "nat", "add", "one", "and", "or.inl", "false"]


def random_expr(rng: random.Random, depth: int, binders: int = 0,
                allow_pre: bool = False) -> Expr:
    """A random well-scoped expression (closed when binders=0)."""
    leaves = ["sort", "const", "local"]
    if binders > 0:
        leaves.append("var")
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(leaves + ["app", "app", "lam", "pi", "let", "mvar"])
    if kind == "var":
        return Var(rng.randrange(binders))
    if kind == "sort":
        return Sort(LevelLit(rng.randrange(3)))
    if kind == "const":
        name = rng.choice(_CONST_POOL)
        levels = (LevelLit(0),) if rng.random() < 0.3 else ()
        return Const(Name.of(name), levels)
    if kind == "local":
        return LocalConst(Name.of(f"u{rng.randrange(40)}"),
                          Name.of(rng.choice("xyzw")),
                          rng.choice(list(BinderInfo)),
                          random_expr(rng, 0, binders))
    if kind == "app":
        return App(random_expr(rng, depth - 1, binders),
                   random_expr(rng, depth - 1, binders))
    if kind == "mvar":
        return MVar(Name.of(f"m{rng.randrange(20)}"),
                    random_expr(rng, depth - 1, binders))
    if kind == "let":
        return Let(Name.of(rng.choice("abc")),
                   random_expr(rng, depth - 1, binders),
                   random_expr(rng, depth - 1, binders),
                   random_expr(rng, depth - 1, binders + 1))
    ctor = Lam if kind == "lam" else Pi
    return ctor(Name.of(rng.choice("abc")), rng.choice(list(BinderInfo)),
                random_expr(rng, depth - 1, binders),
                random_expr(rng, depth - 1, binders + 1))


# --- naive multivariate polynomial arithmetic --------------------------------
#
# Polynomials as {frozenset({(var, exp), ...}): Fraction}; a deliberately
# separate representation from casbridge.cas.poly.


def naive_const(c) -> dict:
    c = Fraction(c)
    return {frozenset(): c} if c else {}


def naive_var(name: str) -> dict:
    return {frozenset({(name, 1)}): Fraction(1)}


def naive_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, Fraction(0)) + c
        if not out[m]:
            del out[m]
    return out


def naive_neg(p: dict) -> dict:
    return {m: -c for m, c in p.items()}


def naive_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            exps: dict = {}
            for v, e in list(m1) + list(m2):
                exps[v] = exps.get(v, 0) + e
            m = frozenset(exps.items())
            out[m] = out.get(m, Fraction(0)) + c1 * c2
            if not out[m]:
                del out[m]
    return out


def naive_pow(p: dict, n: int) -> dict:
    out = naive_const(1)
    for _ in range(n):
        out = naive_mul(out, p)
    return out


def naive_linear_combination(coeffs, rows) -> dict:
    """Sum of coeff * row over aligned sequences of (coeff, poly-dict)."""
    acc: dict = {}
    for c, row in zip(coeffs, rows):
        acc = naive_add(acc, naive_mul(naive_const(c), row))
    return acc
