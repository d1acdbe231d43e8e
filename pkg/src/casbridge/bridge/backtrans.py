"""Back-translation from algebra-engine expressions to kernel
pre-expressions, driven by three user-extensible rule classes: symbol
rules, head-keyed application rules, and unkeyed application rules tried
in registration order with failure falling through to the next rule.

Binding heads (`Function`, `ForAll`, `Exists`) extend the translation
environment with a fresh placeholder local, translate the body, and
abstract over the placeholder again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..cas.expr import App as CApp
from ..cas.expr import CasError, CasExpr, MInt, MReal, MStr, Sym, render
from ..kernel.expr import (
    BinderInfo,
    Expr,
    Lam,
    LocalConst,
    Name,
    Pi,
    Placeholder,
    abstract,
    fresh_local,
    lift,
    mk_app,
    mk_const,
)
from ..kernel.numerals import numeral_encode
from .reflect import decode_reflection, MalformedReflection


class NoApplicableRule(CasError):
    def __init__(self, message: str, head: Optional[str] = None):
        super().__init__(message)
        self.head = head


class RuleFailed(CasError):
    """Raised inside a translation rule to fall through to the next one."""


class TransEnv:
    """Immutable mapping from engine symbol names to kernel expressions."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Optional[dict[str, Expr]] = None):
        self._map: dict[str, Expr] = dict(mapping) if mapping else {}

    def extend(self, name: str, value: Expr) -> "TransEnv":
        child = TransEnv(self._map)
        child._map[name] = value
        return child

    def lookup(self, name: str) -> Optional[Expr]:
        return self._map.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._map


KeyedTranslator = Callable[["Translator", TransEnv, list[CasExpr]], Expr]
UnkeyedTranslator = Callable[["Translator", TransEnv, CasExpr, list[CasExpr]], Expr]


@dataclass(frozen=True)
class SymRule:
    cas_symbol: str
    target: Expr

    def __post_init__(self) -> None:
        if not self.cas_symbol:
            raise ValueError("empty symbol in rule")


@dataclass(frozen=True)
class KeyedAppRule:
    key: str
    translator: KeyedTranslator


@dataclass(frozen=True)
class UnkeyedAppRule:
    translator: UnkeyedTranslator


@dataclass
class RuleRegistry:
    sym_rules: list[SymRule] = field(default_factory=list)
    keyed_rules: dict[str, list[KeyedAppRule]] = field(default_factory=dict)
    unkeyed_rules: list[UnkeyedAppRule] = field(default_factory=list)

    def copy(self) -> "RuleRegistry":
        return RuleRegistry(list(self.sym_rules),
                            {k: list(v) for k, v in self.keyed_rules.items()},
                            list(self.unkeyed_rules))

    def with_sym_rule(self, rule: SymRule) -> "RuleRegistry":
        new = self.copy()
        new.sym_rules.append(rule)
        return new

    def with_keyed_rule(self, rule: KeyedAppRule) -> "RuleRegistry":
        new = self.copy()
        new.keyed_rules.setdefault(rule.key, []).append(rule)
        return new

    def with_unkeyed_rule(self, rule: UnkeyedAppRule) -> "RuleRegistry":
        new = self.copy()
        new.unkeyed_rules.append(rule)
        return new


class Translator:
    def __init__(self, registry: RuleRegistry):
        self.registry = registry

    def translate(self, env: TransEnv, e: CasExpr) -> Expr:
        match e:
            case MInt(n):
                encoded = numeral_encode(abs(n))
                return mk_app(mk_const("neg"), encoded) if n < 0 else encoded
            case MReal(_):
                raise NoApplicableRule(
                    "no default interpretation for reals; register a rule")
            case MStr(_):
                raise NoApplicableRule(
                    "no default interpretation for strings; register a rule")
            case Sym(name):
                bound = env.lookup(name)
                if bound is not None:
                    return bound
                for rule in self.registry.sym_rules:
                    if rule.cas_symbol == name:
                        return rule.target
                raise NoApplicableRule(f"unknown symbol {name}", head=name)
            case CApp(Sym(head), args):
                for rule in self.registry.keyed_rules.get(head, []):
                    try:
                        return rule.translator(self, env, list(args))
                    except (RuleFailed, NoApplicableRule, MalformedReflection):
                        continue
                return self._unkeyed(env, e.head, list(args), head)
            case CApp(head, args):
                return self._unkeyed(env, head, list(args), None)
        raise NoApplicableRule(f"untranslatable expression {render(e)}")

    def _unkeyed(self, env: TransEnv, head: CasExpr, args: list[CasExpr],
                 head_name: Optional[str]) -> Expr:
        for rule in self.registry.unkeyed_rules:
            try:
                return rule.translator(self, env, head, args)
            except (RuleFailed, NoApplicableRule, MalformedReflection):
                continue
        raise NoApplicableRule(
            f"no applicable rule for head "
            f"{head_name if head_name else render(head)}",
            head=head_name)

    def binder_body(self, env: TransEnv, sym: CasExpr, body: CasExpr,
                    domain: Expr) -> tuple[LocalConst, Expr]:
        """Translate `body` with `sym` bound to a fresh placeholder local."""
        match sym:
            case Sym(name):
                pass
            case _:
                raise RuleFailed("binder variable must be a symbol")
        local = fresh_local(name, domain)
        inner = self.translate(env.extend(name, local), body)
        return local, inner


def pexpr_of_mmexpr(registry: RuleRegistry, env: TransEnv,
                    e: CasExpr) -> Expr:
    """Interpret an engine expression as a kernel pre-expression."""
    return Translator(registry).translate(env, e)


# --- the default rule set -------------------------------------------------------

def _fold_binary(const: str):
    def run(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
        if not args:
            raise RuleFailed("empty application")
        parts = [tr.translate(env, a) for a in args]
        out = parts[0]
        for p in parts[1:]:
            out = mk_app(mk_const(const), out, p)
        return out

    return run


def _binary(const: str):
    def run(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
        if len(args) != 2:
            raise RuleFailed(f"{const} expects two arguments")
        return mk_app(mk_const(const), tr.translate(env, args[0]),
                      tr.translate(env, args[1]))

    return run


def _unary(const: str):
    def run(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
        if len(args) != 1:
            raise RuleFailed(f"{const} expects one argument")
        return mk_app(mk_const(const), tr.translate(env, args[0]))

    return run


def _chain_relation(const: str):
    def run(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
        if len(args) < 2:
            raise RuleFailed("relation needs two sides")
        parts = [tr.translate(env, a) for a in args]
        atoms = [mk_app(mk_const(const), a, b)
                 for a, b in zip(parts, parts[1:])]
        out = atoms[0]
        for nxt in atoms[1:]:
            out = mk_app(mk_const("and"), out, nxt)
        return out

    return run


def _rational_rule(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
    match args:
        case [MInt(n), MInt(d)] if d > 0:
            core = mk_app(mk_const("div"), numeral_encode(abs(n)),
                          numeral_encode(d))
            return mk_app(mk_const("neg"), core) if n < 0 else core
        case _:
            raise RuleFailed("Rational expects two integers")


def _implies_rule(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
    if len(args) != 2:
        raise RuleFailed("Implies expects two arguments")
    lhs = tr.translate(env, args[0])
    rhs = tr.translate(env, args[1])
    return Pi(Name.of("h"), BinderInfo.DEFAULT, lhs, lift(rhs, 1))


def _function_rule(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
    if len(args) != 2:
        raise RuleFailed("Function expects a symbol and a body")
    local, inner = tr.binder_body(env, args[0], args[1], Placeholder())
    return Lam(local.pretty, BinderInfo.DEFAULT, Placeholder(),
               abstract(inner, local))


def _forall_rule(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
    if len(args) != 2:
        raise RuleFailed("ForAll expects a symbol and a body")
    local, inner = tr.binder_body(env, args[0], args[1], mk_const("real"))
    return Pi(local.pretty, BinderInfo.DEFAULT, mk_const("real"),
              abstract(inner, local))


def _exists_rule(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
    if len(args) != 2:
        raise RuleFailed("Exists expects a symbol and a body")
    local, inner = tr.binder_body(env, args[0], args[1], mk_const("real"))
    lam = Lam(local.pretty, BinderInfo.DEFAULT, mk_const("real"),
              abstract(inner, local))
    return mk_app(mk_const("Exists"), lam)


def _decode_rule(tr: Translator, env: TransEnv, head: str,
                 args: list[CasExpr]) -> Expr:
    """Reflected nodes decode to their original kernel form; compound
    fields go back through the translator so partially interpreted trees
    still come home."""
    return decode_reflection(CApp(Sym(head), tuple(args)))


def _pure_reflection(head: str):
    def run(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
        return decode_reflection(CApp(Sym(head), tuple(args)))

    return run


def _lean_app_rule(tr: Translator, env: TransEnv, args: list[CasExpr]) -> Expr:
    if len(args) != 2:
        raise RuleFailed("LeanApp expects two arguments")
    return mk_app(tr.translate(env, args[0]), tr.translate(env, args[1]))


def _hold_splice_rule(tr: Translator, env: TransEnv, head: CasExpr,
                      args: list[CasExpr]) -> Expr:
    spliced: list[CasExpr] = []
    found = False
    for a in args:
        match a:
            case CApp(Sym("Hold"), inner):
                spliced.extend(inner)
                found = True
            case _:
                spliced.append(a)
    if not found:
        raise RuleFailed("no Hold to splice")
    return tr.translate(env, CApp(head, tuple(spliced)))


def _inactive_strip_rule(tr: Translator, env: TransEnv, head: CasExpr,
                         args: list[CasExpr]) -> Expr:
    match head:
        case CApp(Sym("Inactive"), (inner,)):
            return tr.translate(env, CApp(inner, tuple(args)))
        case _:
            raise RuleFailed("head is not an Inactive wrapper")


def _fold_application_rule(tr: Translator, env: TransEnv, head: CasExpr,
                           args: list[CasExpr]) -> Expr:
    out = tr.translate(env, head)
    for a in args:
        out = mk_app(out, tr.translate(env, a))
    return out


def default_registry() -> RuleRegistry:
    reg = RuleRegistry()
    for sym, const in (("Real", "real"), ("Nat", "nat"), ("Int", "int"),
                       ("True", "true"), ("False", "false")):
        reg.sym_rules.append(SymRule(sym, mk_const(const)))
    keyed: list[tuple[str, KeyedTranslator]] = [
        ("Plus", _fold_binary("add")),
        ("Times", _fold_binary("mul")),
        ("Subtract", _binary("sub")),
        ("Divide", _binary("div")),
        ("Power", _binary("pow_nat")),
        ("Minus", _unary("neg")),
        ("Equal", _chain_relation("eq")),
        ("Unequal", _chain_relation("ne")),
        ("Less", _chain_relation("lt")),
        ("LessEqual", _chain_relation("le")),
        ("Greater", _chain_relation("gt")),
        ("GreaterEqual", _chain_relation("ge")),
        ("And", _fold_binary("and")),
        ("Or", _fold_binary("or")),
        ("Not", _unary("not")),
        ("Implies", _implies_rule),
        ("Rational", _rational_rule),
        ("Function", _function_rule),
        ("ForAll", _forall_rule),
        ("Exists", _exists_rule),
        ("LeanApp", _lean_app_rule),
    ]
    for head in ("LeanVar", "LeanSort", "LeanConst", "LeanMVar", "LeanLocal",
                 "LeanLambda", "LeanPi", "LeanLet"):
        keyed.append((head, _pure_reflection(head)))
    for key, fn in keyed:
        reg.keyed_rules.setdefault(key, []).append(KeyedAppRule(key, fn))
    reg.unkeyed_rules.append(UnkeyedAppRule(_hold_splice_rule))
    reg.unkeyed_rules.append(UnkeyedAppRule(_inactive_strip_rule))
    reg.unkeyed_rules.append(UnkeyedAppRule(_fold_application_rule))
    return reg


def load_sym_rules(registry: RuleRegistry, path: str) -> RuleRegistry:
    """Extend a registry from a rule file: lines `CasSymbol = kernel.name`,
    `#` comments."""
    reg = registry.copy()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CasError(f"{path}:{lineno}: expected `Symbol = name`")
            sym, _, target = (p.strip() for p in line.partition("="))
            if not sym or not target:
                raise CasError(f"{path}:{lineno}: expected `Symbol = name`")
            reg.sym_rules.append(SymRule(sym, mk_const(target)))
    return reg
