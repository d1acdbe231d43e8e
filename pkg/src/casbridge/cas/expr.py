"""Symbolic expression values for the algebra engine: symbols, strings,
arbitrary-precision integers, 64-bit reals, and applications, with the
deterministic full-form renderer and the JSON wire codec."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

_SYM_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*$|\$ctx\$[A-Za-z0-9]+$")


class CasError(Exception):
    """Base class for algebra-engine failures."""


class WireError(CasError):
    pass


class CasExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Sym(CasExpr):
    name: str

    def __post_init__(self) -> None:
        if not _SYM_NAME.match(self.name):
            raise ValueError(f"bad symbol name {self.name!r}")


@dataclass(frozen=True)
class MStr(CasExpr):
    value: str


@dataclass(frozen=True)
class MInt(CasExpr):
    value: int


@dataclass(frozen=True)
class MReal(CasExpr):
    value: float


@dataclass(frozen=True)
class App(CasExpr):
    head: CasExpr
    args: tuple[CasExpr, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


Atom = Union[Sym, MStr, MInt, MReal]


def app(head: CasExpr | str, *args: CasExpr) -> App:
    if isinstance(head, str):
        head = Sym(head)
    return App(head, tuple(args))


def list_expr(*args: CasExpr) -> App:
    return app("List", *args)


def rational(value: Fraction | int) -> CasExpr:
    """Exact rational as an engine value: MInt when integral, else
    Rational[num, den]."""
    f = Fraction(value)
    if f.denominator == 1:
        return MInt(f.numerator)
    return app("Rational", MInt(f.numerator), MInt(f.denominator))


def as_fraction(e: CasExpr) -> Fraction:
    """Read an exact numeric value; raises CasError on anything else."""
    match e:
        case MInt(v):
            return Fraction(v)
        case App(Sym("Rational"), (MInt(n), MInt(d))):
            return Fraction(n, d)
        case App(Sym("Minus"), (inner,)):
            return -as_fraction(inner)
        case _:
            raise CasError(f"not an exact number: {render(e)}")


def is_number(e: CasExpr) -> bool:
    match e:
        case MInt(_) | MReal(_):
            return True
        case App(Sym("Rational"), (MInt(_), MInt(_))):
            return True
        case _:
            return False


def numeric_value(e: CasExpr) -> Union[Fraction, float]:
    if isinstance(e, MReal):
        return e.value
    return as_fraction(e)


def render(e: CasExpr) -> str:
    """Deterministic full-form text; `parse(render(e)) == e`."""
    match e:
        case Sym(name):
            return name
        case MStr(v):
            return json.dumps(v)
        case MInt(v):
            return str(v)
        case MReal(v):
            return repr(v)
        case App(head, args):
            inner = ", ".join(render(a) for a in args)
            head_text = render(head)
            # negative numeric heads would re-parse as unary minus
            if isinstance(head, (MInt, MReal)) and head_text.startswith("-"):
                head_text = f"({head_text})"
            return f"{head_text}[{inner}]"
    raise CasError(f"unrenderable: {e!r}")


def structural_key(e: CasExpr) -> tuple:
    """A total order key over expressions; used for canonical argument
    ordering and deterministic variable ordering."""
    match e:
        case MInt(v):
            return (0, Fraction(v), "")
        case App(Sym("Rational"), (MInt(n), MInt(d))):
            return (0, Fraction(n, d), "")
        case MReal(v):
            return (0, v, "~")
        case Sym(name):
            return (1, name)
        case MStr(v):
            return (2, v)
        case App(head, args):
            return (3, structural_key(head), tuple(structural_key(a)
                                                   for a in args))
    raise CasError(f"unorderable: {e!r}")


def term_degree(e: CasExpr) -> int:
    """Polynomial-ish total degree used by the canonical term order."""
    if is_number(e):
        return 0
    match e:
        case App(Sym("Power"), (b, MInt(n))) if n >= 0:
            return n * term_degree(b)
        case App(Sym("Times"), args):
            return sum(term_degree(a) for a in args)
        case App(Sym("Plus"), args):
            return max((term_degree(a) for a in args), default=0)
        case _:
            return 1


def canonical_order_key(e: CasExpr) -> tuple:
    """Numbers first by value, then terms by rising degree; matches the
    display order `1 - 2x + x^2`."""
    if is_number(e):
        return (0, 0, structural_key(e))
    return (1, term_degree(e), structural_key(e))


# --- wire codec ---------------------------------------------------------------

def to_wire(e: CasExpr) -> dict:
    match e:
        case Sym(name):
            return {"k": "sym", "v": name}
        case MStr(v):
            return {"k": "str", "v": v}
        case MInt(v):
            return {"k": "int", "v": str(v)}
        case MReal(v):
            return {"k": "real", "v": v}
        case App(head, args):
            return {"k": "app", "h": to_wire(head),
                    "a": [to_wire(a) for a in args]}
    raise WireError(f"unencodable: {e!r}")


def from_wire(obj: object) -> CasExpr:
    if not isinstance(obj, dict) or "k" not in obj:
        raise WireError(f"malformed wire object: {obj!r}")
    kind = obj["k"]
    try:
        if kind == "sym":
            return Sym(obj["v"])
        if kind == "str":
            if not isinstance(obj["v"], str):
                raise WireError("str payload must be a string")
            return MStr(obj["v"])
        if kind == "int":
            if not isinstance(obj["v"], str):
                raise WireError("int payload must be a decimal string")
            return MInt(int(obj["v"]))
        if kind == "real":
            return MReal(float(obj["v"]))
        if kind == "app":
            return App(from_wire(obj["h"]),
                       tuple(from_wire(a) for a in obj["a"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise WireError(f"malformed wire object: {obj!r}") from exc
    raise WireError(f"unknown wire tag {kind!r}")
