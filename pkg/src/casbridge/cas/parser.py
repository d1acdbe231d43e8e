"""Surface syntax for engine expressions.

Accepts full form `Head[a, b]` plus the infix sugar layer: arithmetic
operators, comparisons, logical connectives, postfix `// f`, list braces,
`[[i]]` part extraction, blanks (`x_`, `_`), assignment (`=`, `:=`), and
juxtaposed multiplication (`2x`). Precedence, loosest first:

    = :=   //   ||   &&   !   == < <= > >=   + -   * /   unary -   ^
"""

from __future__ import annotations

import re
from typing import Optional, Sequence, Union

from .expr import App, CasError, CasExpr, MInt, MReal, MStr, Sym, app

_TOKEN = re.compile(r"""
    (?P<real>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<sym>(\$ctx\$)?[A-Za-z][A-Za-z0-9]*)
  | (?P<blank>_)
  | (?P<str>"(\\.|[^"\\])*")
  | (?P<op>:=|//|\|\||&&|==|<=|>=|[-+*/^()\[\],{}<>=!])
  | (?P<ws>\s+)
""", re.VERBOSE)


class ParseError(CasError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_Splice = tuple  # ("splice", CasExpr, pos)


def _lex(parts: Sequence[Union[str, CasExpr]]) -> list[tuple[str, object, int]]:
    """Lex a sequence of text fragments and pre-built expressions; the
    latter become single `splice` tokens (used for REPL antiquotation)."""
    tokens: list[tuple[str, object, int]] = []
    offset = 0
    for part in parts:
        if isinstance(part, CasExpr):
            tokens.append(("splice", part, offset))
            continue
        pos = 0
        while pos < len(part):
            m = _TOKEN.match(part, pos)
            if m is None:
                raise ParseError(f"unexpected character {part[pos]!r}",
                                 offset + pos)
            if m.lastgroup != "ws":
                tokens.append((m.lastgroup, m.group(), offset + pos))
            pos = m.end()
        offset += len(part)
    return tokens


_COMPARISONS = {"==": "Equal", "<": "Less", "<=": "LessEqual",
                ">": "Greater", ">=": "GreaterEqual"}

_ATOM_STARTS = {"real", "int", "sym", "str", "blank", "splice"}


class _Parser:
    def __init__(self, parts: Sequence[Union[str, CasExpr]]):
        self.tokens = _lex(parts)
        self.pos = 0

    def peek(self) -> Optional[tuple[str, object, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[str, object, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", -1)
        self.pos += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.next()
        if tok[1] != text:
            raise ParseError(f"expected {text!r}, found {tok[1]!r}", tok[2])

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] in ops

    def parse(self) -> CasExpr:
        e = self.assignment()
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.peek()[1]!r}",
                             self.peek()[2])
        return e

    def assignment(self) -> CasExpr:
        lhs = self.postfix_chain()
        if self.at_op("=", ":="):
            op = self.next()[1]
            rhs = self.assignment()
            return app("Set" if op == "=" else "SetDelayed", lhs, rhs)
        return lhs

    def postfix_chain(self) -> CasExpr:
        e = self.or_expr()
        while self.at_op("//"):
            self.next()
            f = self.or_expr()
            e = App(f, (e,))
        return e

    def or_expr(self) -> CasExpr:
        terms = [self.and_expr()]
        while self.at_op("||"):
            self.next()
            terms.append(self.and_expr())
        return app("Or", *terms) if len(terms) > 1 else terms[0]

    def and_expr(self) -> CasExpr:
        terms = [self.not_expr()]
        while self.at_op("&&"):
            self.next()
            terms.append(self.not_expr())
        return app("And", *terms) if len(terms) > 1 else terms[0]

    def not_expr(self) -> CasExpr:
        if self.at_op("!"):
            self.next()
            return app("Not", self.not_expr())
        return self.comparison()

    def comparison(self) -> CasExpr:
        first = self.additive()
        tok = self.peek()
        if tok is None or tok[0] != "op" or tok[1] not in _COMPARISONS:
            return first
        head = _COMPARISONS[tok[1]]
        chain = [first]
        while self.at_op(*_COMPARISONS.keys()):
            op = self.next()[1]
            if _COMPARISONS[op] != head:
                raise ParseError("mixed comparison chains are unsupported",
                                 tok[2])
            chain.append(self.additive())
        return app(head, *chain)

    def additive(self) -> CasExpr:
        e = self.multiplicative()
        while self.at_op("+", "-"):
            op = self.next()[1]
            rhs = self.multiplicative()
            e = app("Plus", e, rhs) if op == "+" else app("Subtract", e, rhs)
        return e

    def multiplicative(self) -> CasExpr:
        e = self.unary()
        while True:
            if self.at_op("*", "/"):
                op = self.next()[1]
                rhs = self.unary()
                e = app("Times", e, rhs) if op == "*" else app("Divide", e, rhs)
                continue
            # juxtaposition is multiplication: 2x, 2 x, (a+b)(c+d)
            tok = self.peek()
            if tok is not None and (tok[0] in _ATOM_STARTS
                                    or tok[1] in ("(", "{")):
                e = app("Times", e, self.unary())
                continue
            return e

    def unary(self) -> CasExpr:
        if self.at_op("-"):
            pos = self.next()[2]
            operand = self.unary()
            match operand:
                case MInt(v):
                    return MInt(-v)
                case MReal(v):
                    return MReal(-v)
                case _:
                    return app("Times", MInt(-1), operand)
        return self.power()

    def power(self) -> CasExpr:
        base = self.postfix_atom()
        if self.at_op("^"):
            self.next()
            if self.at_op("-"):
                self.next()
                exp = self.power_operand_negative()
            else:
                exp = self.unary_power_operand()
            return app("Power", base, exp)
        return base

    def unary_power_operand(self) -> CasExpr:
        # exponent binds tighter than unary minus: -x^2 == -(x^2)
        e = self.postfix_atom()
        if self.at_op("^"):
            self.next()
            return app("Power", e, self.unary_power_operand())
        return e

    def power_operand_negative(self) -> CasExpr:
        e = self.unary_power_operand()
        match e:
            case MInt(v):
                return MInt(-v)
            case MReal(v):
                return MReal(-v)
            case _:
                return app("Times", MInt(-1), e)

    def _at_part_open(self) -> bool:
        nxt = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        return (self.at_op("[") and nxt is not None
                and nxt[0] == "op" and nxt[1] == "[")

    def postfix_atom(self) -> CasExpr:
        e = self.atom()
        while True:
            if self._at_part_open():
                self.next()
                self.next()
                idx = self.assignment()
                self.expect("]")
                self.expect("]")
                e = app("Part", e, idx)
            elif self.at_op("["):
                self.next()
                args = []
                if not self.at_op("]"):
                    args.append(self.assignment())
                    while self.at_op(","):
                        self.next()
                        args.append(self.assignment())
                self.expect("]")
                e = App(e, tuple(args))
            else:
                return e

    def atom(self) -> CasExpr:
        kind, text, pos = self.next()
        if kind == "splice":
            return text  # already a CasExpr
        if kind == "real":
            return MReal(float(text))
        if kind == "int":
            return MInt(int(text))
        if kind == "str":
            return MStr(_unescape(text))
        if kind == "blank":
            return app("Blank")
        if kind == "sym":
            if self.at_op("_") or (self.peek() is not None
                                   and self.peek()[0] == "blank"):
                self.next()
                return app("Pattern", Sym(text), app("Blank"))
            return Sym(text)
        if text == "(":
            e = self.assignment()
            self.expect(")")
            return e
        if text == "{":
            args = []
            if not self.at_op("}"):
                args.append(self.assignment())
                while self.at_op(","):
                    self.next()
                    args.append(self.assignment())
            self.expect("}")
            return app("List", *args)
        raise ParseError(f"unexpected token {text!r}", pos)


def _unescape(quoted: str) -> str:
    body = quoted[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"n": "\n", "t": "\t", '"': '"', "\\": "\\"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def parse(source: Union[str, Sequence[Union[str, CasExpr]]]) -> CasExpr:
    """Parse surface syntax; a list input interleaves text with pre-built
    expressions to splice (antiquotation support)."""
    parts: Sequence[Union[str, CasExpr]]
    parts = [source] if isinstance(source, str) else source
    return _Parser(parts).parse()
