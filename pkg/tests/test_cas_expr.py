"""Expression values: rendering, parsing, wire codec."""

import random

import pytest

from casbridge.cas import (
    App,
    MInt,
    MReal,
    MStr,
    ParseError,
    Sym,
    WireError,
    app,
    from_wire,
    parse,
    render,
    to_wire,
)


def random_tree(rng: random.Random, depth: int):
    roll = rng.random()
    if depth <= 0 or roll < 0.45:
        kind = rng.randrange(4)
        if kind == 0:
            return Sym(rng.choice(["Plus", "x", "y", "F", "LeanConst"]))
        if kind == 1:
            return MInt(rng.randint(-10**12, 10**12))
        if kind == 2:
            return MStr(rng.choice(["real", "a b", 'quo"te', "\\slash", ""]))
        return MReal(rng.choice([0.0, 1.5, -2.25, 3.141592653589793]))
    head = Sym(rng.choice(["F", "G", "List"])) if rng.random() < 0.8 \
        else random_tree(rng, depth - 1)
    args = tuple(random_tree(rng, depth - 1)
                 for _ in range(rng.randrange(0, 4)))
    return App(head, args)


class TestRender:
    def test_paper_full_form(self):
        assert render(app("Plus", Sym("x"), Sym("y"))) == "Plus[x, y]"

    def test_zero(self):
        assert render(MInt(0)) == "0"

    def test_nested_with_string(self):
        e = app("LeanConst", MStr("real"), app("List"))
        assert render(e) == 'LeanConst["real", List[]]'

    def test_parse_render_identity_fuzz(self):
        rng = random.Random(3)
        for _ in range(10_000):
            e = random_tree(rng, 4)
            assert parse(render(e)) == e


class TestParse:
    def test_postfix_factor(self):
        e = parse("x^2 - 2x + 1 // Factor")
        inner = app("Plus",
                    app("Subtract", app("Power", Sym("x"), MInt(2)),
                        app("Times", MInt(2), Sym("x"))), MInt(1))
        assert e == App(Sym("Factor"), (inner,))

    def test_full_form(self):
        assert parse("F[2, 3]") == app("F", MInt(2), MInt(3))

    def test_braces(self):
        assert parse("{1, {2}}") == app("List", MInt(1),
                                        app("List", MInt(2)))

    def test_juxtaposition_is_times(self):
        assert parse("2x") == app("Times", MInt(2), Sym("x"))

    def test_negative_literal_is_signed_int(self):
        assert parse("-3") == MInt(-3)
        assert parse("F[-3]") == app("F", MInt(-3))

    def test_unary_minus_on_symbol(self):
        assert parse("-x") == app("Times", MInt(-1), Sym("x"))

    def test_precedence_power_over_unary_minus(self):
        assert parse("-x^2") == app("Times", MInt(-1),
                                    app("Power", Sym("x"), MInt(2)))

    def test_comparison_chain(self):
        assert parse("2 < x < 4") == app("Less", MInt(2), Sym("x"), MInt(4))

    def test_not_binds_below_comparisons(self):
        assert parse("!x == y") == app("Not", app("Equal", Sym("x"), Sym("y")))

    def test_logic_precedence(self):
        e = parse("a == b && c == d || e == f")
        assert e.head == Sym("Or")

    def test_patterns(self):
        e = parse("F[x_, y_] := x + y")
        lhs = app("F", app("Pattern", Sym("x"), app("Blank")),
                  app("Pattern", Sym("y"), app("Blank")))
        assert e == app("SetDelayed", lhs, app("Plus", Sym("x"), Sym("y")))

    def test_part_extraction(self):
        assert parse("m[[2]]") == app("Part", Sym("m"), MInt(2))
        assert parse("f[g[1]]") == app("f", app("g", MInt(1)))

    def test_error_has_position(self):
        with pytest.raises(ParseError) as err:
            parse("Plus[1, ?]")
        assert err.value.pos == 8

    def test_strings_with_escapes(self):
        assert parse('"a\\"b"') == MStr('a"b')


class TestWire:
    def test_big_integer_decimal(self):
        assert to_wire(MInt(2 ** 100)) == {
            "k": "int", "v": "1267650600228229401496703205376"}

    def test_symbol(self):
        assert to_wire(Sym("Plus")) == {"k": "sym", "v": "Plus"}

    def test_round_trip_fuzz(self):
        rng = random.Random(9)
        for _ in range(10_000):
            e = random_tree(rng, 4)
            assert from_wire(to_wire(e)) == e

    def test_malformed_rejected(self):
        with pytest.raises(WireError):
            from_wire({"k": "nope"})
        with pytest.raises(WireError):
            from_wire({"k": "int", "v": 3})
        with pytest.raises(WireError):
            from_wire(["not", "an", "object"])
