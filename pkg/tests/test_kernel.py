"""Expression-level kernel tests: de Bruijn operations, numerals, names."""

import random

import pytest

from casbridge.kernel import (
    App,
    BinderInfo,
    Lam,
    Name,
    NotANumeral,
    Sort,
    LevelLit,
    Var,
    abstract,
    fresh_local,
    instantiate,
    mk_app,
    mk_const,
    numeral_decode,
    numeral_encode,
    app_spine,
)
from oracles import instantiate_oracle, random_expr


class TestNames:
    def test_round_trip(self):
        n = Name.of("and.intro")
        assert n.components == ("and", "intro")
        assert Name.of(str(n)) == n

    def test_rejects_empty_and_dotted_components(self):
        with pytest.raises(ValueError):
            Name(())
        with pytest.raises(ValueError):
            Name(("a.b",))
        with pytest.raises(ValueError):
            Name(("", "x"))


class TestInstantiate:
    def test_identity_depth(self):
        c = mk_const("c")
        assert instantiate(Var(0), c) == c

    def test_duplication(self):
        x = fresh_local("x", mk_const("real"))
        assert instantiate(App(Var(0), Var(0)), x) == App(x, x)

    def test_under_binder(self):
        c = mk_const("c")
        t = mk_const("real")
        e = Lam(Name.of("y"), BinderInfo.DEFAULT, t, Var(1))
        assert instantiate(e, c) == Lam(Name.of("y"), BinderInfo.DEFAULT, t, c)

    def test_matches_named_substitution_oracle(self):
        rng = random.Random(20810)
        for _ in range(500):
            body = random_expr(rng, depth=4, binders=1)
            repl = random_expr(rng, depth=3, binders=0)
            assert instantiate(body, repl) == instantiate_oracle(body, repl)


class TestAbstract:
    def test_single_occurrence(self):
        x = fresh_local("x", mk_const("real"))
        assert abstract(x, x) == Var(0)

    def test_no_occurrence(self):
        x = fresh_local("x", mk_const("real"))
        c = mk_const("c")
        assert abstract(c, x) == c

    def test_mixed_locals(self):
        x = fresh_local("x", mk_const("real"))
        y = fresh_local("y", mk_const("real"))
        assert abstract(App(x, y), x) == App(Var(0), y)

    def test_round_trip_instantiate_abstract(self):
        rng = random.Random(404)
        x = fresh_local("x", mk_const("real"))
        for _ in range(500):
            e = random_expr(rng, depth=8)
            assert instantiate(abstract(e, x), x) == e


class TestNumerals:
    def test_paper_six(self):
        e = numeral_encode(6)
        head, args = app_spine(e)
        assert head == mk_const("bit0")
        inner_head, inner_args = app_spine(args[-1])
        assert inner_head == mk_const("bit1")
        innermost, _ = app_spine(inner_args[-1])
        assert innermost == mk_const("one")
        assert numeral_decode(e) == 6

    def test_zero_and_one(self):
        assert app_spine(numeral_encode(0))[0] == mk_const("zero")
        assert app_spine(numeral_encode(1))[0] == mk_const("one")

    def test_decode_examples(self):
        one = numeral_encode(1)
        bit0 = lambda t: mk_app(mk_const("bit0"), t)
        bit1 = lambda t: mk_app(mk_const("bit1"), t)
        assert numeral_decode(bit1(bit0(bit1(one)))) == 13

    def test_round_trip_exhaustive_small(self):
        for n in range(10_001):
            assert numeral_decode(numeral_encode(n)) == n

    def test_round_trip_random_64bit(self):
        rng = random.Random(7)
        for _ in range(100):
            n = rng.getrandbits(64)
            assert numeral_decode(numeral_encode(n)) == n

    def test_no_bit0_zero_subterm(self):
        def has_bit0_zero(e):
            head, args = app_spine(e)
            if head == mk_const("bit0"):
                inner, _ = app_spine(args[-1])
                if inner == mk_const("zero"):
                    return True
            return any(has_bit0_zero(a) for a in args)

        for n in range(2_000):
            assert not has_bit0_zero(numeral_encode(n))

    def test_decode_rejects_foreign_heads(self):
        with pytest.raises(NotANumeral):
            numeral_decode(mk_app(mk_const("add"), numeral_encode(1)))


def test_app_spine_round_trip():
    f = mk_const("f")
    args = [mk_const("a"), Var(0), Sort(LevelLit(0))]
    head, got = app_spine(mk_app(f, *args))
    assert head == f and got == args
