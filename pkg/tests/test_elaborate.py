"""Elaboration and type-checking tests, including the documented full forms."""

import random

import pytest

from casbridge.kernel import (
    Const,
    DeclKind,
    Declaration,
    DuplicateName,
    ElaborationFailure,
    KernelTypeError,
    LevelLit,
    Name,
    NatNumeral,
    Placeholder,
    Sort,
    def_eq,
    elaborate,
    fresh_local,
    mk_app,
    mk_const,
    parse_preexpr,
    prefix_form,
    pretty,
    type_check,
)


def const0(name: str) -> Const:
    return Const(Name.of(name), (LevelLit(0),))


class TestElaborate:
    def test_add_nat_one_nat_one_full_form(self, env):
        # `add nat.one nat.one` fills {A} and the instance argument
        p = mk_app(mk_const("add"), mk_const("nat.one"), mk_const("nat.one"))
        e = elaborate(env, p, expected=mk_const("nat"))
        expected = mk_app(const0("add"), mk_const("nat"),
                          mk_const("nat.has_add"), mk_const("nat.one"),
                          mk_const("nat.one"))
        assert e == expected

    def test_numeral_zero_at_real(self, env):
        e = elaborate(env, NatNumeral(0), expected=mk_const("real"))
        assert e == mk_app(const0("zero"), mk_const("real"),
                           mk_const("real.has_zero"))

    def test_pow_nat_full_form(self, env):
        # the nat-typed exponent picks up nat instances, the base real ones
        x = fresh_local("x", mk_const("real"))
        p = mk_app(mk_const("pow_nat"),
                   mk_app(mk_const("add"),
                          mk_app(mk_const("neg"), NatNumeral(1)), x),
                   NatNumeral(2))
        e = elaborate(env, p, expected=mk_const("real"))
        assert prefix_form(e) == (
            "pow_nat real real.has_pow_nat "
            "(add real real.has_add (neg real real.has_neg "
            "(one real real.has_one)) x) "
            "(bit0 nat nat.has_add (one nat nat.has_one))")
        assert pretty(env, e) == "(x + -1)^2"

    def test_default_numeral_type_is_real(self, env):
        e = elaborate(env, NatNumeral(3))
        assert type_check(env, e) == mk_const("real")

    def test_surface_expression_type_checks(self, env):
        p = parse_preexpr("x^2 - 2*x + 1", env)
        e = elaborate(env, p)
        assert type_check(env, e) == mk_const("real")

    def test_elaborate_is_checker_sound_on_random_arith(self, env):
        rng = random.Random(11)
        names = ["x", "y"]

        def gen(depth):
            if depth == 0:
                return rng.choice(names + [str(rng.randrange(0, 50))])
            op = rng.choice(["+", "-", "*"])
            return f"({gen(depth - 1)} {op} {gen(depth - 1)})"

        for _ in range(60):
            free = {}
            p = parse_preexpr(gen(rng.randrange(1, 4)), env, free)
            e = elaborate(env, p)
            assert type_check(env, e) == mk_const("real")

    def test_unknown_constant(self, env):
        with pytest.raises(ElaborationFailure):
            elaborate(env, mk_const("nonexistent"))

    def test_unresolvable_placeholder(self, env):
        with pytest.raises(ElaborationFailure):
            elaborate(env, Placeholder())

    def test_type_mismatch_reported(self, env):
        p = mk_app(mk_const("add"), mk_const("nat.one"), mk_const("nat.one"))
        with pytest.raises(ElaborationFailure):
            elaborate(env, p, expected=mk_const("real"))


class TestTypeCheck:
    def test_and_intro_constructor(self, env):
        p = mk_const("false")
        q = mk_const("true")
        hp = fresh_local("hp", p)
        hq = fresh_local("hq", q)
        proof = mk_app(mk_const("and.intro"), p, q, hp, hq)
        assert type_check(env, proof) == mk_app(mk_const("and"), p, q)

    def test_wrong_arity_rejected(self, env):
        bad = mk_app(mk_const("and.intro"), mk_const("false"),
                     mk_const("true"), fresh_local("h", mk_const("false")),
                     fresh_local("h2", mk_const("true")),
                     fresh_local("h3", mk_const("true")))
        with pytest.raises(KernelTypeError):
            type_check(env, bad)

    def test_wrong_argument_type_rejected(self, env):
        bad = mk_app(mk_const("and.intro"), mk_const("false"),
                     mk_const("true"), fresh_local("h", mk_const("true")),
                     fresh_local("h2", mk_const("true")))
        with pytest.raises(KernelTypeError):
            type_check(env, bad)

    def test_definitions_unfold_in_def_eq(self, env):
        x = fresh_local("x", mk_const("real"))
        ge_app = mk_app(const0("ge"), mk_const("real"), mk_const("real.has_le"),
                        x, x)
        le_app = mk_app(const0("le"), mk_const("real"), mk_const("real.has_le"),
                        x, x)
        assert def_eq(env, ge_app, le_app)

    def test_sort_of_prop(self, env):
        assert type_check(env, Sort(LevelLit(0))) == Sort(LevelLit(1))


class TestEnvironment:
    def test_lookup_after_insert(self, env):
        decl = Declaration(Name.of("demo.ax"), DeclKind.AXIOM,
                           mk_const("true"))
        env2 = env.insert(decl)
        assert env2.lookup("demo.ax") is decl
        assert "demo.ax" not in env

    def test_duplicate_insert_rejected(self, env):
        decl = Declaration(Name.of("real"), DeclKind.AXIOM, Sort(LevelLit(1)))
        with pytest.raises(DuplicateName):
            env.insert(decl)

    def test_definition_requires_value(self):
        with pytest.raises(ValueError):
            Declaration(Name.of("d"), DeclKind.DEFINITION, mk_const("true"))

    def test_trusted_axioms_audit(self, env):
        decl = Declaration(Name.of("cas.import"), DeclKind.TRUSTED_AXIOM,
                           mk_const("true"), doc="from CAS")
        env2 = env.insert(decl)
        assert [str(d.name) for d in env2.trusted_axioms()] == ["cas.import"]
        assert env.trusted_axioms() == []
