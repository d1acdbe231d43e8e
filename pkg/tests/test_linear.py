"""Exact simplex: assignment search and certificate search, cross-checked."""

import random
from fractions import Fraction

import pytest

from casbridge.cas import (
    LinearAtom,
    UnsupportedFragment,
    atoms_of_constraints,
    find_instance_cas,
    lp_certificate,
    parse,
    solve_atoms,
)

from oracles import naive_linear_combination


def atom(coeffs, const, rel):
    return LinearAtom.make(coeffs, const, rel)


class TestFindInstance:
    def test_open_interval(self):
        result = find_instance_cas(parse("x > 0 && x < 1"), parse("{x}"))
        assert result != parse("List[]")
        rule = result.args[0].args[0]
        value = Fraction(rule.args[1].value) if rule.args[1].__class__.__name__ == "MInt" \
            else Fraction(rule.args[1].args[0].value, rule.args[1].args[1].value)
        assert 0 < value < 1

    def test_paper_infeasible_system(self):
        constraints = parse("2 x < 3 y && -4 x + 2 z < 0 && 12 y - 4 z < 0")
        assert find_instance_cas(constraints, parse("{x, y, z}")) == \
            parse("List[]")

    def test_contradictory_equalities(self):
        assert find_instance_cas(parse("x == 2 && x == 3"), parse("{x}")) == \
            parse("List[]")

    def test_nonlinear_rejected(self):
        with pytest.raises(UnsupportedFragment):
            find_instance_cas(parse("x * x < 1"), parse("{x}"))

    def test_found_assignments_satisfy(self):
        rng = random.Random(31)
        names = ["a", "b", "c"]
        for _ in range(150):
            atoms = []
            for _ in range(rng.randint(1, 5)):
                coeffs = {n: Fraction(rng.randint(-4, 4)) for n in names}
                atoms.append(atom(coeffs, rng.randint(-6, 6),
                                  rng.choice(["le", "lt", "eq"])))
            sol = solve_atoms(atoms, names)
            if sol is not None:
                assert all(a.holds(sol) for a in atoms)


class TestCertificates:
    def test_paper_certificate_is_multiple_of_4_2_1(self):
        hyps = [atom({"x": 2, "y": -3}, 0, "lt"),
                atom({"x": -4, "z": 2}, 0, "lt"),
                atom({"y": 12, "z": -4}, 0, "lt")]
        cert = lp_certificate(hyps)
        assert cert is not None
        k = Fraction(cert[0], 4)
        assert k > 0 and cert == [4 * k, 2 * k, 1 * k]

    def test_constant_contradiction(self):
        assert lp_certificate([atom({}, 1, "le")]) == [1]

    def test_satisfiable_has_no_certificate(self):
        assert lp_certificate([atom({"x": 1}, 0, "le")]) is None

    def test_certificate_sums_to_contradiction_by_naive_expansion(self):
        rng = random.Random(57)
        names = ["p", "q"]
        for _ in range(300):
            hyps = []
            rows = []
            for _ in range(rng.randint(1, 4)):
                coeffs = {n: Fraction(rng.randint(-3, 3)) for n in names}
                const = Fraction(rng.randint(-4, 4))
                rel = rng.choice(["le", "lt", "eq"])
                hyps.append(atom(coeffs, const, rel))
                row = {frozenset({(n, 1)}): c for n, c in coeffs.items() if c}
                if const:
                    row[frozenset()] = const
                rows.append(row)
            cert = lp_certificate(hyps)
            point = solve_atoms(hyps, names)
            # exactly one of certificate / satisfying point must exist
            assert (cert is None) != (point is None)
            if point is not None:
                assert all(h.holds(point) for h in hyps)
            if cert is not None:
                combo = naive_linear_combination(cert, rows)
                non_const = {k: v for k, v in combo.items() if k}
                assert not non_const
                q = combo.get(frozenset(), Fraction(0))
                strict_mass = any(c > 0 for c, h in zip(cert, hyps)
                                  if h.rel == "lt")
                assert q > 0 or (q >= 0 and strict_mass)


class TestExtraction:
    def test_chained_comparisons(self):
        atoms = atoms_of_constraints(parse("0 < x < 1"))
        assert len(atoms) == 2

    def test_ge_flips(self):
        a, = atoms_of_constraints(parse("x >= 3"))
        assert a.rel == "le" and a.coeff_map() == {parse("x"): Fraction(-1)} \
            and a.const == 3
