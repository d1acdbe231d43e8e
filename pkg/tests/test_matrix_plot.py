"""LU decomposition and the function plotter."""

import random
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from casbridge.cas import (
    Engine,
    NotSquare,
    ZeroPivot,
    is_lower_unitriangular,
    is_upper_triangular,
    lu_decompose,
    mat_mul,
    parse,
)
from casbridge.cas.engine import EvalState
from casbridge.cas.plot import EvalError, plot_svg


def frac_matrix(rows):
    return [[Fraction(v) for v in row] for row in rows]


class TestLU:
    def test_documented_matrix(self):
        m = frac_matrix([[1, 2, 3], [1, 4, 9], [1, 8, 27]])
        lower, upper = lu_decompose(m)
        assert lower == frac_matrix([[1, 0, 0], [1, 1, 0], [1, 3, 1]])
        assert upper == frac_matrix([[1, 2, 3], [0, 2, 6], [0, 0, 6]])
        assert mat_mul(lower, upper) == m

    def test_identity(self):
        m = frac_matrix([[1, 0], [0, 1]])
        lower, upper = lu_decompose(m)
        assert lower == m and upper == m

    def test_zero_pivot(self):
        with pytest.raises(ZeroPivot):
            lu_decompose(frac_matrix([[0, 1], [1, 0]]))

    def test_not_square(self):
        with pytest.raises(NotSquare):
            lu_decompose(frac_matrix([[1, 2, 3], [4, 5, 6]]))

    def test_random_nonsingular(self):
        rng = random.Random(101)
        done = 0
        while done < 200:
            n = rng.randint(1, 6)
            m = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                  for _ in range(n)] for _ in range(n)]
            try:
                lower, upper = lu_decompose(m)
            except ZeroPivot:
                continue
            assert is_lower_unitriangular(lower)
            assert is_upper_triangular(upper)
            assert mat_mul(lower, upper) == m
            done += 1


class TestPlot:
    def setup_method(self):
        self.engine = Engine()
        self.state = EvalState(self.engine, self.engine.global_context,
                               100_000)

    def test_constant_function(self):
        svg = plot_svg(self.state, parse("1"), Fraction(0), Fraction(1))
        root = ET.fromstring(svg)
        polyline = root.find("{http://www.w3.org/2000/svg}polyline")
        points = polyline.get("points").split()
        assert len(points) == 256
        ys = {p.split(",")[1] for p in points}
        assert len(ys) == 1

    def test_square_is_symmetric(self):
        svg = plot_svg(self.state, parse("Power[x, 2]"),
                       Fraction(-1), Fraction(1))
        root = ET.fromstring(svg)
        polyline = root.find("{http://www.w3.org/2000/svg}polyline")
        points = [p.split(",") for p in polyline.get("points").split()]
        for i in range(256):
            assert points[i][1] == points[255 - i][1]

    def test_function_head(self):
        svg = plot_svg(self.state, parse("Function[t, Plus[t, t]]"),
                       Fraction(0), Fraction(2))
        assert svg.startswith("<svg")

    def test_unsupported_symbol(self):
        with pytest.raises(EvalError):
            plot_svg(self.state, parse("Sin[x]"), Fraction(0), Fraction(1))

    def test_engine_builtin_wraps_svg(self):
        got = self.engine.evaluate(parse("Plot[Power[x, 2], 0, 1]"))
        assert got.head.name == "SVGImage"
        assert got.args[0].value.startswith("<svg")

    def test_deterministic(self):
        a = plot_svg(self.state, parse("Power[x, 3]"), Fraction(0), Fraction(2))
        b = plot_svg(self.state, parse("Power[x, 3]"), Fraction(0), Fraction(2))
        assert a == b
