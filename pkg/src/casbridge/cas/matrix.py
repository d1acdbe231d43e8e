"""Exact LU decomposition without pivoting: L unit-lower-triangular,
U upper-triangular, L*U equal to the input in rational arithmetic."""

from __future__ import annotations

from fractions import Fraction

from .expr import App, CasError, CasExpr, Sym, app, as_fraction, rational


class NotSquare(CasError):
    pass


class ZeroPivot(CasError):
    pass


Matrix = list[list[Fraction]]


def lu_decompose(m: Matrix) -> tuple[Matrix, Matrix]:
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSquare("matrix must be square")
    lower = [[Fraction(1) if i == j else Fraction(0) for j in range(n)]
             for i in range(n)]
    upper = [list(row) for row in m]
    for k in range(n):
        if upper[k][k] == 0:
            raise ZeroPivot(f"zero pivot at position {k} (no pivoting)")
        for i in range(k + 1, n):
            factor = upper[i][k] / upper[k][k]
            lower[i][k] = factor
            upper[i] = [a - factor * b for a, b in zip(upper[i], upper[k])]
    return lower, upper


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0))
             for j in range(m)] for i in range(n)]


def is_lower_unitriangular(m: Matrix) -> bool:
    return all(m[i][j] == (1 if i == j else 0)
               for i in range(len(m)) for j in range(i, len(m)))


def is_upper_triangular(m: Matrix) -> bool:
    return all(m[i][j] == 0 for i in range(len(m)) for j in range(i))


def matrix_of_cas(e: CasExpr) -> Matrix:
    match e:
        case App(Sym("List"), rows) if rows:
            out = []
            for row in rows:
                match row:
                    case App(Sym("List"), cells):
                        out.append([as_fraction(c) for c in cells])
                    case _:
                        raise CasError("expected a list of list rows")
            return out
        case _:
            raise CasError("expected a matrix as nested lists")


def cas_of_matrix(m: Matrix) -> CasExpr:
    return app("List", *[app("List", *[rational(v) for v in row])
                         for row in m])


def lu_decompose_cas(e: CasExpr) -> CasExpr:
    lower, upper = lu_decompose(matrix_of_cas(e))
    return app("List", cas_of_matrix(lower), cas_of_matrix(upper))
