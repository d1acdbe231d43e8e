"""The computer-algebra side: expressions, parsing, the rewrite engine,
polynomials, linear arithmetic, matrices, and plotting."""

from .expr import (
    App,
    CasError,
    CasExpr,
    MInt,
    MReal,
    MStr,
    Sym,
    WireError,
    app,
    as_fraction,
    canonical_order_key,
    from_wire,
    is_number,
    list_expr,
    numeric_value,
    rational,
    render,
    structural_key,
    term_degree,
    to_wire,
)
from .parser import ParseError, parse
from .engine import (
    Engine,
    EvalContext,
    EvalState,
    RewriteRule,
    StepBudgetExceeded,
    failure,
    head_symbol,
    is_failure,
    match,
    strip_inactive,
    substitute,
)
from .poly import (
    NotAPolynomial,
    Poly,
    UnsupportedShape,
    cas_of_poly,
    expand_cas,
    factor_cas,
    factor_poly,
    poly_of_cas,
)
from .linear import (
    LinearAtom,
    UnsupportedFragment,
    atoms_of_constraints,
    find_instance_cas,
    lp_certificate,
    lp_certificate_cas,
    solve_atoms,
)
from .matrix import (
    NotSquare,
    ZeroPivot,
    cas_of_matrix,
    is_lower_unitriangular,
    is_upper_triangular,
    lu_decompose,
    mat_mul,
    matrix_of_cas,
)
from .solve import NoSolution, UnsupportedSystem, solve_cas, solve_system
from .plot import EvalError, plot_svg

__all__ = [name for name in dir() if not name.startswith("_")]
