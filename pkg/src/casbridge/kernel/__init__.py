"""Proof-kernel side: expressions, environments, elaboration, checking."""

from .expr import (
    App,
    BinderInfo,
    Const,
    Expr,
    KernelError,
    Lam,
    Let,
    LevelLit,
    LevelParam,
    LocalConst,
    MVar,
    Name,
    NatNumeral,
    Pi,
    Placeholder,
    Sort,
    Var,
    abstract,
    app_spine,
    fresh_local,
    instantiate,
    lift,
    mk_app,
    mk_const,
)
from .env import (
    Declaration,
    DeclKind,
    DuplicateName,
    Environment,
    PreludeSyntaxError,
    UnknownDeclaration,
    load_prelude,
    parse_declarations,
)
from .numerals import NotANumeral, is_numeral, numeral_decode, numeral_encode
from .elaborate import (
    ElaborationFailure,
    KernelTypeError,
    TypeMismatch,
    def_eq,
    elaborate,
    normalize,
    type_check,
    whnf,
)
from .pretty import prefix_form, pretty
from .surface import SurfaceSyntaxError, parse_preexpr

__all__ = [name for name in dir() if not name.startswith("_")]
