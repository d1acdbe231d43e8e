"""Propositional proving, proof-term rendering, and kernel queries."""

from .formula import (
    And,
    Atom,
    AtomTable,
    FALSE,
    FalseProp,
    Iff,
    Implies,
    Not,
    Or,
    PropFormula,
    UnsupportedFormula,
    formula_of_kernel,
    kernel_of_formula,
)
from .g4ip import intuit
from .explode import (
    ExplodeStep,
    IllTypedProof,
    ReplayError,
    explode,
    replay_explode,
    steps_payload,
)
from .calculus import UnsupportedProofConstant, to_cas_calculus
from .query import (
    DeclInfo,
    ProveOutcome,
    TacticFailed,
    TranslationFailed,
    get_decl_info,
    prove_for_cas,
)

__all__ = [name for name in dir() if not name.startswith("_")]
