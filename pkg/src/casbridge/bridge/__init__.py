"""Bidirectional translation between the proof kernel and the algebra
engine: lossless reflection, the semantic interpretation pass, and the
extensible back-translation."""

from .reflect import MalformedReflection, decode_reflection, reflect
from .leanform import BinderDepthError, lean_form
from .leanform import install as install_leanform
from .backtrans import (
    KeyedAppRule,
    NoApplicableRule,
    RuleFailed,
    RuleRegistry,
    SymRule,
    TransEnv,
    Translator,
    UnkeyedAppRule,
    default_registry,
    load_sym_rules,
    pexpr_of_mmexpr,
)

__all__ = [name for name in dir() if not name.startswith("_")]
