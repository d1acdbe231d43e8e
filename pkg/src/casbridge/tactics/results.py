"""Verification outcomes and tactic-level errors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..kernel.expr import Expr, KernelError


class TacticError(KernelError):
    """A tactic failure, labeled with the pipeline stage that raised it."""

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(f"[{stage}] {message}" if stage else message)
        self.stage = stage


class RingNormalizationFailed(TacticError):
    pass


class OracleFailed(TacticError):
    pass


class CertificateRejected(TacticError):
    pass


class NotGround(TacticError):
    pass


class VerificationFailed(TacticError):
    pass


class UnsupportedHypothesis(TacticError):
    pass


@dataclass(frozen=True)
class VerifiedResult:
    """A proposition together with how it was established. `trusted` means
    no checker ran and the statement was axiomatized on CAS authority."""

    statement: Expr
    method: str
    trusted: bool = False
