"""Skeptical verification tactics: CAS-assisted computation certified by
small trusted checkers."""

from .results import (
    CertificateRejected,
    NotGround,
    OracleFailed,
    RingNormalizationFailed,
    TacticError,
    UnsupportedHypothesis,
    VerificationFailed,
    VerifiedResult,
)
from .ring import eq_by_ring, eq_statement, ring_poly
from .norm_num import ground_value, norm_num, norm_num_holds
from .linarith import (
    FarkasCertificate,
    LinAtom,
    cas_oracle,
    check_farkas,
    fourier_motzkin_oracle,
    linarith,
    linatom_of_kernel,
)
from .cas_tactics import (
    PlausibilityReport,
    axiomatize,
    factor_tactic,
    lu_decomp_tactic,
    plausibility_check,
    rational_kernel,
    solve_polys,
    verify_lu,
)

__all__ = [name for name in dir() if not name.startswith("_")]
