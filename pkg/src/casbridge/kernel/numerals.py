"""Binary numeral encoding over the prelude constants zero/one/bit0/bit1.

The encoding is canonical: 0 -> zero, 1 -> one, even n -> bit0 (n/2),
odd n -> bit1 ((n-1)/2), so no `bit0 zero` subterm ever appears. Implicit
arguments (the carrier type and its instances) are left as placeholders
for the elaborator to fill.
"""

from __future__ import annotations

from .expr import (
    Const,
    Expr,
    KernelError,
    Placeholder,
    app_spine,
    mk_app,
    mk_const,
)

ZERO = mk_const("zero")
ONE = mk_const("one")
BIT0 = mk_const("bit0")
BIT1 = mk_const("bit1")

# explicit-argument-free spines: zero {A} [has_zero A], one {A} [has_one A]
_PH = Placeholder()


class NotANumeral(KernelError):
    """Raised when decoding an expression not built from numeral constants."""


def numeral_encode(n: int) -> Expr:
    """Encode a nonnegative integer as a pre-expression numeral."""
    if n < 0:
        raise ValueError("numeral_encode requires n >= 0")
    if n == 0:
        return mk_app(ZERO, _PH, _PH)
    if n == 1:
        return mk_app(ONE, _PH, _PH)
    if n % 2 == 0:
        return mk_app(BIT0, _PH, _PH, numeral_encode(n // 2))
    return mk_app(BIT1, _PH, _PH, _PH, numeral_encode((n - 1) // 2))


def numeral_decode(e: Expr) -> int:
    """Inverse of numeral_encode; implicit arguments are ignored entirely."""
    head, args = app_spine(e)
    if not isinstance(head, Const):
        raise NotANumeral(f"numeral head is not a constant: {head!r}")
    name = str(head.name)
    if name == "zero":
        return 0
    if name == "one":
        return 1
    if name == "bit0":
        if not args:
            raise NotANumeral("bit0 with no argument")
        return 2 * numeral_decode(args[-1])
    if name == "bit1":
        if not args:
            raise NotANumeral("bit1 with no argument")
        return 2 * numeral_decode(args[-1]) + 1
    raise NotANumeral(f"unexpected head in numeral: {name}")


def is_numeral(e: Expr) -> bool:
    try:
        numeral_decode(e)
        return True
    except NotANumeral:
        return False
