"""Helpers around exact rational scalars.

All exact arithmetic in the package runs on fractions.Fraction, which already
keeps values reduced with a positive denominator.  What lives here is the glue:
canonical string parsing/formatting for the wire formats, integer and rational
k-th roots for the scaling transform, and small shared utilities.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FormatError


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, strings 'p/q' and floats to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (int, float)):
        # Fraction(float) is the exact binary value, no rounding.
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def frac_str(value: Fraction) -> str:
    """Canonical string: 'p/q' in lowest terms, plain 'p' for integers."""
    return str(Fraction(value))


def parse_frac(text) -> Fraction:
    if not isinstance(text, str):
        raise FormatError(f"rational must be a string, got {type(text).__name__}")
    return as_fraction(text)


def int_nth_root(m: int, r: int):
    """Exact r-th root of a nonnegative integer, or None if m is not a power."""
    assert m >= 0 and r >= 1
    if m in (0, 1) or r == 1:
        return m
    lo, hi = 0, 1
    while hi**r <= m:
        hi *= 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if mid**r <= m:
            lo = mid
        else:
            hi = mid
    return lo if lo**r == m else None


def rational_kth_root(value: Fraction, r: int):
    """Exact rational r-th root of value, or None.

    For even r only the nonnegative root of a nonnegative value is returned;
    for odd r the sign of value carries over.
    """
    value = Fraction(value)
    if r < 1:
        raise ValueError("root index must be positive")
    negative = value < 0
    if negative and r % 2 == 0:
        return None
    p = int_nth_root(abs(value.numerator), r)
    q = int_nth_root(value.denominator, r)
    if p is None or q is None:
        return None
    root = Fraction(p, q)
    return -root if negative else root
