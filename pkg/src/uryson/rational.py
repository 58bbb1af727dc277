"""Exact rational scalars: parsing and canonical ``p/q`` formatting."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Q = Fraction
RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_q(value) -> Fraction:
    """Coerce ``value`` to an exact :class:`Fraction`.

    Floats are accepted through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the binary expansion. Booleans are rejected.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"not a rational: {value!r}")


def fmt_q(value: Fraction) -> str:
    """Format as ``p/q`` with the sign carried on ``p`` (``2`` -> ``2/1``)."""
    value = to_q(value)
    return f"{value.numerator}/{value.denominator}"
