"""Lattice operations on operators, evaluated pointwise over fragments.

The join of two operators at ``f`` is the supremum of ``Tg + Sh`` over all
disjoint splittings ``f = g + h``; meet, positive part and negative part follow
the same pattern. In R^m a supremum of a finite set is its coordinatewise
maximum, so each value is a finite enumeration.

For pure-kernel operators the sums decouple column by column, which gives
entrywise closed forms (``kernel_join_closed_form`` and friends); they are
checked against the enumeration in the test suite.
"""

from __future__ import annotations

from .lattice import Vec, disjoint_partitions, fragments, vinf, vsup
from .lattice import ModelMismatchError
from .operators import UrysonOperator


def _check_pair(T, S) -> None:
    if T.domain != S.domain or T.m != S.m:
        raise ModelMismatchError("operators have different domains or codomains")


def op_join_at(T, S, f, resolution: int | None = None) -> Vec:
    """``(T ∨ S)(f)``."""
    _check_pair(T, S)
    T.domain.check(f)
    return vsup((T.apply(g) + S.apply(h) for g, h in disjoint_partitions(f, resolution)), T.m)


def op_meet_at(T, S, f, resolution: int | None = None) -> Vec:
    """``(T ∧ S)(f)``."""
    _check_pair(T, S)
    T.domain.check(f)
    return vinf((T.apply(g) + S.apply(h) for g, h in disjoint_partitions(f, resolution)), T.m)


def op_pos_at(T, f, resolution: int | None = None) -> Vec:
    """``T⁺(f)``: largest value of ``T`` on a fragment of ``f``."""
    T.domain.check(f)
    return vsup((T.apply(g) for g in fragments(f, resolution)), T.m)


def op_neg_at(T, f, resolution: int | None = None) -> Vec:
    """``T⁻(f)``: minus the smallest value of ``T`` on a fragment of ``f``."""
    T.domain.check(f)
    return -vinf((T.apply(g) for g in fragments(f, resolution)), T.m)


def op_abs_at(T, f, resolution: int | None = None) -> Vec:
    """``|T|(f) = T⁺(f) + T⁻(f)``; refuses to return a value violating ``|Tf| ≤ |T|(f)``."""
    value = op_pos_at(T, f, resolution) + op_neg_at(T, f, resolution)
    if not abs(T.apply(f)) <= value:
        raise AssertionError(f"|Tf| <= |T|(f) violated at f={f!r}: |T|(f)={value!r}")
    return value


OPS = {
    "join": op_join_at,
    "meet": op_meet_at,
    "pos": op_pos_at,
    "neg": op_neg_at,
    "abs": op_abs_at,
}
BINARY_OPS = ("join", "meet")


def _require_pure_kernel(*ops: UrysonOperator) -> None:
    for op in ops:
        if not isinstance(op, UrysonOperator):
            raise TypeError("closed forms need kernel operators")
        if op.has_tail:
            raise ValueError("closed forms are only available for pure-kernel operators; "
                             "use the pointwise evaluation instead")


def kernel_join_closed_form(T: UrysonOperator, S: UrysonOperator) -> UrysonOperator:
    """``T ∨ S`` with entries ``max(T_ij, S_ij)``."""
    _require_pure_kernel(T, S)
    return T.map_entries(lambda a, b: a.maximum(b), S)


def kernel_meet_closed_form(T: UrysonOperator, S: UrysonOperator) -> UrysonOperator:
    """``T ∧ S`` with entries ``min(T_ij, S_ij)``."""
    _require_pure_kernel(T, S)
    return T.map_entries(lambda a, b: a.minimum(b), S)


def kernel_abs_closed_form(T: UrysonOperator) -> UrysonOperator:
    """``|T|`` with entries ``|T_ij|``."""
    _require_pure_kernel(T)
    return T.map_entries(lambda a: a.absolute())


def entrywise_join(T: UrysonOperator, S: UrysonOperator) -> UrysonOperator:
    """Entrywise maximum, tail columns included.

    On sequence domains this agrees with :func:`op_join_at` at every resolution
    covering the kernel columns, because each column and the tail are chosen
    independently by a fragment.
    """
    return T.map_entries(lambda a, b: a.maximum(b), S)
