"""Shared builders for small operators and elements."""

from __future__ import annotations

import pytest

from uryson.lattice import EcSeq, Vec
from uryson.operators import Domain, UrysonOperator
from uryson.plfn import PiecewiseLinearFn

ABS = PiecewiseLinearFn.abs()
ZERO_FN = PiecewiseLinearFn.zero()

# acceptance criteria append their one-line verdicts here
ACCEPTANCE_LINES: list = []


def lin(c) -> PiecewiseLinearFn:
    return PiecewiseLinearFn.linear(c)


def finite_op(rows) -> UrysonOperator:
    return UrysonOperator(Domain("finite", len(rows[0])), len(rows), tuple(tuple(r) for r in rows))


def seq_op(rows, tail=None) -> UrysonOperator:
    return UrysonOperator(Domain("ecseq", len(rows[0])), len(rows), tuple(tuple(r) for r in rows),
                          None if tail is None else tuple(tail))


def V(*xs) -> Vec:
    return Vec(xs)


def S(prefix, tail=0) -> EcSeq:
    return EcSeq(tuple(prefix), tail)


@pytest.fixture
def identity_on_cone():
    """``x -> (|x1|, |x2|)``: the positive operator agreeing with the identity on ``x >= 0``."""
    return finite_op([[ABS, ZERO_FN], [ZERO_FN, ABS]])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
