"""Seeded random operators and elements for the verification suites."""

from __future__ import annotations

import random

from .lattice import EcSeq, Vec
from .operators import Domain, PointwiseOperator, UrysonOperator, random_element
from .plfn import PiecewiseLinearFn
from .rational import ZERO, Q


def _small(rng: random.Random, lo: int = -4, hi: int = 4) -> Q:
    return Q(rng.randint(lo, hi), rng.choice((1, 1, 1, 2, 3)))


def random_plfn(rng: random.Random, max_breakpoints: int = 5, positive: bool = False) -> PiecewiseLinearFn:
    """A random piecewise-linear function through ``(0, 0)``."""
    k = rng.randint(1, max_breakpoints)
    ts = {ZERO}
    while len(ts) < k:
        ts.add(Q(rng.randint(-8, 8), rng.choice((1, 2))))
    pts = []
    for t in sorted(ts):
        if t == 0:
            pts.append((t, ZERO))
        else:
            pts.append((t, _small(rng, 0, 4) if positive else _small(rng)))
    if positive:
        ls, rs = -_small(rng, 0, 3), _small(rng, 0, 3)
    else:
        ls, rs = _small(rng, -3, 3), _small(rng, -3, 3)
    return PiecewiseLinearFn(tuple(pts), ls, rs)


def random_kernel_operator(rng: random.Random, n: int, m: int, positive: bool = False,
                           max_breakpoints: int = 5) -> UrysonOperator:
    kernel = tuple(
        tuple(random_plfn(rng, max_breakpoints, positive) for _ in range(n)) for _ in range(m)
    )
    return UrysonOperator(Domain("finite", n), m, kernel)


def random_sequence_operator(rng: random.Random, J: int, m: int, positive: bool = True,
                             kernel: bool = True, tail: bool = True) -> UrysonOperator:
    """A kernel+tail operator on the sequence lattice (either part may be zero)."""
    z = PiecewiseLinearFn.zero()
    rows = tuple(
        tuple(random_plfn(rng, 5, positive) if kernel else z for _ in range(J)) for _ in range(m)
    )
    tails = tuple(random_plfn(rng, 5, positive) for _ in range(m)) if tail else None
    return UrysonOperator(Domain("ecseq", J), m, rows, tails)


def random_positive_vector(rng: random.Random, m: int, support=None) -> Vec:
    support = range(m) if support is None else support
    return Vec(tuple(Q(rng.randint(1, 4), rng.choice((1, 2))) if i in support else ZERO for i in range(m)))


def strictly_positive_functional(rng: random.Random, n: int) -> UrysonOperator:
    """A scalar operator with every entry ``c|t|``, ``c > 0``: ``phi(f) = 0`` only at ``f = 0``."""
    row = tuple(PiecewiseLinearFn.abs(Q(rng.randint(1, 3))) for _ in range(n))
    return UrysonOperator(Domain("finite", n), 1, (row,))


def random_nonzero_element(domain: Domain, rng: random.Random, **kw):
    while True:
        x = random_element(domain, rng, **kw)
        if not x.is_zero():
            return x


def corrupted(T) -> PointwiseOperator:
    """``T`` plus the cross term ``x_0 * x_1`` in the first output coordinate.

    The cross term breaks orthogonal additivity; negative controls use it.
    """

    def fn(x):
        base = T.apply(x)
        bump = x.coord(0) * x.coord(1)
        return Vec((base[0] + bump,) + base.coords[1:])

    return PointwiseOperator(T.domain, T.m, fn, positive=True, name="corrupted")
