"""Abstract Uryson operators ``T: E -> R^m`` in kernel form.

Coordinate ``i`` of ``Tx`` is ``sum_j K[i][j](x_j)`` where every kernel entry is
a piecewise-linear function vanishing at 0. On the sequence lattice the kernel
reads the first ``J`` coordinates and an optional tail column adds
``Phi_i(tail(x))``; the tail column is what makes singular operators possible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .lattice import EcSeq, LatticeElement, ModelMismatchError, Vec, disjoint
from .plfn import PiecewiseLinearFn
from .rational import ZERO, Q, to_q
from .report import Record, Report


class NotPositiveError(ValueError):
    """An operation that needs a positive operator received another one."""


class InvalidKernelError(ValueError):
    """A kernel entry does not vanish at zero (or a weight is not positive)."""


@dataclass(frozen=True)
class Domain:
    """``finite:n`` (the lattice R^n) or ``ecseq:J`` (sequences, J kernel columns)."""

    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in ("finite", "ecseq"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.size < 0 or (self.kind == "finite" and self.size < 1):
            raise ValueError(f"bad domain size {self.size}")

    @classmethod
    def parse(cls, text: str) -> "Domain":
        kind, _, size = str(text).partition(":")
        try:
            return cls(kind.strip(), int(size))
        except ValueError as exc:
            raise ValueError(f"bad domain descriptor {text!r}, expected finite:n or ecseq:J") from exc

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def check(self, x: LatticeElement) -> None:
        if self.is_finite:
            if not isinstance(x, Vec) or len(x) != self.size:
                raise ModelMismatchError(f"expected a vector in R^{self.size}, got {x!r}")
        elif not isinstance(x, EcSeq):
            raise ModelMismatchError(f"expected an eventually-constant sequence, got {x!r}")

    def zero(self) -> LatticeElement:
        return Vec.zeros(self.size) if self.is_finite else EcSeq.zero()

    def __str__(self) -> str:
        return f"{self.kind}:{self.size}"


@dataclass(frozen=True)
class UrysonOperator:
    domain: Domain
    m: int
    kernel: tuple
    tail: Optional[tuple] = None

    def __post_init__(self):
        kernel = tuple(tuple(row) for row in self.kernel)
        if self.m < 1 or len(kernel) != self.m:
            raise ValueError(f"kernel has {len(kernel)} rows, codomain is R^{self.m}")
        for i, row in enumerate(kernel):
            if len(row) != self.domain.size:
                raise ValueError(f"kernel row {i} has {len(row)} entries, expected {self.domain.size}")
            for j, fn in enumerate(row):
                if not fn.vanishes_at_zero():
                    raise InvalidKernelError(f"kernel entry ({i + 1},{j + 1}) does not vanish at 0")
        tail = self.tail
        if tail is not None:
            if self.domain.is_finite:
                raise ValueError("tail columns are only defined on sequence domains")
            tail = tuple(tail)
            if len(tail) != self.m:
                raise ValueError(f"tail column has {len(tail)} entries, expected {self.m}")
            for i, fn in enumerate(tail):
                if not fn.vanishes_at_zero():
                    raise InvalidKernelError(f"tail entry {i + 1} does not vanish at 0")
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "tail", tail)

    @classmethod
    def zero(cls, domain: Domain, m: int) -> "UrysonOperator":
        z = PiecewiseLinearFn.zero()
        return cls(domain, m, tuple((z,) * domain.size for _ in range(m)))

    @property
    def n(self) -> int:
        return self.domain.size

    @property
    def has_tail(self) -> bool:
        return self.tail is not None

    def apply(self, x: LatticeElement) -> Vec:
        self.domain.check(x)
        if isinstance(x, Vec):
            cols = x.coords
        else:
            cols = x.head(self.n)
        live = [(j, t) for j, t in enumerate(cols) if t]
        out = []
        for i, row in enumerate(self.kernel):
            s = ZERO
            for j, t in live:
                s += row[j](t)
            if self.tail is not None and x.tail:
                s += self.tail[i](x.tail)
            out.append(s)
        return Vec(tuple(out))

    __call__ = apply

    def entries(self):
        """Every (label, fn) pair of the representation, tail included."""
        for i, row in enumerate(self.kernel):
            for j, fn in enumerate(row):
                yield (i, j), fn
        if self.tail is not None:
            for i, fn in enumerate(self.tail):
                yield (i, "tail"), fn

    def is_positive(self) -> bool:
        """Decided from the representation: each entry must be nonnegative on R."""
        return all(fn.is_nonnegative() for _, fn in self.entries())

    def positivity_witness(self) -> Optional[LatticeElement]:
        """An ``x`` with some ``(Tx)_i < 0``; ``None`` when ``T`` is positive.

        Setting every other coordinate to 0 isolates the offending entry.
        """
        for (i, j), fn in self.entries():
            t = fn.negative_witness()
            if t is None:
                continue
            if self.domain.is_finite:
                coords = [ZERO] * self.n
                coords[j] = t
                return Vec(tuple(coords))
            if j == "tail":
                return EcSeq((ZERO,) * self.n, t)
            coords = [ZERO] * (j + 1)
            coords[j] = t
            return EcSeq(tuple(coords), ZERO)
        return None

    def map_entries(self, fn: Callable, other: "UrysonOperator" | None = None) -> "UrysonOperator":
        """Apply ``fn`` entrywise (binary when ``other`` is given)."""
        if other is None:
            kernel = tuple(tuple(fn(a) for a in row) for row in self.kernel)
            tail = None if self.tail is None else tuple(fn(a) for a in self.tail)
            return UrysonOperator(self.domain, self.m, kernel, tail)
        if other.domain != self.domain or other.m != self.m:
            raise ModelMismatchError("operators have different domains or codomains")
        kernel = tuple(
            tuple(fn(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(self.kernel, other.kernel)
        )
        if self.tail is None and other.tail is None:
            tail = None
        else:
            zero = (PiecewiseLinearFn.zero(),) * self.m
            tail = tuple(fn(a, b) for a, b in zip(self.tail or zero, other.tail or zero))
        return UrysonOperator(self.domain, self.m, kernel, tail)

    def __add__(self, other: "UrysonOperator") -> "UrysonOperator":
        return self.map_entries(lambda a, b: a + b, other)

    def __sub__(self, other: "UrysonOperator") -> "UrysonOperator":
        return self.map_entries(lambda a, b: a - b, other)

    def __neg__(self) -> "UrysonOperator":
        return self.map_entries(lambda a: -a)

    def scale(self, c) -> "UrysonOperator":
        return self.map_entries(lambda a: a.scale(c))

    def kernel_part(self) -> "UrysonOperator":
        return UrysonOperator(self.domain, self.m, self.kernel, None)

    def tail_part(self) -> "UrysonOperator":
        z = PiecewiseLinearFn.zero()
        return UrysonOperator(
            self.domain, self.m, tuple((z,) * self.n for _ in range(self.m)), self.tail
        )

    def order_bound_box(self, bound: LatticeElement) -> tuple:
        """A box ``[lo, hi]`` in R^m containing ``T[-b, b]`` for ``b = |bound|``."""
        self.domain.check(bound)
        b = abs(bound)
        cols = b.coords if isinstance(b, Vec) else b.head(self.n)
        lo, hi = [], []
        for i, row in enumerate(self.kernel):
            a_lo = a_hi = ZERO
            for fn, r in zip(row, cols):
                mn, mx = fn.range_on(-r, r)
                a_lo, a_hi = a_lo + mn, a_hi + mx
            if self.tail is not None:
                # a sequence in [-b, b] has its tail in [-tail(b), tail(b)]
                mn, mx = self.tail[i].range_on(-b.tail, b.tail)
                a_lo, a_hi = a_lo + mn, a_hi + mx
            lo.append(a_lo)
            hi.append(a_hi)
        return Vec(tuple(lo)), Vec(tuple(hi))


@dataclass(frozen=True)
class PointwiseOperator:
    """An orthogonally additive map known only through its values.

    Used for materialized projections such as ``x -> pi^D T(x)`` and for the
    corrupted operators of negative controls. Positivity is declared, not
    decided.
    """

    domain: Domain
    m: int
    fn: Callable = field(compare=False)
    positive: bool = False
    name: str = "pointwise"

    def apply(self, x: LatticeElement) -> Vec:
        self.domain.check(x)
        return self.fn(x)

    __call__ = apply

    def is_positive(self) -> bool:
        return self.positive


def require_positive(*ops) -> None:
    for op in ops:
        if not op.is_positive():
            raise NotPositiveError(f"operator {getattr(op, 'name', op)!r} is not positive")


def from_integral_kernel(K: Sequence[Sequence[PiecewiseLinearFn]], mu: Sequence) -> UrysonOperator:
    """Discrete integral operator ``(Tf)(s) = sum_t K[s][t](f(t)) * mu[t]``.

    ``K`` is indexed ``[s][t]`` with ``s`` ranging over the m target points and
    ``t`` over the n source points.
    """
    weights = [to_q(w) for w in mu]
    if any(w <= 0 for w in weights):
        raise InvalidKernelError("measure weights must be positive")
    rows = [list(r) for r in K]
    for s, row in enumerate(rows):
        if len(row) != len(weights):
            raise ValueError(f"kernel row {s} has {len(row)} entries, expected {len(weights)}")
        for t, fn in enumerate(row):
            if not fn.vanishes_at_zero():
                raise InvalidKernelError(f"K({s + 1},{t + 1},0) != 0")
    kernel = tuple(tuple(fn.scale(w) for fn, w in zip(row, weights)) for row in rows)
    return UrysonOperator(Domain("finite", len(weights)), len(rows), kernel)


def one_dimensional(phi: UrysonOperator, u: Vec) -> UrysonOperator:
    """The rank-one operator ``e -> u * phi(e)``."""
    if phi.m != 1:
        raise ModelMismatchError(f"phi must be scalar valued, has codomain R^{phi.m}")
    kernel = tuple(tuple(fn.scale(ui) for fn in phi.kernel[0]) for ui in u.coords)
    tail = None if phi.tail is None else tuple(phi.tail[0].scale(ui) for ui in u.coords)
    return UrysonOperator(phi.domain, len(u), kernel, tail)


def random_element(domain: Domain, rng: random.Random, max_prefix: int = 6, zero_prob: float = 0.3):
    """A small random rational element of the domain lattice."""

    def value():
        if rng.random() < zero_prob:
            return ZERO
        return Q(rng.randint(-6, 6) or 1, rng.choice((1, 1, 2, 3)))

    if domain.is_finite:
        return Vec(tuple(value() for _ in range(domain.size)))
    return EcSeq(tuple(value() for _ in range(rng.randint(0, max_prefix))), value())


def random_disjoint_pair(domain: Domain, rng: random.Random, max_prefix: int = 6):
    """Two disjoint elements obtained by splitting a random element's support."""
    x = random_element(domain, rng, max_prefix, zero_prob=0.1)
    if isinstance(x, Vec):
        mask = [rng.random() < 0.5 for _ in x.coords]
        a = Vec(tuple(c if k else ZERO for c, k in zip(x.coords, mask)))
    else:
        mask = [rng.random() < 0.5 for _ in x.prefix]
        a = EcSeq(
            tuple(c if k else ZERO for c, k in zip(x.prefix, mask)),
            x.tail if rng.random() < 0.5 else ZERO,
        )
    return a, x - a


def check_orthogonal_additivity(T, trials: int = 200, seed: int = 0) -> Report:
    """Sample disjoint pairs and compare ``T(x + y)`` with ``Tx + Ty`` exactly."""
    rng = random.Random(seed)
    report = Report(seed=seed)
    for k in range(trials):
        x, y = random_disjoint_pair(T.domain, rng)
        assert disjoint(x, y)
        lhs, rhs = T.apply(x + y), T.apply(x) + T.apply(y)
        report.add(Record.compare(
            f"orthogonal-additivity#{k}", "orthogonal-additivity", lhs, rhs,
            inputs=(x, y), witness={"x": x, "y": y},
        ))
    return report
