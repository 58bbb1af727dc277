"""Concrete vector lattices with exact coordinates.

Two models of the domain lattice are provided:

* :class:`Vec` -- a point of R^n with the coordinatewise order. The codomain
  F = R^m is always of this kind.
* :class:`EcSeq` -- an eventually-constant real sequence, stored as an explicit
  prefix followed by a constant tail.

In both models two elements are disjoint when their supports do not meet, and
``z`` is a fragment of ``x`` when ``z`` agrees with ``x`` on its own support and
vanishes elsewhere. Coordinates are indexed from 0 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

from .rational import ZERO, Q, to_q


class ModelMismatchError(ValueError):
    """Two elements (or an element and an operator) live in different lattices."""


@dataclass(frozen=True)
class Vec:
    """A vector in R^n with rational coordinates."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_q(c) for c in self.coords))

    @classmethod
    def of(cls, *values) -> "Vec":
        return cls(tuple(values))

    @classmethod
    def zeros(cls, n: int) -> "Vec":
        return cls((ZERO,) * n)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def coord(self, i: int) -> Q:
        return self.coords[i]

    @property
    def dim(self) -> int:
        return len(self.coords)

    def _check(self, other) -> None:
        if not isinstance(other, Vec) or len(other) != len(self):
            raise ModelMismatchError(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vec") -> "Vec":
        self._check(other)
        return Vec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vec":
        return Vec(tuple(-a for a in self.coords))

    def __mul__(self, scalar) -> "Vec":
        s = to_q(scalar)
        return Vec(tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def __abs__(self) -> "Vec":
        return Vec(tuple(abs(a) for a in self.coords))

    def __le__(self, other: "Vec") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coords, other.coords))

    def __ge__(self, other: "Vec") -> bool:
        self._check(other)
        return all(a >= b for a, b in zip(self.coords, other.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def support(self) -> frozenset:
        return frozenset(i for i, a in enumerate(self.coords) if a)

    def zero_like(self) -> "Vec":
        return Vec.zeros(len(self.coords))

    def __repr__(self) -> str:
        return "Vec(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class EcSeq:
    """An eventually-constant sequence ``prefix + (tail, tail, ...)``.

    The stored form is canonical: trailing prefix entries equal to the tail are
    dropped, so equal sequences have equal representations.
    """

    prefix: tuple
    tail: Q = ZERO

    def __post_init__(self):
        tail = to_q(self.tail)
        prefix = [to_q(c) for c in self.prefix]
        while prefix and prefix[-1] == tail:
            prefix.pop()
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "tail", tail)

    @classmethod
    def zero(cls) -> "EcSeq":
        return cls((), ZERO)

    def coord(self, i: int) -> Q:
        return self.prefix[i] if i < len(self.prefix) else self.tail

    def head(self, k: int) -> tuple:
        """The first ``k`` coordinates."""
        p = self.prefix
        if k <= len(p):
            return p[:k]
        return p + (self.tail,) * (k - len(p))

    @property
    def prefix_len(self) -> int:
        return len(self.prefix)

    def _check(self, other) -> None:
        if not isinstance(other, EcSeq):
            raise ModelMismatchError(f"cannot combine {self!r} with {other!r}")

    def _zip(self, other: "EcSeq"):
        k = max(len(self.prefix), len(other.prefix))
        return k, self.head(k), other.head(k)

    def __add__(self, other: "EcSeq") -> "EcSeq":
        self._check(other)
        _, a, b = self._zip(other)
        return EcSeq(tuple(x + y for x, y in zip(a, b)), self.tail + other.tail)

    def __sub__(self, other: "EcSeq") -> "EcSeq":
        self._check(other)
        _, a, b = self._zip(other)
        return EcSeq(tuple(x - y for x, y in zip(a, b)), self.tail - other.tail)

    def __neg__(self) -> "EcSeq":
        return EcSeq(tuple(-a for a in self.prefix), -self.tail)

    def __mul__(self, scalar) -> "EcSeq":
        s = to_q(scalar)
        return EcSeq(tuple(s * a for a in self.prefix), s * self.tail)

    __rmul__ = __mul__

    def __abs__(self) -> "EcSeq":
        return EcSeq(tuple(abs(a) for a in self.prefix), abs(self.tail))

    def __le__(self, other: "EcSeq") -> bool:
        self._check(other)
        _, a, b = self._zip(other)
        return all(x <= y for x, y in zip(a, b)) and self.tail <= other.tail

    def __ge__(self, other: "EcSeq") -> bool:
        return other <= self

    def is_zero(self) -> bool:
        return not self.prefix and not self.tail

    def zero_like(self) -> "EcSeq":
        return EcSeq.zero()

    def truncate(self, k: int) -> "EcSeq":
        """Keep coordinates ``0..k-1`` and zero everything after (tail 0)."""
        return EcSeq(self.head(k), ZERO)

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.prefix)
        return f"EcSeq([{body}] | {self.tail})"


LatticeElement = Union[Vec, EcSeq]


def same_model(x: LatticeElement, y: LatticeElement) -> None:
    """Raise :class:`ModelMismatchError` unless ``x`` and ``y`` share a lattice."""
    if isinstance(x, Vec) and isinstance(y, Vec) and len(x) == len(y):
        return
    if isinstance(x, EcSeq) and isinstance(y, EcSeq):
        return
    raise ModelMismatchError(f"{x!r} and {y!r} live in different lattices")


def disjoint(x: LatticeElement, y: LatticeElement) -> bool:
    """``|x| ∧ |y| = 0``."""
    same_model(x, y)
    if isinstance(x, Vec):
        return all(not (a and b) for a, b in zip(x.coords, y.coords))
    if x.tail and y.tail:
        return False
    _, a, b = x._zip(y)
    return all(not (p and q) for p, q in zip(a, b))


def is_fragment(z: LatticeElement, x: LatticeElement) -> bool:
    """``z ⊑ x``, i.e. ``z ⊥ (x - z)``: each coordinate of ``z`` is 0 or equals ``x``'s."""
    same_model(z, x)
    if isinstance(z, Vec):
        return all(not a or a is b or a == b for a, b in zip(z.coords, x.coords))
    if z.tail and z.tail != x.tail:
        return False
    _, a, b = z._zip(x)
    return all(not p or p is q or p == q for p, q in zip(a, b))


def fragments(x: LatticeElement, resolution: int | None = None) -> list:
    """All fragments of ``x``, each once, in a fixed enumeration order.

    For an :class:`EcSeq` only the first ``resolution`` coordinates and the tail
    are chosen independently; coordinates past the resolution follow the tail.
    The first fragment is always ``x`` itself and the last is ``0``.
    """
    if isinstance(x, Vec):
        choices = [(a, ZERO) if a else (ZERO,) for a in x.coords]
        # branching only on nonzero coordinates keeps the results distinct
        return [Vec(c) for c in product(*choices)]
    if resolution is None or resolution < x.prefix_len:
        raise ValueError(
            f"resolution {resolution} is below the prefix length {x.prefix_len} of {x!r}"
        )
    head = x.head(resolution)
    choices = [(a, ZERO) if a else (ZERO,) for a in head]
    tails = (x.tail, ZERO) if x.tail else (ZERO,)
    return [EcSeq(c, t) for t in tails for c in product(*choices)]


def disjoint_partitions(f: LatticeElement, resolution: int | None = None) -> list:
    """All ``(g, h)`` with ``g + h = f`` and ``g ⊥ h``."""
    return [(g, f - g) for g in fragments(f, resolution)]


def fragment_split(z: LatticeElement, x: LatticeElement, y: LatticeElement):
    """Split a fragment ``z`` of ``x + y`` (with ``x ⊥ y``) along ``x`` and ``y``.

    Returns ``(z1, z2)`` with ``z1 + z2 = z``, ``z1 ⊑ x`` and ``z2 ⊑ y``.
    """
    same_model(z, x)
    same_model(x, y)
    if not disjoint(x, y):
        raise ValueError("x and y are not disjoint")
    if not is_fragment(z, x + y):
        raise ValueError("z is not a fragment of x + y")
    if isinstance(z, Vec):
        z1 = Vec(tuple(c if a else ZERO for c, a in zip(z.coords, x.coords)))
    else:
        k = max(z.prefix_len, x.prefix_len, y.prefix_len)
        z1 = EcSeq(
            tuple(c if a else ZERO for c, a in zip(z.head(k), x.head(k))),
            z.tail if x.tail else ZERO,
        )
    return z1, z - z1


def vsup(vectors: Iterable[Vec], m: int) -> Vec:
    """Coordinatewise maximum; the empty supremum is ``0``."""
    best = None
    for v in vectors:
        best = list(v.coords) if best is None else [max(a, b) for a, b in zip(best, v.coords)]
    return Vec.zeros(m) if best is None else Vec(tuple(best))


def vinf(vectors: Iterable[Vec], m: int) -> Vec:
    """Coordinatewise minimum; the empty infimum is ``0``."""
    best = None
    for v in vectors:
        best = list(v.coords) if best is None else [min(a, b) for a, b in zip(best, v.coords)]
    return Vec.zeros(m) if best is None else Vec(tuple(best))


@dataclass(frozen=True)
class OrderProjection:
    """Band projection on R^m: keep the coordinates in ``mask``, zero the rest."""

    mask: frozenset
    m: int

    def __post_init__(self):
        mask = frozenset(self.mask)
        if any(not 0 <= i < self.m for i in mask):
            raise ValueError(f"mask {sorted(mask)} out of range for R^{self.m}")
        object.__setattr__(self, "mask", mask)

    def __call__(self, v: Vec) -> Vec:
        if len(v) != self.m:
            raise ModelMismatchError(f"projection on R^{self.m} applied to {v!r}")
        return Vec(tuple(a if i in self.mask else ZERO for i, a in enumerate(v.coords)))

    def complement(self) -> "OrderProjection":
        return OrderProjection(frozenset(range(self.m)) - self.mask, self.m)

    def __le__(self, other: "OrderProjection") -> bool:
        return self.mask <= other.mask

    def __repr__(self) -> str:
        return f"ρ{sorted(self.mask)}"


def all_projections(m: int) -> list:
    """Every band projection on R^m (2^m masks)."""
    return [
        OrderProjection(frozenset(i for i in range(m) if bits >> i & 1), m)
        for bits in range(1 << m)
    ]


def element_band_projection(g: Vec) -> OrderProjection:
    """Projection onto the band generated by ``g``: the mask is ``supp(g)``."""
    return OrderProjection(g.support(), len(g))


@dataclass(frozen=True)
class PartitionOfUnity:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(self.blocks)
        if not blocks:
            raise ValueError("a partition of unity needs at least one block")
        m = blocks[0].m
        covered = set()
        for b in blocks:
            if b.m != m:
                raise ValueError("blocks act on different spaces")
            if not b.mask:
                raise ValueError("empty block")
            if covered & b.mask:
                raise ValueError("blocks overlap")
            covered |= b.mask
        if covered != set(range(m)):
            raise ValueError("blocks do not cover every coordinate")
        object.__setattr__(self, "blocks", blocks)

    @property
    def m(self) -> int:
        return self.blocks[0].m

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


def set_partitions(items: Sequence) -> Iterator[list]:
    """Yield every set partition of ``items`` as a list of blocks (lists)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]


def partitions_of_unity(m: int, max_blocks: int | None = None) -> Iterator[PartitionOfUnity]:
    """All partitions of unity on R^m with at most ``max_blocks`` blocks.

    Ordered by block count, then lexicographically by blocks; the order is part
    of the contract because certificate search returns the first hit.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if max_blocks is None:
        max_blocks = m
    parts = [sorted(sorted(b) for b in p) for p in set_partitions(list(range(m)))]
    parts = [p for p in parts if len(p) <= max_blocks]
    parts.sort(key=lambda p: (len(p), p))
    for p in parts:
        yield PartitionOfUnity(tuple(OrderProjection(frozenset(b), m) for b in p))


@dataclass(frozen=True)
class FragmentChain:
    """A finite stretch ``e_1 ⊑ e_2 ⊑ ... ⊑ target`` of a lateral net."""

    steps: tuple
    target: LatticeElement

    def __post_init__(self):
        steps = tuple(self.steps)
        # ⊑ is transitive, so the links plus the last step cover every step
        if steps and not is_fragment(steps[-1], self.target):
            raise ValueError(f"{steps[-1]!r} is not a fragment of the target {self.target!r}")
        for a, b in zip(steps, steps[1:]):
            if not is_fragment(a, b):
                raise ValueError(f"chain is not increasing at {a!r} -> {b!r}")
        object.__setattr__(self, "steps", steps)

    def residuals(self) -> list:
        return [self.target - s for s in self.steps]
