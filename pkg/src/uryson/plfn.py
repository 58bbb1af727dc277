"""Continuous piecewise-linear functions R -> R with rational data."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable

from .rational import ZERO, Q, to_q


@dataclass(frozen=True, eq=False)
class PiecewiseLinearFn:
    """Interpolates ``breakpoints`` and extends linearly with the end slopes.

    The representation is canonicalized on construction (collinear breakpoints
    are dropped; an affine function keeps a single breakpoint at ``t = 0``), so
    ``==`` is equality of functions.
    """

    breakpoints: tuple
    left_slope: Q = ZERO
    right_slope: Q = ZERO

    def __post_init__(self):
        pts = [(to_q(t), to_q(v)) for t, v in self.breakpoints]
        if not pts:
            raise ValueError("at least one breakpoint is required")
        for (a, _), (b, _) in zip(pts, pts[1:]):
            if not a < b:
                raise ValueError(f"breakpoints must be strictly increasing, got {a} then {b}")
        ls, rs = to_q(self.left_slope), to_q(self.right_slope)
        pts = _canonical(pts, ls, rs)
        object.__setattr__(self, "breakpoints", tuple(pts))
        object.__setattr__(self, "left_slope", ls)
        object.__setattr__(self, "right_slope", rs)
        ts = tuple(t for t, _ in pts)
        vs = tuple(v for _, v in pts)
        slopes = tuple((v2 - v1) / (t2 - t1) for (t1, v1), (t2, v2) in zip(pts, pts[1:]))
        object.__setattr__(self, "_ts", ts)
        object.__setattr__(self, "_vs", vs)
        object.__setattr__(self, "_slopes", slopes)

    # construction helpers

    @classmethod
    def linear(cls, slope) -> "PiecewiseLinearFn":
        """``t -> slope * t``."""
        s = to_q(slope)
        return cls(((ZERO, ZERO),), s, s)

    @classmethod
    def zero(cls) -> "PiecewiseLinearFn":
        return cls.linear(0)

    @classmethod
    def abs(cls, scale=1) -> "PiecewiseLinearFn":
        """``t -> scale * |t|``."""
        s = to_q(scale)
        return cls(((ZERO, ZERO),), -s, s)

    @classmethod
    def affine(cls, slope, intercept) -> "PiecewiseLinearFn":
        s = to_q(slope)
        return cls(((ZERO, to_q(intercept)),), s, s)

    # evaluation

    def __call__(self, t) -> Q:
        ts, vs = self._ts, self._vs
        if t <= ts[0]:
            return vs[0] + self.left_slope * (t - ts[0])
        if t >= ts[-1]:
            return vs[-1] + self.right_slope * (t - ts[-1])
        k = bisect_right(ts, t) - 1
        return vs[k] + self._slopes[k] * (t - ts[k])

    def vanishes_at_zero(self) -> bool:
        return self(ZERO) == 0

    def is_nonnegative(self) -> bool:
        return (
            all(v >= 0 for v in self._vs)
            and self.left_slope <= 0
            and self.right_slope >= 0
        )

    def negative_witness(self) -> Q | None:
        """A point where the function is negative, or ``None``."""
        for t, v in self.breakpoints:
            if v < 0:
                return t
        if self.left_slope > 0:
            t0, v0 = self.breakpoints[0]
            return t0 - 1 - abs(v0) / self.left_slope
        if self.right_slope < 0:
            t1, v1 = self.breakpoints[-1]
            return t1 + 1 + abs(v1) / -self.right_slope
        return None

    def range_on(self, lo, hi) -> tuple:
        """Exact ``(min, max)`` of the function on ``[lo, hi]``."""
        lo, hi = to_q(lo), to_q(hi)
        if lo > hi:
            raise ValueError("empty interval")
        vals = [self(lo), self(hi)] + [v for t, v in self.breakpoints if lo < t < hi]
        return min(vals), max(vals)

    def zero_points(self) -> list:
        """Finitely many points representing every component of the zero set.

        Isolated zeros are returned as is; a zero interval contributes its ends
        and midpoint; a zero ray contributes its end and a point one unit out.
        """
        pts = list(self.breakpoints)
        out = set()
        for t, v in pts:
            if v == 0:
                out.add(t)
        for (t1, v1), (t2, v2) in zip(pts, pts[1:]):
            if v1 == 0 and v2 == 0:
                out.add((t1 + t2) / 2)
            elif (v1 < 0 < v2) or (v2 < 0 < v1):
                out.add(t1 - v1 * (t2 - t1) / (v2 - v1))
        t0, v0 = pts[0]
        if self.left_slope == 0:
            if v0 == 0:
                out.add(t0 - 1)
        elif v0 / self.left_slope > 0:
            out.add(t0 - v0 / self.left_slope)
        t1, v1 = pts[-1]
        if self.right_slope == 0:
            if v1 == 0:
                out.add(t1 + 1)
        elif -v1 / self.right_slope > 0:
            out.add(t1 - v1 / self.right_slope)
        return sorted(out)

    # arithmetic

    def __add__(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        ts = sorted(set(self._ts) | set(other._ts))
        return PiecewiseLinearFn(
            tuple((t, self(t) + other(t)) for t in ts),
            self.left_slope + other.left_slope,
            self.right_slope + other.right_slope,
        )

    def __neg__(self) -> "PiecewiseLinearFn":
        return PiecewiseLinearFn(
            tuple((t, -v) for t, v in self.breakpoints), -self.left_slope, -self.right_slope
        )

    def __sub__(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        return self + (-other)

    def scale(self, c) -> "PiecewiseLinearFn":
        c = to_q(c)
        return PiecewiseLinearFn(
            tuple((t, c * v) for t, v in self.breakpoints), c * self.left_slope, c * self.right_slope
        )

    def maximum(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        """Pointwise ``max(self, other)``."""
        return _pointwise_extremum(self, other, max)

    def minimum(self, other: "PiecewiseLinearFn") -> "PiecewiseLinearFn":
        """Pointwise ``min(self, other)``."""
        return _pointwise_extremum(self, other, min)

    def positive_part(self) -> "PiecewiseLinearFn":
        return self.maximum(PiecewiseLinearFn.zero())

    def absolute(self) -> "PiecewiseLinearFn":
        return self.maximum(-self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseLinearFn):
            return NotImplemented
        return (
            self.breakpoints == other.breakpoints
            and self.left_slope == other.left_slope
            and self.right_slope == other.right_slope
        )

    def __hash__(self) -> int:
        return hash((self.breakpoints, self.left_slope, self.right_slope))

    def __repr__(self) -> str:
        pts = ", ".join(f"({t}, {v})" for t, v in self.breakpoints)
        return f"PL[{self.left_slope} | {pts} | {self.right_slope}]"


def _canonical(pts: list, ls: Q, rs: Q) -> list:
    # slope[k] is the slope on the k-th piece, pieces = left ray, segments, right ray
    slopes = [ls] + [(v2 - v1) / (t2 - t1) for (t1, v1), (t2, v2) in zip(pts, pts[1:])] + [rs]
    kept = [p for k, p in enumerate(pts) if slopes[k] != slopes[k + 1]]
    if kept:
        return kept
    t0, v0 = pts[0]
    return [(ZERO, v0 - ls * t0)]


def _crossings(f: PiecewiseLinearFn, g: PiecewiseLinearFn, knots: list) -> list:
    """Points strictly between knots (or on the end rays) where ``f - g`` changes sign."""
    out = []
    d = [f(t) - g(t) for t in knots]
    for (t1, d1), (t2, d2) in zip(zip(knots, d), zip(knots[1:], d[1:])):
        if (d1 < 0 < d2) or (d2 < 0 < d1):
            out.append(t1 - d1 * (t2 - t1) / (d2 - d1))
    dl = f.left_slope - g.left_slope
    if dl and d[0] / dl > 0:
        out.append(knots[0] - d[0] / dl)
    dr = f.right_slope - g.right_slope
    if dr and -d[-1] / dr > 0:
        out.append(knots[-1] - d[-1] / dr)
    return out


def _pointwise_extremum(f: PiecewiseLinearFn, g: PiecewiseLinearFn, pick) -> PiecewiseLinearFn:
    knots = sorted(set(f._ts) | set(g._ts))
    knots = sorted(set(knots) | set(_crossings(f, g, knots)))
    pts = tuple((t, pick(f(t), g(t))) for t in knots)
    # crossings are knots, so on each end ray one function dominates throughout
    lf, lg = f(knots[0] - 1), g(knots[0] - 1)
    ls = f.left_slope if pick(lf, lg) == lf else g.left_slope
    rf, rg = f(knots[-1] + 1), g(knots[-1] + 1)
    rs = f.right_slope if pick(rf, rg) == rf else g.right_slope
    return PiecewiseLinearFn(pts, ls, rs)


def sum_fns(fns: Iterable[PiecewiseLinearFn]) -> PiecewiseLinearFn:
    total = PiecewiseLinearFn.zero()
    for fn in fns:
        total = total + fn
    return total
