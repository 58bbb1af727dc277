"""Band projections onto bands generated by positive operators.

For positive ``T`` and ``S`` the complement projection is

    σ_S T e = inf_{ε>0} sup { ρ T f : ρ S f ≤ ε S e, f ⊑ e, ρ ∈ 𝔅(F) }

and ``π_S T e = T e - σ_S T e``. Here ``𝔅(F)`` is the finite set of coordinate
masks and ``f`` runs over the finite set of fragments of ``e``, so the infimum
over ε is attained as soon as ε drops below every positive ratio
``(S f)_i / (S e)_i``: the limit constraint is ``ρ S f = 0``.

Both suprema are taken coordinatewise. A coordinate ``i`` can only be kept by a
mask containing it, and shrinking a feasible mask to ``{i}`` keeps it feasible
without changing coordinate ``i``, so singleton masks suffice. The full mask
enumeration is kept as :func:`sigma_at_all_masks` for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .calculus import entrywise_join, op_join_at
from .lattice import (
    PartitionOfUnity,
    Vec,
    all_projections,
    element_band_projection,
    fragments,
    is_fragment,
    partitions_of_unity,
    vinf,
    vsup,
)
from .operators import UrysonOperator, one_dimensional, require_positive
from .rational import ZERO, to_q

EXACT = "exact"
GRID = "grid"
DEFAULT_GRID = tuple(Fraction(1, 2 ** k) for k in range(41))


def _check(T, S, e) -> None:
    if T.domain != S.domain or T.m != S.m:
        raise ValueError("T and S must share domain and codomain")
    T.domain.check(e)
    require_positive(T, S)


def _sigma_value(T, S, e, resolution, eps) -> Vec:
    """σ at a fixed ε; ``eps=None`` is the limit constraint ``ρ S f = 0``."""
    Se = S.apply(e)
    best = [ZERO] * T.m
    for f in fragments(e, resolution):
        Sf = S.apply(f)
        Tf = None
        for i in range(T.m):
            ok = Sf[i] == 0 if eps is None else Sf[i] <= eps * Se[i]
            if ok:
                if Tf is None:
                    Tf = T.apply(f)
                if Tf[i] > best[i]:
                    best[i] = Tf[i]
    return Vec(tuple(best))


def sigma_at(T, S, e, mode: str = EXACT, resolution: int | None = None, eps=None) -> Vec:
    """``σ_S T e``: the part of ``Te`` disjoint from the band generated by ``S``.

    ``mode="grid"`` evaluates the formula at finite ε: at ``eps`` if given,
    otherwise at every ε of :data:`DEFAULT_GRID` taking the infimum.
    """
    _check(T, S, e)
    if mode == EXACT:
        return _sigma_value(T, S, e, resolution, None)
    if mode != GRID:
        raise ValueError(f"unknown mode {mode!r}")
    if eps is not None:
        eps = to_q(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        return _sigma_value(T, S, e, resolution, eps)
    return vinf((_sigma_value(T, S, e, resolution, g) for g in DEFAULT_GRID), T.m)


def _pi_value(T, S, e, resolution, eps) -> Vec:
    """π at fixed ε: ``inf { ρ T f + ρ^⊥ T e : ρ S(e - f) ≤ ε S e }``."""
    Se, Te = S.apply(e), T.apply(e)
    best = list(Te.coords)  # the empty mask is always feasible
    for f in fragments(e, resolution):
        Sr = S.apply(e - f)
        Tf = None
        for i in range(T.m):
            ok = Sr[i] == 0 if eps is None else Sr[i] <= eps * Se[i]
            if ok:
                if Tf is None:
                    Tf = T.apply(f)
                if Tf[i] < best[i]:
                    best[i] = Tf[i]
    return Vec(tuple(best))


def pi_at(T, S, e, mode: str = EXACT, resolution: int | None = None, eps=None) -> Vec:
    """``π_S T e``: the part of ``Te`` in the band generated by ``S``."""
    _check(T, S, e)
    if mode == EXACT:
        return _pi_value(T, S, e, resolution, None)
    if mode != GRID:
        raise ValueError(f"unknown mode {mode!r}")
    if eps is not None:
        eps = to_q(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        return _pi_value(T, S, e, resolution, eps)
    return vsup((_pi_value(T, S, e, resolution, g) for g in DEFAULT_GRID), T.m)


def sigma_at_all_masks(T, S, e, resolution: int | None = None) -> Vec:
    """σ_S T e by brute force over every mask and fragment (limit constraint)."""
    _check(T, S, e)
    values = []
    for rho in all_projections(T.m):
        for f in fragments(e, resolution):
            if rho(S.apply(f)).is_zero():
                values.append(rho(T.apply(f)))
    return vsup(values, T.m)


def pi_at_all_masks(T, S, e, resolution: int | None = None) -> Vec:
    """π_S T e by brute force over every mask and fragment (limit constraint)."""
    _check(T, S, e)
    Te = T.apply(e)
    values = []
    for rho in all_projections(T.m):
        for f in fragments(e, resolution):
            if rho(S.apply(e - f)).is_zero():
                values.append(rho(T.apply(f)) + rho.complement()(Te))
    return vinf(values, T.m)


def stabilization_threshold(S, e, resolution: int | None = None) -> Optional[Fraction]:
    """Smallest positive ratio ``(S f)_i / (S e)_i`` over fragments.

    For every ε strictly below it the grid value equals the exact limit. ``None``
    means no ratio is positive and every ε gives the limit value.
    """
    Se = S.apply(e)
    ratios = []
    for f in fragments(e, resolution):
        Sf = S.apply(f)
        ratios.extend(Sf[i] / Se[i] for i in range(S.m) if Sf[i] > 0)
        Sr = S.apply(e - f)
        ratios.extend(Sr[i] / Se[i] for i in range(S.m) if Sr[i] > 0)
    return min(ratios) if ratios else None


@dataclass(frozen=True)
class ProjectionValue:
    pi_part: Vec
    sigma_part: Vec
    mode: str
    eps: Optional[Fraction] = None

    def __post_init__(self):
        if len(self.pi_part) != len(self.sigma_part):
            raise ValueError("parts live in different spaces")


def band_project(T, S, e, mode: str = EXACT, resolution: int | None = None, eps=None) -> ProjectionValue:
    pi = pi_at(T, S, e, mode, resolution, eps)
    sigma = sigma_at(T, S, e, mode, resolution, eps)
    if pi + sigma != T.apply(e):
        raise AssertionError(f"π + σ != Te at e={e!r}")
    return ProjectionValue(pi, sigma, mode, None if eps is None else to_q(eps))


def check_observation(T, S, e, resolution: int | None = None) -> bool:
    """Outside ``supp(Se)`` σ keeps all of ``Te``; π lives inside ``supp(Se)``."""
    rho = element_band_projection(S.apply(e))
    rho_c = rho.complement()
    Te = T.apply(e)
    sigma = sigma_at(T, S, e, EXACT, resolution)
    pi = pi_at(T, S, e, EXACT, resolution)
    return rho_c(sigma) == rho_c(Te) and rho(pi) == pi


class IncreasingSet:
    """A finite upward-directed family of positive operators.

    The list is closed at construction by appending the entrywise join of all
    members when no member already dominates the rest; the join dominates
    every member, which makes the family directed.
    """

    def __init__(self, members: Sequence[UrysonOperator]):
        members = list(members)
        if not members:
            raise ValueError("an increasing set needs at least one operator")
        require_positive(*members)
        top = members[0]
        for op in members[1:]:
            top = entrywise_join(top, op)
        dominating = [q for q in members if _dominates(q, members)]
        if dominating:
            top = dominating[0]
        else:
            members.append(top)
        self.top = top
        self.members = tuple(members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def is_directed(self) -> bool:
        return all(
            any((q - a).is_positive() and (q - b).is_positive() for q in self.members)
            for a in self.members
            for b in self.members
        )

    def check_joins(self, samples, resolution: int | None = None) -> bool:
        """The materialized join agrees with pointwise joins on ``samples``."""
        top = self.top
        for a in self.members:
            for x in samples:
                if op_join_at(a, top, x, resolution) != top.apply(x):
                    return False
        return True


def _dominates(q, members) -> bool:
    return all((q - a).is_positive() for a in members)


def sigma_increasing(T, A: IncreasingSet, e, resolution: int | None = None) -> Vec:
    """σ_A T e as the minimum over members of σ_S T e."""
    if not isinstance(A, IncreasingSet):
        A = IncreasingSet(A)
    return vinf((sigma_at(T, S, e, EXACT, resolution) for S in A), T.m)


def pi_increasing(T, A: IncreasingSet, e, resolution: int | None = None) -> Vec:
    return T.apply(e) - sigma_increasing(T, A, e, resolution)


@dataclass(frozen=True)
class DisjointnessCertificate:
    """Blocks ``ρ_α`` with fragments ``e_α`` such that ``ρ_α T e_α ≤ ε Te`` and
    ``ρ_α S(e - e_α) ≤ ε Se``. ``epsilon = 0`` certifies every ε at once."""

    partition: PartitionOfUnity
    fragments: tuple
    epsilon: Fraction

    def verify(self, T, S, e) -> bool:
        Te, Se = T.apply(e), S.apply(e)
        if len(self.fragments) != len(self.partition):
            return False
        for rho, ea in zip(self.partition, self.fragments):
            if not is_fragment(ea, e):
                return False
            if not rho(T.apply(ea)) <= rho(Te * self.epsilon):
                return False
            if not rho(S.apply(e - ea)) <= rho(Se * self.epsilon):
                return False
        return True


def disjointness_certificate(T, S, e, epsilon, resolution: int | None = None,
                             max_blocks: int | None = None) -> Optional[DisjointnessCertificate]:
    """Search partitions of unity and fragments for a certificate; ``None`` if none exists.

    Partitions are tried by block count, fragments by support size descending;
    the first certificate found is returned.
    """
    eps = to_q(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    _check(T, S, e)
    Te, Se = T.apply(e), S.apply(e)
    frags = fragments(e, resolution)
    frags = sorted(frags, key=lambda z: -_support_size(z, resolution))
    images = [(z, T.apply(z), S.apply(e - z)) for z in frags]
    bound_T, bound_S = Te * eps, Se * eps
    for partition in partitions_of_unity(T.m, max_blocks):
        chosen = []
        for rho in partition:
            for z, Tz, Sr in images:
                if rho(Tz) <= rho(bound_T) and rho(Sr) <= rho(bound_S):
                    chosen.append(z)
                    break
            else:
                break
        else:
            return DisjointnessCertificate(partition, tuple(chosen), eps)
    return None


def _support_size(z, resolution) -> int:
    if isinstance(z, Vec):
        return len(z.support())
    k = resolution if resolution is not None else z.prefix_len
    return sum(1 for c in z.head(k) if c) + (1 if z.tail else 0)


def pi_onedim(T, phi: UrysonOperator, u: Vec, e, resolution: int | None = None) -> Vec:
    """π onto the band of ``φ ⊗ u`` via the reduced one-dimensional formula.

    ``σ = ρ_u^⊥ T e + sup { ρ_u T f : φ(f) = 0, f ⊑ e }`` and ``π = Te - σ``.
    """
    if phi.m != 1:
        raise ValueError("phi must be scalar valued")
    require_positive(T, phi)
    if any(c < 0 for c in u.coords):
        raise ValueError("u must be positive")
    if phi.domain != T.domain:
        raise ValueError("phi and T must share a domain")
    T.domain.check(e)
    rho_u = element_band_projection(u)
    Te = T.apply(e)
    inside = vsup(
        (rho_u(T.apply(f)) for f in fragments(e, resolution) if phi.apply(f)[0] == 0), T.m
    )
    sigma = rho_u.complement()(Te) + inside
    return Te - sigma


def pi_onedim_band(T, phis: Sequence[UrysonOperator], us: Sequence[Vec], e,
                   resolution: int | None = None) -> Vec:
    """π onto the band generated by the operators ``φ_k ⊗ u_k``."""
    if not phis or len(phis) != len(us):
        raise ValueError("need a nonempty family of (phi, u) pairs of equal length")
    family = IncreasingSet([one_dimensional(p, u) for p, u in zip(phis, us)])
    return pi_increasing(T, family, e, resolution)
