"""Admissible sets, the projections ``π^D`` and the laterally continuous part.

An admissible set ``D`` contains every fragment of each of its members and the
sum of any two disjoint members. For positive ``T``

    π^D T(x) = sup { T y : y ⊑ x, y ∈ D }

is again a positive orthogonally additive operator and a fragment of ``T``.
Infimizing over the laterally dense admissible sets gives the laterally
continuous part ``T_n``; the remainder ``T_s = T - T_n`` is singular.

On R^n every lateral net is eventually constant, so ``T_n = T``. On the
sequence lattice the catalog here (the whole space and ``c00``) attains the
infimum for kernel+tail operators: ``T_n`` is the kernel part and ``T_s`` the
tail column. A second, independent route computes the infimum over lateral
chains ``g ⊑ g ∪ e^(1) ⊑ g ∪ e^(2) ⊑ ... → e`` of ``sup_k T e_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, islice, product
from typing import Callable, Optional, Sequence

from .calculus import op_meet_at
from .lattice import (
    EcSeq,
    FragmentChain,
    LatticeElement,
    Vec,
    disjoint,
    fragments,
    is_fragment,
    vinf,
    vsup,
)
from .operators import Domain, PointwiseOperator, UrysonOperator, require_positive
from .rational import ZERO, Q
from .report import Record, Report, encode

DEFAULT_RESOLUTION = 8
SAMPLE_CAP = 256


@dataclass(frozen=True)
class AdmissibleSet:
    """A decidable subset of ``E`` together with a finite sample of members."""

    name: str
    domain: Domain
    contains: Callable = field(compare=False, repr=False)
    sampler: Callable = field(compare=False, repr=False)
    laterally_dense: bool = False
    justification: str = ""

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def samples(self, resolution: int | None = DEFAULT_RESOLUTION) -> list:
        return list(self.sampler(resolution))


def _pattern_value(i: int) -> Q:
    return Q((-1) ** i * (i + 1))


def _patterns(domain: Domain, resolution, allowed=None, with_tail: bool = True):
    """Elements with prescribed supports and fixed nonzero values."""
    if domain.is_finite:
        idx = [i for i in range(domain.size) if allowed is None or i in allowed]
        for k in range(len(idx) + 1):
            for supp in combinations(idx, k):
                yield Vec(tuple(_pattern_value(i) if i in supp else ZERO for i in range(domain.size)))
        return
    N = resolution if resolution is not None else DEFAULT_RESOLUTION
    idx = [i for i in range(N) if allowed is None or i in allowed]
    tails = (ZERO, Q(N + 1)) if with_tail else (ZERO,)
    for tail in tails:
        for k in range(len(idx) + 1):
            for supp in combinations(idx, k):
                yield EcSeq(tuple(_pattern_value(i) if i in supp else ZERO for i in range(N)), tail)


def whole_space(domain: Domain) -> AdmissibleSet:
    def contains(x):
        try:
            domain.check(x)
        except ValueError:
            return False
        return True

    return AdmissibleSet(
        "E", domain, contains, lambda N: _patterns(domain, N),
        laterally_dense=True, justification="constant net e, e, ... converges laterally to e",
    )


def ideal_by_mask(domain: Domain, mask) -> AdmissibleSet:
    """The order ideal of elements supported in ``mask`` (tail zero on sequences)."""
    mask = frozenset(mask)

    def contains(x):
        if isinstance(x, Vec):
            return len(x) == domain.size and x.support() <= mask
        return isinstance(x, EcSeq) and not x.tail and all(
            i in mask for i, c in enumerate(x.prefix) if c
        )

    dense = domain.is_finite and mask >= set(range(domain.size))
    return AdmissibleSet(
        f"ideal{sorted(mask)}", domain, contains,
        lambda N: _patterns(domain, N, allowed=mask, with_tail=False),
        laterally_dense=dense,
        justification="equals E" if dense else "misses elements outside the mask",
    )


def fragments_of(e: LatticeElement, domain: Domain) -> AdmissibleSet:
    """``F_e``, the fragments of a fixed element."""
    domain.check(e)

    def contains(x):
        try:
            return is_fragment(x, e)
        except ValueError:
            return False

    def sampler(N):
        res = None if isinstance(e, Vec) else max(N or 0, e.prefix_len)
        return fragments(e, res)

    return AdmissibleSet(
        f"F{_label(e)}", domain, contains, sampler,
        laterally_dense=False, justification="only reaches fragments of a single element",
    )


def c00() -> AdmissibleSet:
    """Finitely supported sequences (tail zero)."""
    domain = Domain("ecseq", 0)

    def contains(x):
        return isinstance(x, EcSeq) and not x.tail

    return AdmissibleSet(
        "c00", domain, contains, lambda N: _patterns(domain, N, with_tail=False),
        laterally_dense=True,
        justification="prefix truncations e^(k) lie in c00 and converge laterally to e",
    )


def null_set(T: UrysonOperator) -> AdmissibleSet:
    """``N_T = {e : Te = 0}`` for positive ``T``.

    Membership is exact evaluation. Samples are built from the zero sets of the
    kernel entries: a column value is usable when every row entry vanishes there.
    """
    require_positive(T)

    def contains(x):
        try:
            return T.apply(x).is_zero()
        except ValueError:
            return False

    def common_zeros(fns):
        cands = sorted({t for fn in fns for t in fn.zero_points()} - {ZERO})
        return [ZERO] + [t for t in cands if all(fn(t) == 0 for fn in fns)][:1]

    cols = [common_zeros([row[j] for row in T.kernel]) for j in range(T.n)]
    tails = common_zeros(list(T.tail)) if T.tail is not None else None

    def sampler(N):
        if T.domain.is_finite:
            return islice((Vec(c) for c in product(*cols)), SAMPLE_CAP)
        N = max(N or 0, T.n)
        extra = [[ZERO, Q(j + 1)] if j < T.n + 2 else [ZERO] for j in range(T.n, N)]
        tail_vals = tails if tails is not None else [ZERO, Q(N + 1)]
        gen = (EcSeq(c, t) for t in tail_vals for c in product(*(cols + extra)))
        return islice(gen, SAMPLE_CAP)

    if T.domain.is_finite:
        dense = all(fn == fn.zero() for _, fn in T.entries())
        why = "equals E" if dense else "misses a coordinate where T is nonzero"
    else:
        dense = all(fn == fn.zero() for row in T.kernel for fn in row)
        why = "contains c00" if dense else "T is nonzero on some truncation"
    return AdmissibleSet(
        "N_T", T.domain, contains, sampler, laterally_dense=dense, justification=why,
    )


def _label(e) -> str:
    return str(encode(e)).replace(" ", "").replace("'", "")


def check_admissible(D: AdmissibleSet, resolution: int | None = DEFAULT_RESOLUTION) -> Report:
    """Exhaustively check both closure rules on ``D``'s samples."""
    report = Report()
    samples = D.samples(resolution)
    if not samples:
        raise ValueError(f"admissible set {D.name} produced no samples")

    def res(*xs):
        if isinstance(xs[0], Vec):
            return None
        return max([resolution or 0] + [x.prefix_len for x in xs])

    stray = next((x for x in samples if not D.contains(x)), None)
    report.add(Record.holds(
        f"admissible.samples-are-members[{D.name}]", "admissible-set", stray is None,
        inputs=(D.name, resolution), witness={"x": stray},
    ))
    bad = None
    for x in samples:
        bad = next((y for y in fragments(x, res(x)) if not D.contains(y)), None)
        if bad is not None:
            bad = {"x": x, "fragment": bad}
            break
    report.add(Record.holds(
        f"admissible.fragment-closed[{D.name}]", "admissible-set", bad is None,
        inputs=(D.name, resolution), witness=bad,
    ))
    bad = None
    for x, y in combinations(samples, 2):
        if disjoint(x, y) and not D.contains(x + y):
            bad = {"x": x, "y": y}
            break
    report.add(Record.holds(
        f"admissible.disjoint-sum-closed[{D.name}]", "admissible-set", bad is None,
        inputs=(D.name, resolution), witness=bad,
    ))
    return report


def _res_for(x, resolution):
    if isinstance(x, Vec):
        return None
    return max(resolution or 0, x.prefix_len)


def pi_D_at(T, D: AdmissibleSet, x, resolution: int | None = DEFAULT_RESOLUTION) -> Vec:
    """``π^D T(x)``: largest value of ``T`` on a fragment of ``x`` lying in ``D``."""
    require_positive(T)
    T.domain.check(x)
    return vsup((T.apply(y) for y in fragments(x, _res_for(x, resolution)) if D.contains(y)), T.m)


def pi_D_operator(T, D: AdmissibleSet, resolution: int | None = DEFAULT_RESOLUTION) -> PointwiseOperator:
    require_positive(T)
    return PointwiseOperator(
        T.domain, T.m, lambda x: pi_D_at(T, D, x, resolution), positive=True, name=f"pi^{D.name}"
    )


def remainder_operator(T, P) -> PointwiseOperator:
    """``T - P`` as a pointwise operator (positive when ``P`` is a fragment of ``T``)."""
    return PointwiseOperator(T.domain, T.m, lambda x: T.apply(x) - P.apply(x), positive=True,
                             name=f"{getattr(T, 'name', 'T')}-{getattr(P, 'name', 'P')}")


def check_fragment_property(T, D: AdmissibleSet, samples: Sequence,
                            resolution: int | None = DEFAULT_RESOLUTION) -> Report:
    """``π^D T`` is orthogonally additive, lies in ``[0, T]`` and is disjoint from ``T - π^D T``."""
    require_positive(T)
    report = Report()
    P = pi_D_operator(T, D, resolution)
    R = remainder_operator(T, P)
    values = {x: P.apply(x) for x in samples}
    sub = sup = None
    for x, y in combinations(samples, 2):
        if not disjoint(x, y):
            continue
        whole = P.apply(x + y)
        parts = values[x] + values[y]
        if sub is None and not whole <= parts:
            sub = {"x": x, "y": y, "whole": whole, "parts": parts}
        if sup is None and not parts <= whole:
            sup = {"x": x, "y": y, "whole": whole, "parts": parts}
    report.add(Record.holds(f"fragment.subadditive[{D.name}]", "admissible-projection",
                            sub is None, inputs=(D.name, samples), witness=sub))
    report.add(Record.holds(f"fragment.superadditive[{D.name}]", "admissible-projection",
                            sup is None, inputs=(D.name, samples), witness=sup))
    bad = next((x for x in samples
                if not values[x].zero_like() <= values[x] <= T.apply(x)), None)
    report.add(Record.holds(f"fragment.between-0-and-T[{D.name}]", "admissible-projection",
                            bad is None, inputs=(D.name, samples), witness={"x": bad}))
    bad = None
    for x in samples:
        meet = op_meet_at(P, R, x, _res_for(x, resolution))
        if not meet.is_zero():
            bad = {"x": x, "meet": meet}
            break
    report.add(Record.holds(f"fragment.disjoint-from-remainder[{D.name}]", "admissible-projection",
                            bad is None, inputs=(D.name, samples), witness=bad))
    return report


@dataclass(frozen=True)
class FamilyOfAdmissible:
    """The upward-saturated family generated by finitely many admissible sets."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a family needs at least one generator")
        for D in gens:
            report = check_admissible(D, resolution=4)
            if not report.passed:
                raise ValueError(f"generator {D.name} is not admissible")
        object.__setattr__(self, "generators", gens)


def pi_family_at(T, family: FamilyOfAdmissible, e, resolution: int | None = DEFAULT_RESOLUTION) -> Vec:
    """Infimum over the generators of ``π^D T e``.

    Enlarging ``D`` can only enlarge ``π^D T e``, so the generators carry the
    infimum over the saturated family.
    """
    if not isinstance(family, FamilyOfAdmissible):
        family = FamilyOfAdmissible(tuple(family))
    return vinf((pi_D_at(T, D, e, resolution) for D in family.generators), T.m)


def catalog(domain: Domain) -> list:
    """The shipped laterally dense admissible sets."""
    if domain.is_finite:
        return [whole_space(domain)]
    return [whole_space(domain), c00()]


def lateral_chains(e, resolution: int, columns: int = 0) -> list:
    """Lateral chains converging to ``e``, one per starting fragment ``g``.

    On R^n the chain is ``g ⊑ e``. On sequences it is ``g ∪ e^(k)`` for
    ``k = 0..K``, ``K = max(resolution, prefix, columns)``, where ``e^(k)``
    keeps the first ``k`` coordinates of ``e``. ``g = 0`` gives the plain
    truncation chain. Starting fragments are enumerated at
    ``max(prefix, columns)``: finer splits of the constant stretch are not
    told apart by an operator reading ``columns`` kernel columns.
    """
    if isinstance(e, Vec):
        return [FragmentChain((g, e), e) for g in fragments(e)]
    K = max(resolution, e.prefix_len, columns)
    chains = []
    for g in fragments(e, max(e.prefix_len, columns)):
        steps = []
        for k in range(K + 1):
            length = max(k, g.prefix_len)
            steps.append(EcSeq(e.head(k) + g.head(length)[k:], g.tail))
        chains.append(FragmentChain(tuple(steps), e))
    return chains


def chain_converges(chain: FragmentChain) -> bool:
    """The residuals ``e - e_k`` vanish below index ``k``, so they are dominated
    by ``|e| 1_[k, ∞)``, which decreases to 0; on R^n the chain must end at ``e``."""
    if isinstance(chain.target, Vec):
        return chain.steps[-1] == chain.target
    e = chain.target
    return all(step.head(k) == e.head(k) for k, step in enumerate(chain.steps))


def catalog_inf(T, e, resolution: int = DEFAULT_RESOLUTION) -> Vec:
    return vinf((pi_D_at(T, D, e, resolution) for D in catalog(T.domain) if D.laterally_dense), T.m)


def chain_inf(T, e, resolution: int = DEFAULT_RESOLUTION) -> Vec:
    cols = 0 if T.domain.is_finite else T.domain.size
    values = []
    for chain in lateral_chains(e, resolution, cols):
        if not chain_converges(chain):
            raise AssertionError(f"chain {chain!r} does not converge laterally")
        values.append(vsup((T.apply(s) for s in chain.steps), T.m))
    return vinf(values, T.m)


class _Memo:
    """Caches ``T.apply``; chains to the same limit share most of their steps."""

    def __init__(self, T):
        self.T, self.domain, self.m = T, T.domain, T.m
        self._cache = {}
        # a kernel operator on sequences reads only its columns and the tail
        self._key = (
            (lambda x: (x.head(T.n), x.tail))
            if isinstance(T, UrysonOperator) and not T.domain.is_finite
            else (lambda x: x)
        )

    def apply(self, x):
        key = self._key(x)
        v = self._cache.get(key)
        if v is None:
            v = self._cache[key] = self.T.apply(x)
        return v

    def is_positive(self) -> bool:
        return self.T.is_positive()


@dataclass(frozen=True)
class LateralDecomposition:
    continuous_part: Vec
    singular_part: Vec


def _decompose_once(T, e, resolution):
    by_catalog = catalog_inf(T, e, resolution)
    by_chains = chain_inf(T, e, resolution)
    if by_catalog != by_chains:
        raise AssertionError(
            f"catalog and chain formulas disagree at e={e!r}: {by_catalog!r} vs {by_chains!r}"
        )
    return by_catalog


def continuous_part_at(T, e, resolution: int = DEFAULT_RESOLUTION) -> LateralDecomposition:
    """Split ``Te`` into laterally continuous and singular parts.

    Both formulas are evaluated and must agree; on sequences the value must
    also be unchanged at ``resolution + 3``.
    """
    require_positive(T)
    T.domain.check(e)
    T = _Memo(T)
    if T.domain.is_finite:
        cont = _decompose_once(T, e, None)
    else:
        if resolution < max(T.domain.size, e.prefix_len):
            raise ValueError(
                f"resolution {resolution} must cover the {T.domain.size} kernel columns "
                f"and the prefix length {e.prefix_len}"
            )
        cont = _decompose_once(T, e, resolution)
        finer = _decompose_once(T, e, resolution + 3)
        if cont != finer:
            raise AssertionError(f"no stabilization at e={e!r}: {cont!r} vs {finer!r}")
    return LateralDecomposition(cont, T.apply(e) - cont)


def is_singular(T, D: AdmissibleSet, samples: Optional[Sequence] = None,
                resolution: int | None = DEFAULT_RESOLUTION) -> bool:
    """``T`` vanishes on the (sampled) laterally dense admissible set ``D``."""
    if not D.laterally_dense:
        raise ValueError(f"{D.name} is not laterally dense")
    if samples is None:
        samples = D.samples(resolution)
    return all(T.apply(y).is_zero() for y in samples)


def check_kernel_tail_decomposition(T_kernel: UrysonOperator, T_tail: UrysonOperator,
                                    e_samples: Sequence,
                                    resolution: int = DEFAULT_RESOLUTION) -> Report:
    """Kernel and tail parts are disjoint and the decomposition recovers them."""
    if T_kernel.has_tail:
        raise ValueError("T_kernel must not have a tail column")
    if any(fn != fn.zero() for row in T_tail.kernel for fn in row):
        raise ValueError("T_tail must have a zero kernel")
    require_positive(T_kernel, T_tail)
    report = Report()
    total = T_kernel + T_tail
    for k, e in enumerate(e_samples):
        res = max(resolution, e.prefix_len)
        meet = op_meet_at(T_kernel, T_tail, e, res)
        report.add(Record.compare(f"lateral.parts-disjoint#{k}", "singular-orthogonality",
                                  meet, meet.zero_like(), inputs=e, witness={"e": e}))
        d = continuous_part_at(total, e, res)
        report.add(Record.compare(
            f"lateral.decomposition#{k}", "singular-orthogonality",
            (d.continuous_part, d.singular_part), (T_kernel.apply(e), T_tail.apply(e)),
            inputs=e, witness={"e": e},
        ))
    return report
