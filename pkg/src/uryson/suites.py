"""Randomized verification suites producing deterministic reports.

Each suite draws from its own generator seeded by ``(suite name, seed)``, so
``all`` is exactly the concatenation of the individual suites and every run
with the same arguments yields the same records in the same order.
"""

from __future__ import annotations

import random
from typing import Optional

from .bands import (
    EXACT,
    GRID,
    IncreasingSet,
    check_observation,
    disjointness_certificate,
    pi_at,
    pi_at_all_masks,
    pi_onedim,
    pi_onedim_band,
    pi_increasing,
    sigma_at,
    sigma_at_all_masks,
    sigma_increasing,
    stabilization_threshold,
)
from .calculus import (
    kernel_abs_closed_form,
    kernel_join_closed_form,
    kernel_meet_closed_form,
    op_join_at,
    op_meet_at,
    op_neg_at,
    op_pos_at,
)
from .generators import (
    corrupted,
    random_kernel_operator,
    random_nonzero_element,
    random_positive_vector,
    random_sequence_operator,
    strictly_positive_functional,
)
from .lateral import (
    c00,
    catalog,
    check_admissible,
    check_fragment_property,
    check_kernel_tail_decomposition,
    continuous_part_at,
    fragments_of,
    ideal_by_mask,
    is_singular,
    null_set,
    whole_space,
)
from .lattice import EcSeq, Vec
from .operators import Domain, UrysonOperator, one_dimensional, random_element
from .plfn import PiecewiseLinearFn
from .rational import Q, ZERO
from .report import Record, Report
from .scenario import SUITE_DEFAULTS, Scenario

SUITES = ("th1", "disjointness", "band", "onedim", "lateral")
# elements evaluated per random operator (pair) unless overridden
DEFAULT_ELEMENTS = 3


class UnknownSuiteError(ValueError):
    pass


def _res(x, resolution):
    if isinstance(x, Vec):
        return None
    return max(resolution, x.prefix_len)


def _split_for_additivity(f):
    """``f = x + y`` with ``x`` holding coordinate 0 and ``y`` the rest."""
    if isinstance(f, Vec):
        x = Vec((f[0],) + (ZERO,) * (len(f) - 1))
    else:
        x = EcSeq((f.coord(0),), ZERO)
    return x, f - x


def _additivity_record(check, T, f) -> Record:
    x, y = _split_for_additivity(f)
    return Record.compare(
        check, "orthogonal-additivity", T.apply(x + y), T.apply(x) + T.apply(y),
        inputs=(x, y), witness={"x": x, "y": y},
    )


def _fits(T, x) -> bool:
    try:
        T.domain.check(x)
    except ValueError:
        return False
    return True


def _maybe_corrupt(T, corrupt: bool):
    return corrupted(T) if corrupt else T


def _nonzero_both_first(domain: Domain, rng: random.Random):
    """An element whose first two coordinates are nonzero (so a cross term shows)."""
    while True:
        f = random_nonzero_element(domain, rng, zero_prob=0.1)
        if f.coord(0) and f.coord(1):
            return f


# -- th1: lattice operations -------------------------------------------------

def _th1_checks(report, tag, T, S, f, resolution):
    r = _res(f, resolution)
    Tf, Sf = T.apply(f), S.apply(f)
    join, meet = op_join_at(T, S, f, r), op_meet_at(T, S, f, r)
    pos, neg = op_pos_at(T, f, r), op_neg_at(T, f, r)
    report.add(Record.compare(f"th1.join-plus-meet{tag}", "lattice-operations",
                              join + meet, Tf + Sf, inputs=f, witness={"f": f}))
    report.add(Record.compare(f"th1.pos-minus-neg{tag}", "lattice-operations",
                              pos - neg, Tf, inputs=f, witness={"f": f}))
    report.add(Record.holds(f"th1.abs-dominates{tag}", "lattice-operations",
                            abs(Tf) <= pos + neg, inputs=f,
                            witness={"f": f, "abs_Tf": abs(Tf), "abs_T_f": pos + neg}))
    report.add(Record.holds(f"th1.join-upper-bound{tag}", "lattice-operations",
                            join >= Tf and join >= Sf, inputs=f,
                            witness={"f": f, "join": join, "Tf": Tf, "Sf": Sf}))
    if isinstance(T, UrysonOperator) and isinstance(S, UrysonOperator) and not (T.has_tail or S.has_tail):
        closed = (kernel_join_closed_form(T, S).apply(f), kernel_meet_closed_form(T, S).apply(f),
                  kernel_abs_closed_form(T).apply(f))
        report.add(Record.compare(f"th1.closed-forms{tag}", "lattice-operations",
                                  closed, (join, meet, pos + neg), inputs=f, witness={"f": f}))


def suite_th1(rng, trials, elements, max_dim, resolution, corrupt, scenario=None) -> Report:
    report = Report()
    for k in range(trials):
        n = rng.randint(2 if corrupt else 1, max_dim)
        m = rng.randint(1, max_dim)
        T = random_kernel_operator(rng, n, m)
        S = random_kernel_operator(rng, n, m)
        T = _maybe_corrupt(T, corrupt)
        for j in range(elements):
            _th1_checks(report, f"#{k}.{j}", T, S, random_element(T.domain, rng), resolution)
        if n >= 2:
            f = _nonzero_both_first(T.domain, rng)
            report.add(_additivity_record(f"th1.orthogonal-additivity#{k}", T, f))
    if scenario is not None:
        names = sorted(scenario.operators)
        for a in names:
            for b in names:
                T, S = scenario.operators[a], scenario.operators[b]
                if T.m != S.m:
                    continue
                for ename in sorted(n for n, x in scenario.elements.items() if _fits(T, x)):
                    _th1_checks(report, f"[{a},{b},{ename}]", T, S, scenario.elements[ename], resolution)
    return report


# -- band projections --------------------------------------------------------

def _band_checks(report, tag, T, S, e, resolution):
    r = _res(e, resolution)
    Te, Se = T.apply(e), S.apply(e)
    pi, sigma = pi_at(T, S, e, EXACT, r), sigma_at(T, S, e, EXACT, r)
    w = {"e": e}
    report.add(Record.compare(f"band.pi-plus-sigma{tag}", "band-projection", pi + sigma, Te, inputs=e, witness=w))
    report.add(Record.compare(f"band.pi-of-generator{tag}", "band-projection",
                              pi_at(S, S, e, EXACT, r), Se, inputs=e, witness=w))
    report.add(Record.compare(f"band.sigma-of-generator{tag}", "band-projection",
                              sigma_at(S, S, e, EXACT, r), Se.zero_like(), inputs=e, witness=w))
    report.add(Record.holds(f"band.observation{tag}", "band-projection",
                            check_observation(T, S, e, r), inputs=e, witness=w))
    report.add(Record.compare(f"band.singleton-masks{tag}", "band-projection",
                              (sigma, pi), (sigma_at_all_masks(T, S, e, r), pi_at_all_masks(T, S, e, r)),
                              inputs=e, witness=w))
    eps = Q(1, 2 ** 20)
    report.add(Record.compare(f"band.grid-stabilizes{tag}", "band-projection",
                              (pi_at(T, S, e, GRID, r, eps), sigma_at(T, S, e, GRID, r, eps)),
                              (pi, sigma), inputs=(e, eps), witness=w))
    thr = stabilization_threshold(S, e, r)
    if thr is not None:
        below = thr / 2
        report.add(Record.compare(f"band.grid-below-threshold{tag}", "band-projection",
                                  sigma_at(T, S, e, GRID, r, below), sigma, inputs=(e, below), witness=w))
    report.add(Record.compare(f"band.singleton-set{tag}", "band-projection",
                              sigma_increasing(T, IncreasingSet([S]), e, r), sigma, inputs=e, witness=w))
    report.add(Record.compare(f"band.scaling-invariance{tag}", "band-projection",
                              sigma_increasing(T, IncreasingSet([S, S.scale(2)]), e, r), sigma,
                              inputs=e, witness=w))


def suite_band(rng, trials, elements, max_dim, resolution, corrupt, scenario=None) -> Report:
    report = Report()
    for k in range(trials):
        n = rng.randint(2 if corrupt else 1, max_dim)
        m = rng.randint(1, max_dim)
        T = _maybe_corrupt(random_kernel_operator(rng, n, m, positive=True), corrupt)
        # trial 0 projects onto the zero band
        S = UrysonOperator.zero(T.domain, m) if k == 0 else random_kernel_operator(rng, n, m, positive=True)
        for j in range(elements):
            _band_checks(report, f"#{k}.{j}", T, S, random_element(T.domain, rng), resolution)
        if k == 0:
            e = random_element(T.domain, rng)
            report.add(Record.compare("band.zero-generator#0", "band-projection",
                                      (pi_at(T, S, e), sigma_at(T, S, e)), (T.apply(e).zero_like(), T.apply(e)),
                                      inputs=e, witness={"e": e}))
        if n >= 2:
            report.add(_additivity_record(f"band.orthogonal-additivity#{k}", T,
                                          _nonzero_both_first(T.domain, rng)))
        A = IncreasingSet([S, random_kernel_operator(rng, n, m, positive=True)])
        samples = [random_element(T.domain, rng) for _ in range(2)]
        report.add(Record.holds(f"band.increasing-set-joins#{k}", "band-projection",
                                A.is_directed() and A.check_joins(samples), inputs=samples,
                                witness={"samples": samples}))
    if scenario is not None:
        positive = sorted(name for name, op in scenario.operators.items() if op.is_positive())
        for a in positive:
            for b in positive:
                T, S = scenario.operators[a], scenario.operators[b]
                if T.m != S.m:
                    continue
                for ename in sorted(n for n, x in scenario.elements.items() if _fits(T, x)):
                    _band_checks(report, f"[{a},{b},{ename}]", T, S, scenario.elements[ename], resolution)
    return report


# -- disjointness certificates ------------------------------------------------

CERTIFICATE_EPSILONS = (Q(1), Q(1, 2), Q(1, 10))


def _orthogonal_pair(rng, m):
    idx = list(range(m))
    rng.shuffle(idx)
    cut = rng.randint(1, m - 1)
    return random_positive_vector(rng, m, set(idx[:cut])), random_positive_vector(rng, m, set(idx[cut:]))


def suite_disjointness(rng, trials, elements, max_dim, resolution, corrupt, scenario=None) -> Report:
    report = Report()
    for k in range(trials):
        n = rng.randint(2, max_dim)
        m = rng.randint(2, max_dim)
        u, v = _orthogonal_pair(rng, m)
        T = one_dimensional(strictly_positive_functional(rng, n), u)
        S = one_dimensional(strictly_positive_functional(rng, n), v)
        T = _maybe_corrupt(T, corrupt)
        for j in range(elements):
            e = random_element(T.domain, rng)
            for eps in CERTIFICATE_EPSILONS:
                cert = disjointness_certificate(T, S, e, eps)
                report.add(Record.holds(
                    f"disjointness.certificate-exists#{k}.{j}@{eps}", "disjointness-certificate",
                    cert is not None and cert.verify(T, S, e), inputs=(e, eps), witness={"e": e, "eps": eps},
                ))
            meet = op_meet_at(T, S, e)
            report.add(Record.compare(f"disjointness.meet-zero#{k}.{j}", "disjointness-certificate",
                                      meet, meet.zero_like(), inputs=e, witness={"e": e}))
        report.add(_additivity_record(f"disjointness.orthogonal-additivity#{k}", T,
                                      _nonzero_both_first(T.domain, rng)))
        # S = T with Te != 0 admits no certificate below 1/2
        P = random_kernel_operator(rng, n, m, positive=True)
        e = random_nonzero_element(P.domain, rng)
        if not P.apply(e).is_zero():
            cert = disjointness_certificate(P, P, e, Q(1, 10))
            report.add(Record.holds(f"disjointness.self-has-none#{k}", "disjointness-certificate",
                                    cert is None, inputs=e, witness={"e": e, "certificate": cert and cert.fragments}))
        # exact-limit certificates characterize meet = 0
        Q1 = random_kernel_operator(rng, n, m, positive=True)
        Q2 = random_kernel_operator(rng, n, m, positive=True)
        e = random_element(Q1.domain, rng)
        has = disjointness_certificate(Q1, Q2, e, 0) is not None
        report.add(Record.compare(f"disjointness.limit-iff-meet#{k}", "disjointness-certificate",
                                  has, op_meet_at(Q1, Q2, e).is_zero(), inputs=e, witness={"e": e}))
    return report


# -- one-dimensional bands ------------------------------------------------------

def _worked_onedim_example() -> list:
    a = PiecewiseLinearFn.abs()
    z = PiecewiseLinearFn.zero()
    dom = Domain("finite", 2)
    phi = UrysonOperator(dom, 1, ((a, a),))
    T = UrysonOperator(dom, 2, ((a, z), (z, a)))
    u, e = Vec.of(1, 0), Vec.of(1, 1)
    S = one_dimensional(phi, u)
    return [
        Record.compare("onedim.worked-example.pi", "one-dimensional-band",
                       pi_onedim(T, phi, u, e), Vec.of(1, 0), inputs=e),
        Record.compare("onedim.worked-example.sigma", "one-dimensional-band",
                       sigma_at(T, S, e), Vec.of(0, 1), inputs=e),
        Record.compare("onedim.worked-example.generic", "one-dimensional-band",
                       pi_at(T, S, e), Vec.of(1, 0), inputs=e),
    ]


def suite_onedim(rng, trials, elements, max_dim, resolution, corrupt, scenario=None) -> Report:
    report = Report()
    for rec in _worked_onedim_example():
        report.add(rec)
    for k in range(trials):
        n = rng.randint(2 if corrupt else 1, max_dim)
        m = rng.randint(1, max_dim)
        T = _maybe_corrupt(random_kernel_operator(rng, n, m, positive=True), corrupt)
        phi = random_kernel_operator(rng, n, 1, positive=True)
        phi2 = random_kernel_operator(rng, n, 1, positive=True)
        u = random_positive_vector(rng, m, set(rng.sample(range(m), rng.randint(1, m))))
        u2 = random_positive_vector(rng, m, set(rng.sample(range(m), rng.randint(1, m))))
        S = one_dimensional(phi, u)
        for j in range(elements):
            e = random_element(T.domain, rng)
            report.add(Record.compare(f"onedim.reduced-vs-generic#{k}.{j}", "one-dimensional-band",
                                      pi_onedim(T, phi, u, e), pi_at(T, S, e), inputs=e, witness={"e": e}))
            report.add(Record.compare(
                f"onedim.band-of-two#{k}.{j}", "one-dimensional-band",
                pi_onedim_band(T, [phi, phi2], [u, u2], e),
                pi_increasing(T, [S, one_dimensional(phi2, u2)], e), inputs=e, witness={"e": e},
            ))
        if n >= 2:
            report.add(_additivity_record(f"onedim.orthogonal-additivity#{k}", T,
                                          _nonzero_both_first(T.domain, rng)))
    return report


# -- lateral decomposition -------------------------------------------------------

def _worked_lateral_example() -> Record:
    a = PiecewiseLinearFn.abs()
    T = UrysonOperator(Domain("ecseq", 1), 1, ((a,),), (a,))
    e = EcSeq((5,), 3)
    d = continuous_part_at(T, e)
    return Record.compare("lateral.worked-example", "lateral-decomposition",
                          (d.continuous_part, d.singular_part), (Vec.of(5), Vec.of(3)), inputs=e)


def _decomposition_record(check, T, e, expected, resolution) -> Record:
    try:
        d = continuous_part_at(T, e, resolution)
    except AssertionError as exc:
        return Record.holds(check, "lateral-decomposition", False, inputs=e,
                            witness={"e": e, "error": str(exc)})
    return Record.compare(check, "lateral-decomposition", (d.continuous_part, d.singular_part),
                          expected, inputs=e, witness={"e": e})


def suite_lateral(rng, trials, elements, max_dim, resolution, corrupt, scenario=None) -> Report:
    report = Report()
    report.add(_worked_lateral_example())
    for k in range(trials):
        # finite lattices: everything is laterally continuous
        n = rng.randint(2 if corrupt else 1, max_dim)
        m = rng.randint(1, max_dim)
        T = _maybe_corrupt(random_kernel_operator(rng, n, m, positive=True), corrupt)
        for j in range(elements):
            e = random_element(T.domain, rng)
            report.add(_decomposition_record(f"lateral.finite-collapse#{k}.{j}", T, e,
                                             (T.apply(e), T.apply(e).zero_like()), resolution))
        # sequences: the kernel part is continuous and the tail part singular
        J = rng.randint(2 if corrupt else 1, min(max_dim, 4))
        Tk = random_sequence_operator(rng, J, m, tail=False)
        Tt = random_sequence_operator(rng, J, m, kernel=False)
        samples = [random_element(Tk.domain, rng, max_prefix=4) for _ in range(elements)]
        if corrupt:
            total = corrupted(Tk + Tt)
            for j, e in enumerate(samples):
                report.add(_decomposition_record(f"lateral.decomposition#{k}.{j}", total, e,
                                                 (Tk.apply(e), Tt.apply(e)), _res(e, resolution)))
            report.add(_additivity_record(f"lateral.orthogonal-additivity#{k}", total,
                                          _nonzero_both_first(Tk.domain, rng)))
        else:
            sub = check_kernel_tail_decomposition(Tk, Tt, samples, resolution)
            for rec in sub.records:
                rec.check = rec.check.replace("#", f"#{k}.")
            report.extend(sub)
        report.add(Record.holds(f"lateral.tail-singular-on-c00#{k}", "singular-orthogonality",
                                is_singular(Tt, c00(), resolution=4), inputs=k))
    # admissible sets and the projections they induce
    for D, T, samples in _shipped_admissible(rng, resolution, scenario):
        report.extend(check_admissible(D, 4 if not D.domain.is_finite else None))
        report.extend(check_fragment_property(T, D, samples, 4))
    return report


def _shipped_admissible(rng, resolution, scenario: Optional[Scenario]):
    """One positive operator and a small sample set per shipped admissible set."""
    out = []
    dom = Domain("finite", 3)
    T = random_kernel_operator(rng, 3, 2, positive=True)
    e = random_nonzero_element(dom, rng)
    samples = [random_element(dom, rng) for _ in range(6)] + [e]
    for D in (whole_space(dom), ideal_by_mask(dom, [0, 2]), fragments_of(e, dom), null_set(T)):
        out.append((D, T, samples))
    sdom = Domain("ecseq", 2)
    Ts = random_sequence_operator(rng, 2, 2)
    es = random_nonzero_element(sdom, rng, max_prefix=3)
    ssamples = [random_element(sdom, rng, max_prefix=3) for _ in range(5)] + [es]
    for D in (c00(), fragments_of(es, sdom), null_set(Ts), *catalog(sdom)[:1]):
        out.append((D, Ts, ssamples))
    if scenario is not None:
        positive = [op for _, op in sorted(scenario.operators.items()) if op.is_positive()]
        for name in sorted(scenario.admissible_sets):
            D = scenario.admissible_sets[name]
            if positive:
                elems = [x for _, x in sorted(scenario.elements.items()) if _fits(positive[0], x)]
                if elems:
                    out.append((D, positive[0], elems))
    return out


SUITE_FUNCTIONS = {
    "th1": suite_th1,
    "disjointness": suite_disjointness,
    "band": suite_band,
    "onedim": suite_onedim,
    "lateral": suite_lateral,
}


def run_suite(scenario: Optional[Scenario], suite: str, seed: int, *, corrupt: bool = False,
              trials: Optional[int] = None, elements: Optional[int] = None,
              max_dim: Optional[int] = None, resolution: Optional[int] = None) -> Report:
    """Run one suite (or ``all``) and return its report with the seed echoed."""
    if suite != "all" and suite not in SUITE_FUNCTIONS:
        raise UnknownSuiteError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    params = dict(SUITE_DEFAULTS) if scenario is None else dict(scenario.suites)
    trials = params["trials"] if trials is None else trials
    max_dim = params["max_dim"] if max_dim is None else max_dim
    resolution = params["resolution"] if resolution is None else resolution
    elements = DEFAULT_ELEMENTS if elements is None else elements
    if max_dim < 2:
        raise ValueError("max_dim must be at least 2")
    report = Report(seed=seed)
    for name in (SUITES if suite == "all" else (suite,)):
        rng = random.Random(f"{name}:{seed}")
        report.extend(SUITE_FUNCTIONS[name](rng, trials, elements, max_dim, resolution, corrupt, scenario))
    return report
