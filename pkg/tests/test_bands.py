import random
from fractions import Fraction

import pytest

from conftest import ABS, ZERO_FN, V, finite_op
from uryson.bands import (
    GRID,
    IncreasingSet,
    band_project,
    check_observation,
    disjointness_certificate,
    pi_at,
    pi_at_all_masks,
    pi_increasing,
    pi_onedim,
    pi_onedim_band,
    sigma_at,
    sigma_at_all_masks,
    sigma_increasing,
    stabilization_threshold,
)
from uryson.calculus import op_meet_at
from uryson.generators import random_kernel_operator, strictly_positive_functional
from uryson.operators import NotPositiveError, UrysonOperator, one_dimensional, random_element

PHI = finite_op([[ABS, ABS]])
S_FIRST = one_dimensional(PHI, V(1, 0))
E11 = V(1, 1)


def test_sigma_and_pi_worked_example(identity_on_cone):
    T = identity_on_cone
    assert sigma_at(T, S_FIRST, E11) == V(0, 1)
    assert pi_at(T, S_FIRST, E11) == V(1, 0)
    value = band_project(T, S_FIRST, E11)
    assert (value.pi_part, value.sigma_part) == (V(1, 0), V(0, 1))


def test_projection_onto_own_band(identity_on_cone):
    T = identity_on_cone
    e = V(2, 3)
    assert sigma_at(T, T, e) == V(0, 0)
    assert pi_at(T, T, e) == T.apply(e)


def test_projection_onto_zero_band(identity_on_cone):
    T = identity_on_cone
    zero = UrysonOperator.zero(T.domain, 2)
    e = V(2, -3)
    assert sigma_at(T, zero, e) == T.apply(e)
    assert pi_at(T, zero, e) == V(0, 0)
    assert check_observation(T, zero, e)


def test_observation_identities(identity_on_cone):
    assert check_observation(identity_on_cone, S_FIRST, E11)


def test_positivity_is_required():
    signed = finite_op([[ABS, ZERO_FN], [ZERO_FN, PHI.kernel[0][0].scale(-1)]])
    with pytest.raises(NotPositiveError):
        sigma_at(signed, S_FIRST, E11)


def test_singleton_masks_agree_with_all_masks():
    rng = random.Random(21)
    for _ in range(40):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        T = random_kernel_operator(rng, n, m, positive=True)
        S = random_kernel_operator(rng, n, m, positive=True)
        e = random_element(T.domain, rng)
        assert sigma_at(T, S, e) == sigma_at_all_masks(T, S, e)
        assert pi_at(T, S, e) == pi_at_all_masks(T, S, e)
        assert pi_at(T, S, e) + sigma_at(T, S, e) == T.apply(e)


def test_grid_mode_stabilizes_below_threshold():
    rng = random.Random(5)
    for _ in range(20):
        T = random_kernel_operator(rng, 3, 2, positive=True)
        S = random_kernel_operator(rng, 3, 2, positive=True)
        e = random_element(T.domain, rng)
        exact = band_project(T, S, e)
        thr = stabilization_threshold(S, e)
        below = Fraction(1, 2 ** 20) if thr is None else min(thr / 2, Fraction(1, 2 ** 20))
        grid = band_project(T, S, e, GRID, eps=below)
        assert (grid.pi_part, grid.sigma_part) == (exact.pi_part, exact.sigma_part)
        assert sigma_at(T, S, e, GRID) == exact.sigma_part
        # coarse grids keep pi + sigma = Te
        coarse = band_project(T, S, e, GRID, eps=1)
        assert coarse.pi_part + coarse.sigma_part == T.apply(e)


def test_grid_rejects_nonpositive_eps(identity_on_cone):
    with pytest.raises(ValueError):
        sigma_at(identity_on_cone, S_FIRST, E11, GRID, eps=0)
    with pytest.raises(ValueError):
        pi_at(identity_on_cone, S_FIRST, E11, mode="fuzzy")


def test_increasing_set_examples():
    rng = random.Random(9)
    T = random_kernel_operator(rng, 2, 2, positive=True)
    S = random_kernel_operator(rng, 2, 2, positive=True)
    e = V(1, -2)
    assert sigma_increasing(T, IncreasingSet([S]), e) == sigma_at(T, S, e)
    assert sigma_increasing(T, IncreasingSet([S, S.scale(2)]), e) == sigma_at(T, S, e)
    A = one_dimensional(strictly_positive_functional(rng, 2), V(1, 0))
    B = one_dimensional(strictly_positive_functional(rng, 2), V(0, 1))
    family = IncreasingSet([A, B])
    assert len(family) == 3
    assert family.is_directed()
    assert family.check_joins([e, V(3, 1)])
    both = sigma_increasing(T, family, e)
    assert both <= sigma_at(T, A, e) and both <= sigma_at(T, B, e)


def test_increasing_set_keeps_existing_top():
    S = finite_op([[ABS]])
    family = IncreasingSet([S, S.scale(3)])
    assert len(family) == 2
    assert family.top == S.scale(3)


def test_certificate_for_orthogonal_one_dimensional_operators():
    rng = random.Random(2)
    T = one_dimensional(strictly_positive_functional(rng, 2), V(1, 0))
    S = one_dimensional(strictly_positive_functional(rng, 2), V(0, 1))
    e = V(3, -1)
    cert = disjointness_certificate(T, S, e, Fraction(1, 10))
    assert [sorted(b.mask) for b in cert.partition] == [[0], [1]]
    assert cert.fragments == (V(0, 0), e)
    assert cert.verify(T, S, e)
    for eps in (1, Fraction(1, 2), 0):
        assert disjointness_certificate(T, S, e, eps).verify(T, S, e)


def test_no_certificate_for_operator_against_itself(identity_on_cone):
    T = identity_on_cone
    assert disjointness_certificate(T, T, V(1, 2), Fraction(1, 10)) is None


def test_zero_operator_has_trivial_certificate(identity_on_cone):
    zero = UrysonOperator.zero(identity_on_cone.domain, 2)
    cert = disjointness_certificate(zero, identity_on_cone, V(1, 2), Fraction(1, 10))
    assert cert is not None and len(cert.partition) == 1


def test_exact_limit_certificate_characterizes_disjointness():
    rng = random.Random(17)
    seen = set()
    for _ in range(60):
        T = random_kernel_operator(rng, 2, 2, positive=True)
        S = random_kernel_operator(rng, 2, 2, positive=True)
        e = random_element(T.domain, rng)
        meet_zero = op_meet_at(T, S, e).is_zero()
        assert (disjointness_certificate(T, S, e, 0) is not None) == meet_zero
        seen.add(meet_zero)
    assert seen == {True, False}


def test_negative_epsilon_rejected(identity_on_cone):
    with pytest.raises(ValueError):
        disjointness_certificate(identity_on_cone, identity_on_cone, E11, -1)


def test_onedim_worked_example(identity_on_cone):
    assert pi_onedim(identity_on_cone, PHI, V(1, 0), E11) == V(1, 0)


def test_onedim_edge_cases(identity_on_cone):
    T = identity_on_cone
    # phi(e) = 0: with f = e feasible, nothing of Te stays in the band
    phi_first = finite_op([[ABS, ZERO_FN]])
    assert pi_onedim(T, phi_first, V(1, 1), V(0, 4)) == V(0, 0)
    assert pi_onedim(T, PHI, V(0, 0), E11) == V(0, 0)


def test_onedim_matches_generic_formula():
    rng = random.Random(30)
    for _ in range(30):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        T = random_kernel_operator(rng, n, m, positive=True)
        phi = random_kernel_operator(rng, n, 1, positive=True)
        u = V(*(rng.choice((0, 1, 2)) for _ in range(m)))
        e = random_element(T.domain, rng)
        assert pi_onedim(T, phi, u, e) == pi_at(T, one_dimensional(phi, u), e)


def test_onedim_band_examples(identity_on_cone):
    T = identity_on_cone
    rng = random.Random(3)
    e = V(2, -1)
    assert pi_onedim_band(T, [PHI], [V(1, 0)], e) == pi_onedim(T, PHI, V(1, 0), e)
    phis = [strictly_positive_functional(rng, 2), strictly_positive_functional(rng, 2)]
    assert pi_onedim_band(T, phis, [V(1, 0), V(0, 1)], e) == T.apply(e)
    assert pi_onedim_band(T, phis, [V(0, 0), V(0, 0)], e) == V(0, 0)
    assert pi_increasing(T, [one_dimensional(PHI, V(1, 0))], e) == pi_onedim(T, PHI, V(1, 0), e)
    with pytest.raises(ValueError):
        pi_onedim_band(T, [], [], e)
