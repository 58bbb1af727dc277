from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import S, V
from uryson.lattice import (
    EcSeq,
    FragmentChain,
    ModelMismatchError,
    OrderProjection,
    PartitionOfUnity,
    Vec,
    all_projections,
    disjoint,
    disjoint_partitions,
    element_band_projection,
    fragment_split,
    fragments,
    is_fragment,
    partitions_of_unity,
    set_partitions,
    vinf,
    vsup,
)
from uryson.rational import fmt_q, to_q


def test_rationals_parse_and_print():
    assert to_q(" -2/4 ") == Fraction(-1, 2)
    assert to_q(0.5) == Fraction(1, 2)
    assert fmt_q(Fraction(-3, 6)) == "-1/2"
    assert fmt_q(Fraction(4)) == "4/1"
    with pytest.raises(TypeError):
        to_q(True)


def test_disjoint_examples():
    assert disjoint(V(1, 0), V(0, 2))
    assert not disjoint(V(1, 1), V(0, 2))
    assert not disjoint(S([], 1), S([5], 0))
    assert disjoint(S([0, 2], 0), S([3], 0))


def test_disjoint_rejects_mixed_models():
    with pytest.raises(ModelMismatchError):
        disjoint(V(1, 0), S([1]))
    with pytest.raises(ModelMismatchError):
        disjoint(V(1, 0), V(1, 0, 0))


def test_is_fragment_examples():
    assert is_fragment(V(1, 0), V(1, 2))
    assert not is_fragment(V(1, 1), V(1, 2))
    x = V(1, 2)
    assert is_fragment(x, x)
    assert is_fragment(x.zero_like(), x)
    assert is_fragment(S([3], 0), S([3], 2))
    assert not is_fragment(S([3], 1), S([3], 2))


def test_fragments_of_vectors():
    assert set(fragments(V(1, 2))) == {V(0, 0), V(1, 0), V(0, 2), V(1, 2)}
    assert fragments(V(1, 0)) == [V(1, 0), V(0, 0)]
    assert fragments(V(1, 2))[0] == V(1, 2)
    assert fragments(V(1, 2))[-1].is_zero()


def test_fragments_of_sequence_at_resolution_two():
    x = S([3], 2)
    frs = fragments(x, 2)
    assert len(frs) == 8
    assert len(set(frs)) == 8
    assert all(is_fragment(z, x) for z in frs)
    assert {z.coord(0) for z in frs} == {0, 3}
    assert {z.coord(1) for z in frs} == {0, 2}
    assert {z.tail for z in frs} == {0, 2}


def test_fragments_need_resolution_covering_prefix():
    with pytest.raises(ValueError):
        fragments(S([1, 2, 3]), 2)


def test_disjoint_partitions_examples():
    pairs = disjoint_partitions(V(1, 2))
    assert len(pairs) == 4
    assert (V(1, 0), V(0, 2)) in pairs
    assert disjoint_partitions(V(0, 0)) == [(V(0, 0), V(0, 0))]
    assert set(disjoint_partitions(V(5))) == {(V(0), V(5)), (V(5), V(0))}


def test_fragment_split_examples():
    assert fragment_split(V(1, 0, 3), V(1, 0, 0), V(0, 0, 3)) == (V(1, 0, 0), V(0, 0, 3))
    assert fragment_split(V(0, 0), V(1, 0), V(0, 2)) == (V(0, 0), V(0, 0))
    assert fragment_split(V(1, 0, 0), V(1, 2, 0), V(0, 0, 7)) == (V(1, 0, 0), V(0, 0, 0))


def test_fragment_split_rejects_bad_input():
    with pytest.raises(ValueError):
        fragment_split(V(1, 0), V(1, 0), V(1, 0))
    with pytest.raises(ValueError):
        fragment_split(V(2, 0), V(1, 0), V(0, 1))


vectors = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=5)


@given(vectors, st.lists(st.booleans(), min_size=5, max_size=5), st.data())
def test_fragment_split_postconditions(coords, mask, data):
    f = Vec(tuple(coords))
    x = Vec(tuple(c if k else 0 for c, k in zip(coords, mask)))
    y = f - x
    z = data.draw(st.sampled_from(fragments(f)))
    z1, z2 = fragment_split(z, x, y)
    assert z1 + z2 == z
    assert is_fragment(z1, x)
    assert is_fragment(z2, y)


@given(st.lists(st.integers(-3, 3), max_size=6), st.integers(-3, 3), st.integers(0, 4))
def test_ecseq_canonical_form(prefix, tail, pad):
    x = EcSeq(tuple(prefix) + (tail,) * pad, tail)
    assert EcSeq(x.prefix, x.tail) == x
    assert x == EcSeq(tuple(prefix), tail)
    assert not x.prefix or x.prefix[-1] != x.tail
    assert x.head(len(prefix) + pad + 2)[-1] == tail


@given(st.lists(st.integers(-3, 3), max_size=4), st.integers(-3, 3))
def test_sequence_fragments_are_fragments(prefix, tail):
    x = EcSeq(tuple(prefix), tail)
    for z in fragments(x, max(3, x.prefix_len)):
        assert is_fragment(z, x)
        assert disjoint(z, x - z)


def test_sequence_arithmetic_and_order():
    a, b = S([1, 2], 3), S([0, 0, 5], 1)
    assert a + b == S([1, 2, 8], 4)
    assert a - a == EcSeq.zero()
    assert S([1], 0) <= S([2], 1)
    assert not S([1], 2) <= S([5], 1)
    assert S([1, 2], 3).truncate(1) == S([1], 0)


def test_element_band_projection_examples():
    assert element_band_projection(V(2, 0)).mask == {0}
    assert element_band_projection(V(0, 0)).mask == frozenset()
    assert element_band_projection(V(0, -3, 1)).mask == {1, 2}


def test_order_projection_apply_and_complement():
    rho = OrderProjection({0, 2}, 3)
    assert rho(V(1, 2, 3)) == V(1, 0, 3)
    assert rho.complement()(V(1, 2, 3)) == V(0, 2, 0)
    assert len(all_projections(3)) == 8
    with pytest.raises(ValueError):
        OrderProjection({3}, 3)


def test_partitions_of_unity_examples():
    two = [[sorted(b.mask) for b in p] for p in partitions_of_unity(2, 2)]
    assert two == [[[0, 1]], [[0], [1]]]
    assert [[sorted(b.mask) for b in p] for p in partitions_of_unity(1)] == [[[0]]]
    assert len(list(partitions_of_unity(3, 3))) == 5
    assert len(list(partitions_of_unity(4))) == 15
    assert len(list(partitions_of_unity(4, 2))) == 8


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(list(range(k)))) for k in range(6)] == [1, 1, 2, 5, 15, 52]


def test_partition_of_unity_validation():
    with pytest.raises(ValueError):
        PartitionOfUnity((OrderProjection({0}, 2),))
    with pytest.raises(ValueError):
        PartitionOfUnity((OrderProjection({0, 1}, 2), OrderProjection({1}, 2)))


def test_fragment_chain_validation():
    e = V(1, 2)
    FragmentChain((V(0, 0), V(1, 0), e), e)
    with pytest.raises(ValueError):
        FragmentChain((V(1, 0), V(0, 2)), e)
    with pytest.raises(ValueError):
        FragmentChain((V(1, 1),), e)


def test_sup_inf_of_vectors():
    assert vsup([V(1, 5), V(3, 2)], 2) == V(3, 5)
    assert vinf([V(1, 5), V(3, 2)], 2) == V(1, 2)
    assert vsup([], 3) == V(0, 0, 0)
