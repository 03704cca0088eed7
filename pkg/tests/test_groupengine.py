from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_degree, product_permutes, subset_subgroups
from szlab import groupengine as ge
from szlab.groupengine import SubgroupSet


def small_corpus():
    return [
        ge.make_cyclic(1), ge.make_cyclic(7), ge.make_cyclic(12),
        ge.make_symmetric3(), ge.make_dihedral(8), ge.make_dihedral(14),
        ge.make_quaternion8(), ge.direct_product(ge.make_cyclic(2), ge.make_cyclic(2)),
        ge.direct_product(ge.make_cyclic(2), ge.make_symmetric3()),
        ge.make_semidirect_cyclic(5, 4, 2), ge.make_dihedral(16),
        ge.make_semidirect_cyclic(7, 3, 2),
    ]


def test_closure_examples():
    s3 = ge.make_symmetric3()
    assert ge.closure(s3, [0]).order == 1
    assert ge.closure(s3, range(6)).order == 6
    three_cycles = [g for g in s3.elements() if s3.element_order(g) == 3]
    assert ge.closure(s3, [three_cycles[0]]).order == 3


@pytest.mark.parametrize("t", small_corpus(), ids=lambda t: f"{t.name}{t.order}")
def test_all_subgroups_matches_subset_oracle(t):
    got = {frozenset(map(int, s.indices())) for s in ge.all_subgroups(t)}
    assert got == set(subset_subgroups(t.table.tolist()))
    for s in ge.all_subgroups(t):
        assert ge.is_subgroup(t, np.isin(np.arange(t.order), s.indices()))
        assert t.order % s.order == 0


def test_subgroup_counts():
    assert len(ge.all_subgroups(ge.make_cyclic(7))) == 2
    assert len(ge.all_subgroups(ge.make_symmetric3())) == 6
    assert len(ge.all_subgroups(ge.make_dihedral(14))) == 10
    assert len(ge.all_subgroups(ge.direct_product(ge.make_cyclic(2), ge.make_cyclic(2)))) == 5


def test_subgroup_classes():
    c12 = ge.make_cyclic(12)
    assert all(size == 1 for _, size in ge.subgroup_classes(c12, ge.all_subgroups(c12)))
    s3 = ge.make_symmetric3()
    classes = ge.subgroup_classes(s3, ge.all_subgroups(s3))
    assert sorted((r.order, size) for r, size in classes) == [(1, 1), (2, 3), (3, 1), (6, 1)]
    for t in small_corpus():
        for rep, size in ge.subgroup_classes(t, ge.all_subgroups(t)):
            assert t.order % size == 0


def test_permutes_examples():
    s3 = ge.make_symmetric3()
    subs = ge.all_subgroups(s3)
    one, G = subs[0], subs[-1]
    twos = [s for s in subs if s.order == 2]
    for K in subs:
        assert ge.permutes(s3, K, K)
        assert ge.permutes(s3, one, K)
        assert ge.permutes(s3, G, K)
    assert not ge.permutes(s3, twos[0], twos[1])
    assert ge.per_count(s3, twos[0], subs) == 4
    assert ge.per_count(s3, G, subs) == 6


@pytest.mark.parametrize("t", small_corpus()[3:9], ids=lambda t: f"{t.name}{t.order}")
def test_permutes_symmetric_and_join_characterisation(t):
    subs = ge.all_subgroups(t)
    table = t.table.tolist()
    for H in subs:
        for K in subs:
            p = ge.permutes(t, H, K)
            assert p == ge.permutes(t, K, H)
            assert p == product_permutes(table, set(map(int, H.indices())), set(map(int, K.indices())))
            join = ge.closure(t, np.concatenate([H.indices(), K.indices()])).order
            assert p == (join == H.order * K.order // H.intersect(K).order)


def test_normal_subgroups_permute_with_everything():
    t = ge.make_dihedral(16)
    subs = ge.all_subgroups(t)
    for H in subs:
        normal = all(SubgroupSet.from_indices(t.conjugate(H.indices(), g)) == H for g in t.elements())
        if normal:
            assert ge.per_count(t, H, subs) == len(subs)


def test_degrees():
    assert ge.permutability_degree(ge.make_cyclic(12)).degree == 1
    assert ge.permutability_degree(ge.direct_product(ge.make_cyclic(2), ge.make_cyclic(6))).degree == 1
    assert ge.permutability_degree(ge.make_quaternion8()).degree == 1
    rep = ge.permutability_degree(ge.make_symmetric3())
    assert rep.degree == Fraction(5, 6)
    assert rep.pair_count == 30


@pytest.mark.parametrize("t", small_corpus()[3:10], ids=lambda t: f"{t.name}{t.order}")
def test_degree_matches_brute_force(t):
    assert ge.permutability_degree(t).degree == brute_degree(t.table.tolist())


def test_dihedral_trend():
    degrees = [ge.permutability_degree(ge.family("dihedral", n)).degree for n in range(4, 8)]
    assert all(a > b for a, b in zip(degrees, degrees[1:]))


def test_cq8_family():
    assert ge.permutability_degree(ge.family("cq8", 4)).degree == 1  # C2 x Q8 is Hamiltonian
    assert ge.permutability_degree(ge.family("cq8", 7)).degree > Fraction(9, 10)


def test_modular_families_build():
    t = ge.family("modular-s3", 3)  # C5 x S3
    assert t.order == 30
    t = ge.family("modular-d", 3)  # r_3 = 30, p_3 = 5: C3 x D10
    assert t.order == 30
    with pytest.raises(ValueError):
        ge.family("nope", 3)


def test_constructions():
    d14 = ge.make_dihedral(14)
    assert d14.order == 14
    f52 = ge.make_semidirect_cyclic(13, 4, 5)
    assert f52.order == 52
    assert not f52.is_abelian()
    with pytest.raises(ValueError):
        ge.make_semidirect_cyclic(13, 4, 3)  # 3 has order 3 mod 13, not 4


def test_bad_tables_rejected():
    with pytest.raises(ValueError):
        ge.GroupTable(np.array([[0, 1], [1, 1]]))
    with pytest.raises(ValueError):
        ge.GroupTable(np.zeros((2, 3), dtype=int))


def test_cayley_roundtrip(tmp_path):
    t = ge.make_dihedral(8)
    path = tmp_path / "d8.txt"
    ge.write_cayley(t, path)
    back = ge.read_cayley(path)
    assert np.array_equal(back.table, t.table)
    assert ge.permutability_degree(back).degree == ge.permutability_degree(t).degree


def _normal_complement(t, a_order):
    subs = ge.all_subgroups(t)
    A = next(s for s in subs if s.order == a_order)
    B = next(s for s in subs if s.order == t.order // a_order and s.intersect(A).order == 1)
    return subs, A, B


def test_schur_zassenhaus_s3():
    s3 = ge.make_symmetric3()
    subs, A, B = _normal_complement(s3, 3)
    G = subs[-1]
    assert ge.schur_zassenhaus_decompose(s3, A, B, G) == (A, 0, B)
    for H in subs:
        if H.order == 2:
            HA, g, HB = ge.schur_zassenhaus_decompose(s3, A, B, H)
            assert HA.order == 1 and HB == H
            assert SubgroupSet.from_indices(s3.conjugate(B.indices(), g)) == H


def test_schur_zassenhaus_d14():
    t = ge.make_dihedral(14)
    subs, A, B = _normal_complement(t, 7)
    for H in subs:
        HA, g, HB = ge.schur_zassenhaus_decompose(t, A, B, H)
        assert HA.order * HB.order == H.order
        assert g in A


def test_coprime_bounds():
    d14 = ge.make_dihedral(14)
    assert ge.coprime_count_bound(ge.make_cyclic(7), ge.make_cyclic(2)) == 28
    assert len(ge.all_subgroups(d14)) <= 28
    f52 = ge.make_semidirect_cyclic(13, 4, 5)
    assert ge.coprime_count_bound(ge.make_cyclic(13), ge.make_cyclic(4)) == 78
    assert len(ge.all_subgroups(f52)) <= 78
    f20 = ge.make_semidirect_cyclic(5, 4, 2)
    assert len(ge.all_subgroups(f20)) == 14
    assert ge.coprime_count_bound(ge.make_cyclic(5), ge.make_cyclic(4)) == 30
    assert ge.coprime_count_bound(ge.make_cyclic(9), ge.make_cyclic(1)) == 9 * 3


def test_induced_table():
    t = ge.make_dihedral(16)
    rot = ge.closure(t, [1])
    sub, glob = ge.induced_table(t, rot.indices())
    assert sub.order == 8 and sub.is_abelian()
    assert np.array_equal(glob[sub.table], t.table[np.ix_(glob, glob)])
    with pytest.raises(ValueError):
        ge.induced_table(t, np.array([0, 1]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40))
def test_mask_roundtrip(a, b):
    t = ge.make_cyclic(a * b)
    s = ge.closure(t, [a % (a * b)])
    assert SubgroupSet.from_indices(s.indices()) == s
    assert SubgroupSet.from_bool(np.isin(np.arange(t.order), s.indices())) == s
    assert s.order == b if a < a * b else s.order == 1
