import pytest

from sptpairs import bailey
from sptpairs.combinatorics import (
    CapExceeded,
    CombinatoricsError,
    NotInFamily,
    Partition,
    PartitionPair,
    crank_histogram,
    in_family,
    pair_enumerate,
    pair_weight,
    paircrank,
    partition_count,
    partitions_of,
    residue_classes,
    spt_total,
    unweighted_count,
    weighted_count,
)
from sptpairs.qfunctions import ProductForm, euler_pentagonal
from sptpairs.series import LaurentSeries, series_invert


def P(*parts):
    return Partition(parts)


def pair(a, b=()):
    return PartitionPair(Partition(a), Partition(b))


def test_partitions_of_three():
    got = {p.parts for p in partitions_of(3)}
    assert got == {(3,), (2, 1), (1, 1, 1)}


def test_partitions_of_zero():
    assert partitions_of(0) == [Partition()]


def test_partition_counts_match_series():
    p = series_invert(euler_pentagonal(41))
    assert [partition_count(n) for n in range(41)] == p.coefficient_list()


def test_partition_accessors():
    p = P(1, 3, 1, 2)
    assert p.parts == (3, 2, 1, 1)
    assert (p.largest, p.smallest, p.count, p.spt, p.size) == (3, 1, 4, 2, 7)
    with pytest.raises(CombinatoricsError):
        P(2, 0)


def test_spt_small():
    assert spt_total(3) == 5
    assert spt_total(1) == 1


def test_spt_matches_generating_function():
    depth = 31
    total = LaurentSeries.zero(depth)
    for n in range(1, depth):
        # q^n / ((q^n; q)_inf (1 - q^n))
        pf = ProductForm.q_power(n) / (ProductForm.poch_inf(n, 1) * ProductForm.poch_finite(n, 1, 1))
        total = total + pf.expand(depth)
    assert [spt_total(n) for n in range(1, depth)] == total.coefficient_list()[1:]


def test_pairs_of_two():
    got = pair_enumerate(1, 2)
    assert got == sorted([pair((2,)), pair((1, 1)), pair((1,), (1,))])


def test_family_two_at_one_is_empty():
    assert pair_enumerate(2, 1) == []


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_three_counts_agree_with_series(i):
    pp = bailey.pp_series(i, 21)
    for n in range(1, 21):
        assert len(pair_enumerate(i, n)) == unweighted_count(i, n) == weighted_count(i, n) == pp.coefficient(n)


def test_weighted_count_sums_pair_weights():
    strict = pair_enumerate(3, 12, strict=True)
    assert sum(pair_weight(3, p) for p in strict) == weighted_count(3, 12)


@pytest.mark.parametrize("p, m", [(pair((1, 1)), 1), (pair((1,), (1,)), -1), (pair((2,)), 0)])
def test_paircrank_examples(p, m):
    assert paircrank(1, p) == m


def test_paircrank_outside_family():
    with pytest.raises(NotInFamily):
        paircrank(2, pair((1,), (1,)))


def test_membership_rules():
    assert in_family(1, pair((3, 2), (4, 2)))
    assert not in_family(1, pair((3, 2), (5,)))
    assert not in_family(1, pair((3, 2), (1,)))
    assert in_family(3, pair((2, 2, 2)))
    assert not in_family(3, pair((2, 2)))
    assert in_family(4, pair((2, 2)))
    with pytest.raises(CombinatoricsError):
        in_family(5, pair((1,)))


def test_histograms_small():
    assert crank_histogram(1, 2) == {-1: 1, 0: 1, 1: 1}
    assert crank_histogram(2, 1) == {}


def test_histogram_matches_pairwise_cranks():
    for i in (1, 2, 3, 4):
        direct = {}
        for p in pair_enumerate(i, 11):
            m = paircrank(i, p)
            direct[m] = direct.get(m, 0) + 1
        assert crank_histogram(i, 11) == dict(sorted(direct.items()))


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_histogram_matches_bivariate_series(i):
    biv = bailey.pp_direct_bivariate(i, 21)
    for n in range(1, 21):
        assert crank_histogram(i, n) == dict(sorted(biv.coefficient(n).items()))


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_histogram_symmetry(i):
    for n in range(1, 18):
        h = crank_histogram(i, n)
        assert all(h.get(-m) == c for m, c in h.items())


@pytest.mark.parametrize("i, ell, r", [(1, 3, 0), (2, 3, 1), (2, 5, 1), (3, 5, 4), (3, 7, 1), (4, 5, 4)])
def test_equal_residue_classes(i, ell, r):
    for n in range(r or ell, 26, ell):
        classes = residue_classes(crank_histogram(i, n), ell)
        assert len(set(classes)) == 1, (n, classes)


@pytest.mark.parametrize("i", [2, 3, 4])
def test_subfamilies_of_family_one(i):
    for n in range(1, 13):
        assert set(pair_enumerate(i, n)) <= set(pair_enumerate(1, n))


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        crank_histogram(1, 61)
    with pytest.raises(CapExceeded):
        pair_enumerate(1, 10, cap=5)
    assert crank_histogram(1, 2, cap=2)
