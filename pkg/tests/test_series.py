from fractions import Fraction

import pytest

from sptpairs.combinatorics import partition_count
from sptpairs.exactring import RATIONAL, cyclotomic, zeta
from sptpairs.qfunctions import euler_pentagonal
from sptpairs.series import (
    BivariateSeries,
    FractionalExponents,
    InsufficientTruncation,
    LaurentSeries,
    NonUnitLeadingCoefficient,
    RingMismatch,
    compare_to_depth,
    dissect,
    eval_z_at_root,
    reassemble,
    series_invert,
    series_mul,
)


def poly(*cs, order=None):
    return LaurentSeries.from_coeffs(list(cs), 0, order)


def partitions_series(order):
    return LaurentSeries.from_coeffs([partition_count(n) for n in range(order)], 0, order)


class TestMul:
    def test_binomials(self):
        out = series_mul(poly(1, -1, order=20), poly(1, 0, -1, order=20))
        assert out.coefficient_list(6) == [1, -1, -1, 1, 0, 0]

    def test_one_is_identity(self):
        a = poly(3, 0, Fraction(1, 2), -7, order=12)
        assert series_mul(a, LaurentSeries.constant(1, 12)) == a

    def test_partitions_times_euler_product(self):
        out = series_mul(partitions_series(10), euler_pentagonal(10))
        assert out.order == 10
        assert out.coefficient_list() == [1] + [0] * 9

    def test_truncation_rule(self):
        a = LaurentSeries.from_dict({2: 1, 3: 1}, 10)
        b = LaurentSeries.from_dict({-1: 1, 0: 5}, 4)
        # min(O_a + m_b, O_b + m_a) = min(10 - 1, 4 + 2)
        assert series_mul(a, b).order == 6

    def test_rational_exponents_merge(self):
        a = LaurentSeries.from_dict({Fraction(1, 2): 1}, 5)
        b = LaurentSeries.from_dict({Fraction(1, 3): 1}, 5)
        out = series_mul(a, b)
        assert out.coefficient(Fraction(5, 6)) == 1
        assert out.den == 6

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatch):
            series_mul(poly(1).to_ring(cyclotomic(3)), poly(1).to_ring(cyclotomic(5)))


class TestInvert:
    def test_geometric(self):
        inv = series_invert(poly(1, -1, order=10))
        assert inv.coefficient_list() == [1] * 10

    def test_monomial_factor(self):
        u = LaurentSeries.from_dict({2: 1, 3: 2, 4: -1}, 12)
        inv = series_invert(u)
        assert inv.min_exponent == -2
        unit = series_invert(LaurentSeries.from_dict({0: 1, 1: 2, 2: -1}, 10))
        assert inv == unit.shift(-2)

    def test_euler_product_gives_partitions(self):
        p = series_invert(euler_pentagonal(21))
        assert p.coefficient(3) == 3
        assert p.coefficient_list() == [partition_count(n) for n in range(21)]

    def test_non_unit_leading(self):
        with pytest.raises(NonUnitLeadingCoefficient):
            series_invert(poly(2, 1, order=5))
        with pytest.raises(NonUnitLeadingCoefficient):
            series_invert(LaurentSeries.zero(5))

    def test_rational_leading_is_a_unit_over_q(self):
        a = poly(2, 1, order=6).to_ring(RATIONAL)
        assert series_mul(a, series_invert(a)).coefficient_list() == [1, 0, 0, 0, 0, 0]


class TestDissect:
    def test_example(self):
        parts = dissect(poly(1, 2, 3, 4, 5), 3)
        assert parts[0].coefficient_list() == [1, 4]
        assert parts[1].coefficient_list() == [2, 5]
        assert parts[2].coefficient_list() == [3]

    def test_identity_case(self):
        f = poly(1, 2, 3, order=7)
        assert dissect(f, 1) == [f]

    def test_roundtrip(self):
        f = LaurentSeries.from_dict({-3: 1, 0: 2, 1: -1, 7: 4, 11: 9}, 23)
        assert reassemble(dissect(f, 5)) == f

    def test_fractional_refused(self):
        with pytest.raises(FractionalExponents):
            dissect(LaurentSeries.from_dict({Fraction(1, 2): 1}, 4), 2)


class TestBivariate:
    def test_root_of_unity_evaluation(self):
        f = BivariateSeries([{}, {}, {1: 1, -1: 1}], 3)
        assert eval_z_at_root(f, 3).coefficient(2) == -1

    def test_multiples_of_order_become_scalars(self):
        f = BivariateSeries([{0: 2}, {3: 1, -3: 4}], 2)
        g = eval_z_at_root(f, 3)
        assert g.coefficient(0) == 2 and g.coefficient(1) == 5

    def test_evaluation_is_additive(self):
        f = BivariateSeries([{1: 1}, {2: 3, -1: 1}, {}], 3)
        g = BivariateSeries([{-1: 1}, {0: 1}, {4: -2}], 3)
        assert eval_z_at_root(f + g, 5) == eval_z_at_root(f, 5) + eval_z_at_root(g, 5)

    def test_scaling_commutes_with_evaluation(self):
        f = BivariateSeries([{}, {1: 1, -2: 2}, {3: 1}, {0: 1}], 4)
        s = poly(1, -1, 2, order=4)
        lhs = eval_z_at_root(f.scale_by_series(s), 7)
        rhs = series_mul(eval_z_at_root(f, 7), s.to_ring(cyclotomic(7)))
        assert compare_to_depth(lhs, rhs, 4)

    def test_m_extraction(self):
        f = BivariateSeries([{}, {-1: 1, 1: 1}], 2)
        assert f.M(1, 1) == 1 and f.M(0, 1) == 0
        assert f.symmetric()
        with pytest.raises(InsufficientTruncation):
            f.coefficient(5)


class TestCompare:
    def test_equal(self):
        a = poly(1, 2, 3, order=10)
        out = compare_to_depth(a, a, 10)
        assert out.passed and out.witness() is None

    def test_first_mismatch(self):
        a = poly(1, 2, 3, 4, 5, 6, 7, order=10)
        b = poly(1, 2, 3, 4, 5, 0, 7, order=10)
        out = compare_to_depth(a, b, 10)
        assert not out.passed
        assert out.exponent == 5 and (out.lhs, out.rhs) == (6, 0)
        assert out.witness() == {"exponent": "5", "lhs": "6", "rhs": "0"}

    def test_depth_beyond_truncation(self):
        with pytest.raises(InsufficientTruncation):
            compare_to_depth(poly(1, order=5), poly(1, order=8), 6)

    def test_cyclotomic_against_rational(self):
        z = zeta(3)
        a = LaurentSeries.from_coeffs([z * 0 + 1, z + z ** 2], 0, 4)
        b = poly(1, -1, order=4)
        assert compare_to_depth(a, b.to_ring(cyclotomic(3)), 4)


def test_series_equality_ignores_leading_zeros():
    a = LaurentSeries.from_coeffs([0, 0, 1], 0, 5)
    b = LaurentSeries.from_dict({2: 1}, 5)
    assert a == b and a.valuation == 2


def test_coefficient_beyond_order_is_unknown():
    with pytest.raises(InsufficientTruncation):
        poly(1, 2, order=3).coefficient(3)


def test_substitute_and_shift():
    f = poly(1, 1, order=4).substitute(3).shift(1)
    assert f.to_dict() == {1: 1, 4: 1}
    assert f.order == 13
