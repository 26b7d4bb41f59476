"""Randomised checks of the algebraic laws the engine relies on."""
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sptpairs import bailey
from sptpairs.exactring import CyclotomicNumber, cyclo_from_root_power, cyclo_inverse
from sptpairs.series import (
    BivariateSeries,
    LaurentSeries,
    compare_to_depth,
    dissect,
    eval_z_at_root,
    reassemble,
    series_invert,
    series_mul,
)
from sptpairs.verify import parse_registry, verify_spec

PRIMES = st.sampled_from([3, 5, 7])
small_q = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def cyclos(draw, order=None):
    ell = order or draw(PRIMES)
    coords = draw(st.lists(small_q, min_size=ell - 1, max_size=ell - 1))
    return CyclotomicNumber(ell, coords)


@st.composite
def cyclo_triples(draw):
    ell = draw(PRIMES)
    return tuple(draw(cyclos(ell)) for _ in range(3))


int_coeffs = st.lists(st.integers(-9, 9), min_size=1, max_size=25)


def poly(cs, start=0, order=None):
    return LaurentSeries.from_coeffs(cs, start, order)


# ---------------------------------------------------------------------------
# cyclotomic field


@settings(max_examples=60, deadline=None)
@given(cyclo_triples())
def test_ring_axioms(t):
    a, b, c = t
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(cyclos())
def test_inverse_property(a):
    assume(not a.is_zero())
    assert a * cyclo_inverse(a) == 1


@given(PRIMES, st.integers(-50, 50))
def test_root_powers_close_up(ell, k):
    z = cyclo_from_root_power(ell, k)
    assert z ** ell == 1
    assert z * cyclo_from_root_power(ell, -k) == 1


# ---------------------------------------------------------------------------
# series


def naive_product(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@settings(max_examples=80, deadline=None)
@given(int_coeffs, int_coeffs, st.integers(-5, 5), st.integers(-5, 5))
def test_mul_truncation_is_sound(a, b, sa, sb):
    # polynomials with a known tail are exact below their propagated order
    fa, fb = poly(a, sa, sa + len(a)), poly(b, sb, sb + len(b))
    got = series_mul(fa, fb)
    prod = naive_product(a, b)
    exact = poly(prod, sa + sb, sa + sb + len(prod) + 40)
    for e in range(sa + sb, int(got.order)):
        assert got.coefficient(e) == exact.coefficient(e)
    assert got.order == min(fa.order + fb.min_exponent, fb.order + fa.min_exponent)


@settings(max_examples=60, deadline=None)
@given(int_coeffs, st.integers(-4, 4))
def test_double_inverse(cs, v):
    cs = [1] + cs
    f = poly(cs, v, v + 30)
    g = series_invert(series_invert(f))
    d = min(g.order, f.order)
    assert compare_to_depth(f, g, d)
    assert compare_to_depth(series_mul(f, series_invert(f)), LaurentSeries.constant(1, 30), 30 - 2 * abs(v) - 1)


@settings(max_examples=60, deadline=None)
@given(int_coeffs, st.integers(-6, 6), st.integers(1, 9))
def test_dissect_roundtrip(cs, start, ell):
    f = poly(cs, start, start + len(cs) + 3)
    assert reassemble(dissect(f, ell)) == f


@st.composite
def bivariates(draw, order=6):
    rows = [draw(st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=4)) for _ in range(order)]
    return BivariateSeries(rows, order)


@settings(max_examples=40, deadline=None)
@given(bivariates(), bivariates(), PRIMES, st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_root_evaluation_is_linear(f, g, ell, s):
    assert eval_z_at_root(f + g, ell) == eval_z_at_root(f, ell) + eval_z_at_root(g, ell)
    scalar = poly(s, 0, 6)
    lhs = eval_z_at_root(f.scale_by_series(scalar), ell)
    rhs = series_mul(eval_z_at_root(f, ell), scalar)
    assert compare_to_depth(lhs, rhs, 6)


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_m_symmetry(i):
    biv = bailey.pp_direct_bivariate(i, 40)
    assert biv.symmetric()


# ---------------------------------------------------------------------------
# functional equations, through the registry engine

FUNCTIONAL = {
    "S-reflect": "(lhs (S a b c)) (rhs (* -1 (q (- a)) (S (- a) (- (- b) (* 3 c)) c)))",
    "S-shift": "(lhs (S a b c)) (rhs (* (q (+ b (* 4 c))) (S (+ a c) (+ b (* 4 c)) c)))",
    "S-flip": "(lhs (S a b c)) (rhs (* -1 (q (+ (- a) (- b) c)) (S (- c a) (- c b) c)))",
    "T-reflect": "(lhs (T a b c)) (rhs (* -1 (q (- a)) (T (- a) (- (- b) c) c)))",
    "T-shift": "(lhs (T a b c)) (rhs (* (q (+ b (* 2 c))) (T (+ a c) (+ b (* 2 c)) c)))",
    "T-flip": "(lhs (T a b c)) (rhs (* -1 (q (+ (- a) (- b) c)) (T (- c a) (- c b) c)))",
    "Sstar-reflect": "(lhs (Sstar b c)) (rhs (* -1 (Sstar (- (- b) (* 3 c)) c)))",
    "Tstar-reflect": "(lhs (Tstar b c)) (rhs (* -1 (Tstar (- (- b) c) c)))",
    "jac-rearrange": "(lhs (jac c a)) (rhs (* -1 (q a) (jac c (+ a c))))",
    "jac-invert": "(lhs (jac c a)) (rhs (* -1 (q a) (jac c (- a))))",
}

triples = st.tuples(
    st.fractions(min_value=-8, max_value=8, max_denominator=3),
    st.integers(-10, 10),
    st.integers(1, 9),
)


@pytest.mark.parametrize("name", sorted(FUNCTIONAL))
@settings(max_examples=6, deadline=None)
@given(t=triples)
def test_functional_equation(name, t):
    a, b, c = t
    assume((a / c).denominator != 1)
    text = f"(identity x (depth 30) (instances ((a {a}) (b {b}) (c {c}))) {FUNCTIONAL[name]})"
    (spec,) = parse_registry(text)
    rep = verify_spec(spec)
    assert rep.outcome == "pass", (name, t, rep.witness, rep.message)
