"""The four Bailey pairs and the series PP_i(z, q) built from them.

Three independent routes to ``PP_i`` at a root of unity are provided:

* the closed single sum ``sum_n q^{e_i(n)} (q^{2n+1};q)_inf / (z q^n, q^n/z; q)_inf``
  expanded with z symbolic (:func:`pp_direct_bivariate`) and then evaluated;
* the Bailey-lemma output ``sum_n alpha_n q^n / ((1 - zeta q^n)(1 - q^n/zeta))``
  (:func:`alpha_bracket`) and its bilateral rewriting (:func:`bilateral_bracket`);
* the U/V decomposition of the bracket (:func:`uv_bracket`).

Each bracket is turned into ``PP_i(zeta, q)`` by dividing by ``(q;q)_inf`` and
subtracting the crank generating function over ``(1 - zeta)(1 - 1/zeta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Tuple

import numpy as np

from .exactring import INTEGER, CyclotomicNumber, cyclotomic, inverse, zeta
from .qfunctions import ProductForm, U_series, V_series, _zeros
from .series import BivariateSeries, LaurentSeries, VerificationOutcome, compare_to_depth


class UnsupportedCombination(ValueError):
    pass


# exponent of q in the numerator of the closed single sum for PP_i
SINGLE_SUM_EXPONENT: Dict[int, Callable[[int], int]] = {
    1: lambda n: n,
    2: lambda n: 2 * n,
    3: lambda n: n * n + n,
    4: lambda n: n * n,
}

# (A(n), B(n)) in sum q^A/((1-zq^{3n})(1-q^{3n}/z)) - sum q^B/((1-zq^{3n+1})(1-q^{3n+1}/z))
BILATERAL_EXPONENTS: Dict[int, Tuple[Callable[[int], int], Callable[[int], int]]] = {
    1: (lambda n: 6 * n * n + 2 * n, lambda n: 6 * n * n + 8 * n + 2),
    2: (lambda n: 6 * n * n + n, lambda n: 6 * n * n + 5 * n + 1),
    3: (lambda n: 3 * n * n + 2 * n, lambda n: 3 * n * n + 4 * n + 1),
    4: (lambda n: 3 * n * n + n, lambda n: 3 * n * n + 7 * n + 2),
}


@dataclass(frozen=True)
class BaileyPair:
    """Bailey pair relative to (1, q) with ``alpha_0 = beta_0 = 1``.

    ``beta_n = q^{beta_exponent(n)} / (q;q)_{2n}``; ``alpha_n`` is a sum of
    signed q-powers given by :meth:`alpha`.
    """

    index: int
    beta_exponent: Callable[[int], int]
    alpha_zero_mod3: Callable[[int], Tuple[int, int]]
    alpha_plus: Callable[[int], int]
    alpha_minus: Callable[[int], int]

    def alpha(self, m: int) -> Dict[int, int]:
        """``alpha_m`` as ``{exponent: coefficient}``."""
        if m == 0:
            return {0: 1}
        n, r = divmod(m, 3)
        if r == 0:
            e1, e2 = self.alpha_zero_mod3(n)
            out: Dict[int, int] = {}
            out[e1] = out.get(e1, 0) + 1
            out[e2] = out.get(e2, 0) + 1
            return out
        if r == 1:
            return {self.alpha_plus(n): -1}
        return {self.alpha_minus(n + 1): -1}

    def alpha_series(self, m: int, depth) -> LaurentSeries:
        return LaurentSeries.from_dict(self.alpha(m), depth, INTEGER)

    def beta_series(self, n: int, depth) -> LaurentSeries:
        pf = ProductForm.q_power(self.beta_exponent(n)) / ProductForm.poch_finite(1, 1, 2 * n)
        return pf.expand(depth)


BAILEY_PAIRS: Dict[int, BaileyPair] = {
    1: BaileyPair(
        1,
        lambda n: 0,
        lambda n: (6 * n * n - n, 6 * n * n + n),
        lambda n: 6 * n * n + 5 * n + 1,
        lambda n: 6 * n * n - 5 * n + 1,
    ),
    2: BaileyPair(
        2,
        lambda n: n,
        lambda n: (6 * n * n - 2 * n, 6 * n * n + 2 * n),
        lambda n: 6 * n * n + 2 * n,
        lambda n: 6 * n * n - 2 * n,
    ),
    3: BaileyPair(
        3,
        lambda n: n * n,
        lambda n: (3 * n * n - n, 3 * n * n + n),
        lambda n: 3 * n * n + n,
        lambda n: 3 * n * n - n,
    ),
    4: BaileyPair(
        4,
        lambda n: n * n - n,
        lambda n: (3 * n * n - 2 * n, 3 * n * n + 2 * n),
        lambda n: 3 * n * n + 4 * n + 1,
        lambda n: 3 * n * n - 4 * n + 1,
    ),
}


def _pair(i: int) -> BaileyPair:
    if i not in BAILEY_PAIRS:
        raise ValueError(f"no Bailey pair with index {i}")
    return BAILEY_PAIRS[i]


def bailey_relation_check(i: int, n_max: int, depth) -> VerificationOutcome:
    """Check ``beta_n = sum_k alpha_k / ((q;q)_{n-k} (q;q)_{n+k})`` for n <= n_max."""
    pair = _pair(i)
    last = None
    for n in range(n_max + 1):
        lhs = pair.beta_series(n, depth)
        total = LaurentSeries.zero(depth)
        for k in range(n + 1):
            denom = ProductForm.poch_finite(1, 1, n - k) * ProductForm.poch_finite(1, 1, n + k)
            total = total + denom.divide(pair.alpha_series(k, depth))
        last = compare_to_depth(lhs, total, depth)
        if not last.passed:
            return last
    return last


# ---------------------------------------------------------------------------
# z = 1 and symbolic-z single sums


def pp_series(i: int, depth: int) -> LaurentSeries:
    """``PP_i(1, q) = sum_n q^{e_i(n)} / ((q^n;q)_inf (q^n;q)_{n+1})``.

    Evaluated by the forward recursion ``A_m = R_m (A_{m-1} + q^{e(m)})`` with
    ``R_m = (1-q^{2m+1})(1-q^{2m+2}) / (1-q^m)^2``, so the m-th partial result
    already carries every factor with index <= m.
    """
    expo = SINGLE_SUM_EXPONENT[i]
    arr = _zeros(depth)
    for m in range(1, depth):
        e = expo(m)
        if e < depth:
            arr[e] += 1
        for k in (2 * m + 1, 2 * m + 2):
            if k < depth:
                arr[k:] = arr[k:] - arr[: depth - k]
        for _ in range(2):
            for s in range(m, depth, m):
                end = min(s + m, depth)
                arr[s:end] += arr[s - m : end - m]
    return LaurentSeries(INTEGER, 1, 0, depth, arr)


def pp_direct_bivariate(i: int, depth: int) -> BivariateSeries:
    """``PP_i(z, q)`` with Laurent-polynomial z-coefficients, below ``q^depth``.

    Same recursion as :func:`pp_series` on a dense (q, z) grid; dividing by
    ``1 - z q^m`` is the q-binomial expansion ``sum_k z^k q^{mk}``.
    """
    expo = SINGLE_SUM_EXPONENT[i]
    width = depth
    grid = np.zeros((depth, 2 * width + 1), dtype=object)
    for m in range(1, depth):
        e = expo(m)
        if e < depth:
            grid[e, width] += 1
        for k in (2 * m + 1, 2 * m + 2):
            if k < depth:
                grid[k:] = grid[k:] - grid[: depth - k]
        for s in range(m, depth, m):
            end = min(s + m, depth)
            grid[s:end, 1:] += grid[s - m : end - m, :-1]
        for s in range(m, depth, m):
            end = min(s + m, depth)
            grid[s:end, :-1] += grid[s - m : end - m, 1:]
    return BivariateSeries.from_dense(grid, width)


# ---------------------------------------------------------------------------
# roots of unity


SUPPORTED = ((1, 3), (2, 3), (2, 5), (3, 5), (4, 5), (3, 7))


def _root_pair_denominator(ell: int) -> CyclotomicNumber:
    z = zeta(ell)
    return (1 - z) * (1 - zeta(ell, -1))


def crank_product_form(ell: int) -> ProductForm:
    """``(q;q)_inf / (zeta q, q/zeta; q)_inf`` as a product form."""
    z, zi = zeta(ell), zeta(ell, -1)
    return ProductForm.qinf(1) / (ProductForm.poch_inf(1, 1, z) * ProductForm.poch_inf(1, 1, zi))


def crank_genfun_at_root(ell: int, depth) -> LaurentSeries:
    return crank_product_form(ell).expand(depth).to_ring(cyclotomic(ell))


def crank_dissection(ell: int, depth) -> List[LaurentSeries]:
    from .series import dissect

    return dissect(crank_genfun_at_root(ell, depth), ell)


@lru_cache(maxsize=None)
def _pair_weights(ell: int) -> Tuple[CyclotomicNumber, ...]:
    """Coefficients of ``x^k`` (k mod ell) in ``1/((1 - zeta x)(1 - x/zeta))``.

    Over one period ``sum_{k<ell} w_k x^k / (1 - x^ell)``.
    """
    z = zeta(ell)
    zi = zeta(ell, -1)
    den = z - zi
    return tuple((z ** (k + 1) - zi ** (k + 1)) / den for k in range(ell))


def _add_pair_term(arr: np.ndarray, e: int, d: int, ell: int, coef: int) -> None:
    """Add ``coef * q^e / ((1 - zeta q^d)(1 - q^d/zeta))`` into ``arr``.

    For d < 0 the term is first rewritten as ``q^{e-2d} / ((1 - zeta q^{-d})(1 - q^{-d}/zeta))``.
    """
    n = len(arr)
    if d == 0:
        if e < n:
            arr[e] += coef * inverse(_root_pair_denominator(ell))
        return
    if d < 0:
        e, d = e - 2 * d, -d
    if e < 0:
        raise ValueError("negative exponent in a root-of-unity bracket term")
    w = _pair_weights(ell)
    for r in range(ell):
        pos = e + r * d
        if pos >= n:
            break
        if w[r] != 0:
            arr[pos :: ell * d] += coef * w[r]


def _finish_root_series(arr: np.ndarray, depth: int, ell: int) -> LaurentSeries:
    ring = cyclotomic(ell)
    zero = CyclotomicNumber.scalar(ell, 0)
    arr = np.array([x if isinstance(x, CyclotomicNumber) else zero + x for x in arr], dtype=object)
    return LaurentSeries(ring, 1, 0, depth, arr)


def root_pair_sum(ell: int, a, b, c, s, t, depth) -> LaurentSeries:
    """``sum_n q^{a n^2 + b n + c} / ((1 - zeta q^{s n + t})(1 - q^{s n + t}/zeta))``, zeta = zeta_ell.

    ``a > 0`` and ``s != 0``; exponents are integers.
    """
    a, b, c, s, t = (int(x) for x in (a, b, c, s, t))
    if a <= 0 or s == 0:
        raise ValueError("need a positive quadratic coefficient and a nonzero step")
    depth = int(math.ceil(depth))
    terms = []
    # widen until both tails are past the depth
    lo, hi = 0, 0
    while True:
        grew = False
        for n in (lo, hi):
            e, d = a * n * n + b * n + c, s * n + t
            if e - 2 * min(d, 0) < depth:
                grew = True
        if not grew and hi - lo > 4:
            break
        lo, hi = lo - 1, hi + 1
    for n in range(lo, hi + 1):
        e, d = a * n * n + b * n + c, s * n + t
        if e - 2 * min(d, 0) < depth:
            terms.append((e, d))
    if not terms:
        return LaurentSeries.zero(depth, cyclotomic(ell))
    low = min(min(e - 2 * min(d, 0) for e, d in terms), 0)
    arr = _zeros(depth - low)
    for e, d in terms:
        _add_pair_term(arr, e - low, d, ell, 1)
    out = _finish_root_series(arr, depth - low, ell)
    return out.shift(low)


def alpha_bracket(i: int, ell: int, depth: int) -> LaurentSeries:
    """``sum_{n>=0} alpha^i_n q^n / ((1 - zeta q^n)(1 - q^n/zeta))``."""
    pair = _pair(i)
    arr = _zeros(depth)
    m, idle = 0, 0
    # alpha exponents are monotone only within a residue class of m mod 3
    while idle < 3:
        al = pair.alpha(m)
        idle = idle + 1 if min(al) + m >= depth and m > 3 else 0
        for e, c in al.items():
            if e + m < depth:
                _add_pair_term(arr, e + m, m, ell, c)
        m += 1
    return _finish_root_series(arr, depth, ell)


def bilateral_bracket(i: int, ell: int, depth: int) -> LaurentSeries:
    """The two bilateral sums of the Bailey-lemma output at z = zeta_ell."""
    fa, fb = BILATERAL_EXPONENTS[i]
    arr = _zeros(depth)
    n = 0
    while True:
        live = False
        for m in ((n, -n) if n else (0,)):
            a, da = fa(m), 3 * m
            b, db = fb(m), 3 * m + 1
            if a - 2 * min(da, 0) < depth:
                _add_pair_term(arr, a, da, ell, 1)
                live = True
            if b - 2 * min(db, 0) < depth:
                _add_pair_term(arr, b, db, ell, -1)
                live = True
        if not live and n > 2:
            break
        n += 1
    return _finish_root_series(arr, depth, ell)


# the U/V decomposition of each bracket: (constant, [(weight, kind, a, b, qshift)])
def _uv_terms(i: int, ell: int):
    if (i, ell) not in SUPPORTED:
        raise UnsupportedCombination(f"no U/V decomposition stored for PP_{i} at zeta_{ell}")
    z = lambda k: zeta(ell, k)
    one = CyclotomicNumber.scalar(ell, 1)
    if ell == 3:
        if i == 1:
            return Fraction(1, 3), [
                (one, "V", 6, 2, 0), (-one, "V", 6, 5, 0), (-one, "U", 6, 8, 2), (one, "U", 6, 11, 3)]
        return Fraction(1, 3), [
            (one, "V", 6, 1, 0), (-one, "V", 6, 4, 0), (-one, "U", 6, 5, 1), (one, "U", 6, 8, 2)]
    const = inverse(_root_pair_denominator(ell))
    if ell == 5:
        c = z(1) + z(4)
        a, bs, us, shift = {2: (6, (1, 4, 7, 10), (5, 8, 11, 14), 1),
                            3: (3, (2, 5, 8, 11), (4, 7, 10, 13), 1),
                            4: (3, (1, 4, 7, 10), (7, 10, 13, 16), 2)}[i]
        ws = (one, c, -c, -one)
        uw = (-one, -c, c, one)
        terms = [(w, "V", a, b, 0) for w, b in zip(ws, bs)]
        terms += [(w, "U", a, b, shift + k) for k, (w, b) in enumerate(zip(uw, us))]
        return const, terms
    c1 = z(1) + z(6)
    c2 = 1 + z(2) + z(5)
    ws = (one, c1, c2, -c2, -c1, -one)
    uw = (-one, -c1, -c2, c2, c1, one)
    terms = [(w, "V", 3, b, 0) for w, b in zip(ws, (2, 5, 8, 11, 14, 17))]
    terms += [(w, "U", 3, b, 1 + k) for k, (w, b) in enumerate(zip(uw, (4, 7, 10, 13, 16, 19)))]
    return const, terms


def uv_decomposition(i: int, ell: int):
    """Declarative ``(constant, [(weight, 'U'|'V', a, b, qshift), ...])`` data."""
    return _uv_terms(i, ell)


def uv_bracket(i: int, ell: int, depth: int) -> LaurentSeries:
    const, terms = _uv_terms(i, ell)
    ring = cyclotomic(ell)
    total = LaurentSeries.constant(CyclotomicNumber.scalar(ell, 1) * const, depth, ring)
    for w, kind, a, b, shift in terms:
        fn = U_series if kind == "U" else V_series
        part = fn(a, ell, b, depth - shift).shift(shift)
        total = total + part.scale(w)
    return total


def _from_bracket(bracket: LaurentSeries, ell: int, depth) -> LaurentSeries:
    base = ProductForm.qinf(1).divide(bracket)
    crank = crank_genfun_at_root(ell, depth).scale(inverse(_root_pair_denominator(ell)))
    return (base - crank).truncate(depth)


def pp_uv_at_root(i: int, ell: int, depth: int) -> LaurentSeries:
    """``PP_i(zeta_ell, q)`` from the U/V bracket."""
    return _from_bracket(uv_bracket(i, ell, depth), ell, depth)


def pp_alpha_at_root(i: int, ell: int, depth: int) -> LaurentSeries:
    """``PP_i(zeta_ell, q)`` from the Bailey-lemma alpha sum."""
    return _from_bracket(alpha_bracket(i, ell, depth), ell, depth)


def pp_direct_at_root(i: int, ell: int, depth: int) -> LaurentSeries:
    from .series import eval_z_at_root

    return eval_z_at_root(pp_direct_bivariate(i, depth), ell)


def bailey_lemma_check(i: int, ell: int, depth: int) -> VerificationOutcome:
    """Both sides of the limiting Bailey lemma at rho1 = zeta, rho2 = 1/zeta, a = 1.

    ``sum (zeta, 1/zeta; q)_n q^n beta_n`` against
    ``(zeta q, q/zeta)_inf / (q)_inf^2 * sum (zeta,1/zeta)_n q^n alpha_n / (zeta q, q/zeta)_n``.
    """
    pair = _pair(i)
    ring = cyclotomic(ell)
    z, zi = zeta(ell), zeta(ell, -1)
    lhs = LaurentSeries.zero(depth, ring)
    n = 0
    while pair.beta_exponent(n) + n < depth:
        pf = ProductForm.poch_finite(0, 1, n, z) * ProductForm.poch_finite(0, 1, n, zi)
        pf = pf * ProductForm.q_power(n)
        lhs = lhs + pf.apply_to(pair.beta_series(n, depth - n)).to_ring(ring) if pf.coeff != 0 else lhs
        n += 1
    inner = LaurentSeries.zero(depth, ring)
    m, idle = 0, 0
    while idle < 3:
        al = pair.alpha(m)
        idle = idle + 1 if min(al) + m >= depth and m > 3 else 0
        # (zeta;q)_m / (zeta q;q)_m = (1 - zeta)/(1 - zeta q^m)
        pf = ProductForm((1 - z) * (1 - zi), m) / (
            ProductForm.poch_finite(m, 1, 1, z) * ProductForm.poch_finite(m, 1, 1, zi)
        ) if m else ProductForm(1)
        inner = inner + pf.apply_to(LaurentSeries.from_dict(al, depth - m, INTEGER)).to_ring(ring)
        m += 1
    outer = (ProductForm.poch_inf(1, 1, z) * ProductForm.poch_inf(1, 1, zi)) / ProductForm.qinf(1) ** 2
    rhs = outer.apply_to(inner)
    return compare_to_depth(lhs, rhs, depth)
