"""Products, theta functions, eta factors and Lambert-type series.

Infinite products are handled symbolically by :class:`ProductForm`, a scalar
times a power of q times a multiset of binomials ``(1 - c q^k)`` with k > 0.
Only at expansion time is the multiset cut off at the requested order, and a
ProductForm can be applied to an existing series factor by factor, which
costs O(N) per binomial instead of a full convolution.

Every Lambert-type series here (S, T, S*, T*, U, V, g, h, V_chi) is reduced
to a list of terms ``coef * q^E / (1 - q^D)``; :func:`lambert_terms` rewrites
``D < 0`` with ``1/(1 - q^-m) = -q^m/(1 - q^m)`` and expands the geometric
tails.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from .exactring import INTEGER, RATIONAL, CyclotomicNumber, Ring, exact, inverse, join_rings, ring_of
from .series import BivariateSeries, InsufficientTruncation, LaurentSeries, _lcm, _zeros


class QFunctionError(ArithmeticError):
    pass


class DivergentProduct(QFunctionError):
    pass


class PoleAtInteger(QFunctionError, ZeroDivisionError):
    pass


class NonMonomialArgument(QFunctionError, TypeError):
    pass


class DegenerateProductArgument(QFunctionError, ZeroDivisionError):
    pass


Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Monomial:
    """``coeff * z^z_exp * q^q_exp``."""

    coeff: object = 1
    z_exp: int = 0
    q_exp: Fraction = Fraction(0)

    @classmethod
    def q(cls, exponent) -> "Monomial":
        return cls(1, 0, _frac(exponent))


def _q_exponent(x) -> Fraction:
    """Accept a pure q-monomial or a bare exponent."""
    if isinstance(x, Monomial):
        if x.coeff != 1 or x.z_exp != 0:
            raise NonMonomialArgument(f"expected a pure power of q, got {x}")
        return _frac(x.q_exp)
    if isinstance(x, (int, Fraction)):
        return _frac(x)
    raise NonMonomialArgument(f"expected a q-exponent, got {x!r}")


def _den_of(*values) -> int:
    d = 1
    for v in values:
        d = _lcm(d, _frac(v).denominator)
    return d


# ---------------------------------------------------------------------------
# Binomial kernels on dense arrays


def _mul_binomial(arr: np.ndarray, k: int, c, times: int = 1) -> None:
    """In place: arr <- arr * (1 - c q^k)^times (k in array units)."""
    n = len(arr)
    if k >= n:
        return
    for _ in range(times):
        if c == 1:
            arr[k:] = arr[k:] - arr[: n - k]
        else:
            arr[k:] = arr[k:] - c * arr[: n - k]


def _div_binomial(arr: np.ndarray, k: int, c, times: int = 1) -> None:
    """In place: arr <- arr / (1 - c q^k)^times."""
    n = len(arr)
    if k >= n:
        return
    for _ in range(times):
        for s in range(k, n, k):
            e = min(s + k, n)
            if c == 1:
                arr[s:e] += arr[s - k : e - k]
            else:
                arr[s:e] += c * arr[s - k : e - k]


def _kernel_ring(c) -> Ring:
    return ring_of(c) if not isinstance(c, int) else INTEGER


class ProductForm:
    """``coeff * q^qexp * prod (1 - c q^k)^m`` over finite and infinite families.

    ``finite`` maps ``(c, k)`` to a multiplicity; ``infinite`` maps
    ``(c, a, b)`` to the multiplicity of ``(c q^a; q^b)_inf``.  All k, a, b > 0.
    """

    __slots__ = ("coeff", "qexp", "finite", "infinite")

    def __init__(self, coeff=1, qexp=0, finite=None, infinite=None):
        self.coeff = exact(coeff) if isinstance(coeff, Fraction) else coeff
        self.qexp = _frac(qexp)
        self.finite = Counter({k: v for k, v in (finite or {}).items() if v})
        self.infinite = Counter({k: v for k, v in (infinite or {}).items() if v})

    # constructors
    @classmethod
    def scalar(cls, c) -> "ProductForm":
        return cls(c)

    @classmethod
    def q_power(cls, e, coeff=1) -> "ProductForm":
        return cls(coeff, e)

    @classmethod
    def poch_inf(cls, a, b, c=1) -> "ProductForm":
        """``(c q^a; q^b)_inf`` with finitely many non-positive factors split off."""
        a, b = _frac(a), _frac(b)
        if b <= 0:
            raise DivergentProduct(f"base q^{b} does not converge")
        pf = cls()
        while a <= 0:
            pf = pf * cls._single(c, a)
            a += b
        pf.infinite[(c, a, b)] += 1
        return pf

    @classmethod
    def poch_finite(cls, a, b, n: int, c=1) -> "ProductForm":
        a, b = _frac(a), _frac(b)
        pf = cls()
        for j in range(n):
            pf = pf * cls._single(c, a + j * b)
        return pf

    @classmethod
    def _single(cls, c, e: Fraction) -> "ProductForm":
        """The factor ``1 - c q^e`` in normal form."""
        if e > 0:
            return cls(1, 0, {(c, e): 1})
        if e == 0:
            return cls(exact(1 - c) if not isinstance(c, CyclotomicNumber) else 1 - c)
        # 1 - c q^-m = -c q^-m (1 - c^{-1} q^m)
        return cls(-c, e, {(inverse(c) if c != 1 else 1, -e): 1})

    @classmethod
    def qinf(cls, d) -> "ProductForm":
        """``(q^d; q^d)_inf``."""
        return cls.poch_inf(d, d)

    @classmethod
    def jac(cls, a, b, c=1) -> "ProductForm":
        """``j(c q^a; q^b) = (c q^a; q^b)_inf (q^b/(c q^a); q^b)_inf``, normalised."""
        a, b = _frac(a), _frac(b)
        if b <= 0:
            raise DivergentProduct(f"base q^{b} does not converge")
        pf = cls()
        # j(z q^b) = -z^{-1} j(z) and j(z q^-b) = -z q^-b j(z)
        while a >= b:
            a -= b
            pf = pf * cls(-inverse(c), -a)
        while a < 0:
            pf = pf * cls(-c, a)
            a += b
        if a == 0:
            if c == 1:
                return cls(0)
            pf = pf * cls(1 - c)
            pf.infinite[(c, b, b)] += 1
        else:
            pf.infinite[(c, a, b)] += 1
        cinv = inverse(c) if c != 1 else 1
        pf.infinite[(cinv, b - a, b)] += 1
        return pf

    @classmethod
    def geta(cls, delta: int, g: int) -> "ProductForm":
        """Generalised eta factor: ``q^{P(g/delta) delta/2} j(q^g; q^delta)``, or ``eta(delta tau)^2``."""
        if g % delta == 0:
            return cls(1, Fraction(delta, 12), infinite={(1, _frac(delta), _frac(delta)): 2})
        return cls.jac(g, delta) * cls(1, eta_prefactor(delta, g))

    @classmethod
    def eta(cls, delta: int) -> "ProductForm":
        """Dedekind eta ``q^{delta/24} (q^delta; q^delta)_inf``."""
        return cls(1, Fraction(delta, 24), infinite={(1, _frac(delta), _frac(delta)): 1})

    # algebra
    def copy(self) -> "ProductForm":
        return ProductForm(self.coeff, self.qexp, self.finite, self.infinite)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return ProductForm(self.coeff * other, self.qexp, self.finite, self.infinite)
        if not isinstance(other, ProductForm):
            return NotImplemented
        fin = Counter(self.finite)
        fin.update(other.finite)
        inf = Counter(self.infinite)
        inf.update(other.infinite)
        return ProductForm(self.coeff * other.coeff, self.qexp + other.qexp, fin, inf)

    __rmul__ = __mul__

    def inverse(self) -> "ProductForm":
        if self.coeff == 0:
            raise ZeroDivisionError("product is identically zero")
        return ProductForm(
            inverse(self.coeff),
            -self.qexp,
            {k: -v for k, v in self.finite.items()},
            {k: -v for k, v in self.infinite.items()},
        )

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self * inverse(other)
        if not isinstance(other, ProductForm):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, r):
        r = _frac(r)
        if r.denominator == 1:
            n = r.numerator
            if n < 0:
                return self.inverse() ** (-n)
            coeff = self.coeff ** n if n else 1
            return ProductForm(
                coeff,
                self.qexp * n,
                {k: v * n for k, v in self.finite.items()},
                {k: v * n for k, v in self.infinite.items()},
            )
        # fractional powers are only meaningful when every multiplicity divides
        mults = list(self.finite.values()) + list(self.infinite.values())
        if self.coeff != 1 or any((Fraction(m) * r).denominator != 1 for m in mults):
            raise ValueError(f"cannot raise this product to the power {r}")
        return ProductForm(
            1,
            self.qexp * r,
            {k: int(v * r) for k, v in self.finite.items()},
            {k: int(v * r) for k, v in self.infinite.items()},
        )

    def substitute(self, k: int) -> "ProductForm":
        """q -> q^k."""
        return ProductForm(
            self.coeff,
            self.qexp * k,
            {(c, e * k): v for (c, e), v in self.finite.items()},
            {(c, a * k, b * k): v for (c, a, b), v in self.infinite.items()},
        )

    @property
    def is_scalar(self) -> bool:
        return not self.finite and not self.infinite and self.qexp == 0

    @property
    def valuation(self) -> Fraction:
        return self.qexp

    def ring(self) -> Ring:
        r = ring_of(self.coeff) if self.coeff != 0 else INTEGER
        for key in list(self.finite) + list(self.infinite):
            r = join_rings(r, _kernel_ring(key[0]))
        if r.kind == "Z" and (
            any(v < 0 and key[0] not in (1, -1) for key, v in self.finite.items())
            or any(v < 0 and key[0] not in (1, -1) for key, v in self.infinite.items())
        ):
            r = RATIONAL
        return r

    def den(self) -> int:
        vals = [self.qexp]
        vals += [e for (_, e) in self.finite]
        for _, a, b in self.infinite:
            vals += [a, b]
        return _den_of(*vals)

    def binomials(self, span: Fraction) -> Counter:
        """Net multiplicity of each ``(c, k)`` with ``0 < k < span``."""
        net: Counter = Counter()
        for (c, k), m in self.finite.items():
            if k < span:
                net[(c, k)] += m
        for (c, a, b), m in self.infinite.items():
            e = a
            while e < span:
                net[(c, e)] += m
                e += b
        return Counter({k: v for k, v in net.items() if v})

    def apply_to(self, f: LaurentSeries) -> LaurentSeries:
        """``self * f`` computed factor by factor; the order shifts by ``qexp``."""
        if self.coeff == 0:
            return LaurentSeries.zero(f.order + self.qexp, f.ring)
        den = _lcm(f.den, self.den())
        f = f.with_den(den)
        ring = join_rings(f.ring, self.ring())
        arr = f.coeffs.copy()
        span = Fraction(f.prec - f.start, den)
        net = self.binomials(span)
        # multiplications first keeps divisions acting on the smallest data
        for (c, k), m in sorted(net.items(), key=lambda t: (t[1] < 0, t[0][1])):
            ku = int(k * den)
            if m > 0:
                _mul_binomial(arr, ku, c, m)
            else:
                _div_binomial(arr, ku, c, -m)
        if self.coeff != 1:
            arr = arr * self.coeff
        if ring.kind == "Q" or ring.kind == "Z":
            arr = np.array([exact(x) if isinstance(x, Fraction) else x for x in arr], dtype=object)
        shift = int(self.qexp * den)
        return LaurentSeries(ring, den, f.start + shift, f.prec + shift, arr)

    def divide(self, f: LaurentSeries) -> LaurentSeries:
        """``f / self``."""
        return self.inverse().apply_to(f)

    def expand(self, order) -> LaurentSeries:
        """Truncated expansion known below ``order``."""
        order = _frac(order)
        den = _lcm(self.den(), order.denominator)
        span = order - self.qexp
        n = max(math.ceil(span * den), 0)
        arr = _zeros(n)
        if n:
            arr[0] = 1
        base = LaurentSeries(INTEGER, den, 0, n, arr, trim=False)
        out = self.apply_to(base)
        return out.truncate(order) if out.order > order else out

    def __repr__(self):
        return f"ProductForm(coeff={self.coeff}, qexp={self.qexp}, finite={dict(self.finite)}, infinite={dict(self.infinite)})"


# ---------------------------------------------------------------------------
# Products


def euler_pentagonal(depth, base=1) -> LaurentSeries:
    """``(q^b; q^b)_inf`` as the signed pentagonal sum below ``depth``."""
    depth, base = _frac(depth), _frac(base)
    terms = {}
    n = 0
    while True:
        done = True
        for m in ((n, -n) if n else (0,)):
            e = base * m * (3 * m + 1) / 2
            if e < depth:
                done = False
                terms[e] = (-1) ** (m % 2)
        if done and n > 0:
            break
        n += 1
    return LaurentSeries.from_dict(terms, max(depth, Fraction(0)), INTEGER)


def pochhammer(a, n, depth, qbase=1):
    """``(a; q^qbase)_n`` for n a natural number or ``math.inf``.

    ``a`` is a :class:`Monomial` (or a bare q-exponent).  A z-dependent
    monomial yields a :class:`BivariateSeries`.
    """
    if isinstance(a, Monomial) and a.z_exp != 0:
        return _bivariate_pochhammer(a, n, depth, qbase)
    if isinstance(a, Monomial):
        c, e = a.coeff, _frac(a.q_exp)
    else:
        c, e = 1, _frac(a)
    b = _frac(qbase)
    if n == math.inf or n is None:
        if b <= 0:
            raise DivergentProduct("infinite product needs a positive base exponent")
        return ProductForm.poch_inf(e, b, c).expand(depth)
    return ProductForm.poch_finite(e, b, int(n), c).expand(depth)


def _bivariate_pochhammer(a: Monomial, n, depth: int, qbase) -> BivariateSeries:
    e, b = _frac(a.q_exp), _frac(qbase)
    if e.denominator != 1 or b.denominator != 1:
        raise NonMonomialArgument("bivariate products use integer q-exponents")
    if n == math.inf and (b <= 0 or e <= 0):
        raise DivergentProduct("infinite bivariate product needs positive exponents")
    count = int((depth - e) // b) + 1 if n == math.inf else int(n)
    width = abs(a.z_exp) * (count + 1)
    depth = int(depth)
    grid = np.zeros((depth, 2 * width + 1), dtype=object)
    grid[0, width] = 1
    for j in range(count):
        k = int(e + j * b)
        if k < 0 or k >= depth and k > 0:
            if k >= depth:
                continue
            raise DivergentProduct("negative exponents are not supported for bivariate products")
        shifted = np.zeros_like(grid)
        zs = a.z_exp
        if zs > 0:
            shifted[k:, zs:] = grid[: depth - k, : grid.shape[1] - zs]
        else:
            shifted[k:, : grid.shape[1] + zs] = grid[: depth - k, -zs:]
        grid = grid - a.coeff * shifted
    return BivariateSeries.from_dense(grid, width)


def jacprod(z, qbase, depth) -> LaurentSeries:
    """``j(z; q^qbase) = (z; q^b)_inf (q^b/z; q^b)_inf`` truncated below ``depth``."""
    if isinstance(z, Monomial):
        if z.z_exp != 0:
            raise NonMonomialArgument("jacprod takes a q-monomial")
        c, e = z.coeff, _frac(z.q_exp)
    else:
        c, e = 1, _frac(z)
    return ProductForm.jac(e, qbase, c).expand(depth)


def eta_prefactor(delta: int, g: int) -> Fraction:
    """``P(g/delta) * delta / 2`` with ``P(t) = {t}^2 - {t} + 1/6``."""
    t = Fraction(g, delta)
    t -= math.floor(t)
    return (t * t - t + Fraction(1, 6)) * delta / 2


def generalized_eta(delta: int, g: int, depth, power=1) -> LaurentSeries:
    if not 0 <= g <= delta:
        raise ValueError("need 0 <= g <= delta")
    return (ProductForm.geta(delta, g) ** power).expand(depth)


# ---------------------------------------------------------------------------
# Lambert-type series


def lambert_terms(terms: Iterable[Tuple[object, Fraction, Fraction]], depth, ring: Optional[Ring] = None) -> LaurentSeries:
    """Sum of ``coef * q^E / (1 - q^D)`` truncated below ``depth``.

    Terms with ``D < 0`` are rewritten as ``-coef * q^(E - D) / (1 - q^(-D))``.
    """
    depth = _frac(depth)
    norm = []
    for coef, e, d in terms:
        e, d = _frac(e), _frac(d)
        if d == 0:
            raise PoleAtInteger("denominator 1 - q^0 in a Lambert term")
        if d < 0:
            coef, e, d = -coef, e - d, -d
        if e < depth and coef != 0:
            norm.append((coef, e, d))
    den = _den_of(depth, *[x for _, e, d in norm for x in (e, d)])
    prec = int(depth * den)
    start = min([int(e * den) for _, e, _ in norm], default=prec)
    arr = _zeros(prec - start)
    for coef, e, d in norm:
        eu, du = int(e * den), int(d * den)
        arr[eu - start :: du] += coef
    if ring is None:
        ring = INTEGER
        for coef, _, _ in norm:
            ring = join_rings(ring, ring_of(coef))
    if ring.kind == "Q":
        arr = np.array([exact(x) if isinstance(x, Fraction) else x for x in arr], dtype=object)
    return LaurentSeries(ring, den, start, prec, arr)


def _quadratic_range(a: Fraction, b: Fraction, bound: Fraction, margin: int = 2) -> range:
    """Integers n with ``a n^2 + b n < bound`` (a > 0), widened by ``margin``."""
    a, b, bound = float(a), float(b), float(bound)
    disc = b * b + 4 * a * bound
    vertex = -b / (2 * a)
    if disc < 0:
        return range(math.floor(vertex) - margin, math.ceil(vertex) + margin + 1)
    r = math.sqrt(disc) / (2 * a)
    return range(math.floor(vertex - r) - margin, math.ceil(vertex + r) + margin + 1)


def _check_pole(a: Fraction, c: Fraction, exclude_zero: bool = False):
    n = -a / c
    if n.denominator == 1 and not (exclude_zero and n == 0):
        raise PoleAtInteger(f"denominator exponent {a} + {c}n vanishes at n = {n}")


def _bilateral(quad: Fraction, linear: Fraction, dconst: Fraction, dlin: Fraction, depth, skip_zero: bool) -> LaurentSeries:
    """``sum_n q^{quad n^2 + linear n} / (1 - q^{dconst + dlin n})``."""
    depth = _frac(depth)
    if not skip_zero:
        _check_pole(dconst, dlin)
    terms = []
    for n in _quadratic_range(quad, linear, depth):
        if skip_zero and n == 0:
            continue
        terms.append((1, quad * n * n + linear * n, dconst + dlin * n))
    return lambert_terms(terms, depth, INTEGER)


def lambert_S(z, w, qbase, depth) -> LaurentSeries:
    """``S(z, w, q^c) = sum_n q^{2c n(n+1)} w^n / (1 - z q^{cn})`` with z = q^a, w = q^b."""
    a, b, c = _q_exponent(z), _q_exponent(w), _frac(qbase)
    return _bilateral(2 * c, 2 * c + b, a, c, depth, False)


def lambert_T(z, w, qbase, depth) -> LaurentSeries:
    """``T(z, w, q^c) = sum_n q^{c n(n+1)} w^n / (1 - z q^{cn})``."""
    a, b, c = _q_exponent(z), _q_exponent(w), _frac(qbase)
    return _bilateral(c, c + b, a, c, depth, False)


def s_star(w, qbase, depth) -> LaurentSeries:
    """``S*(w, q^c)``: the S sum at z = 1 without its n = 0 term."""
    b, c = _q_exponent(w), _frac(qbase)
    return _bilateral(2 * c, 2 * c + b, Fraction(0), c, depth, True)


def t_star(w, qbase, depth) -> LaurentSeries:
    b, c = _q_exponent(w), _frac(qbase)
    return _bilateral(c, c + b, Fraction(0), c, depth, True)


def U_series(a, ell, b, depth) -> LaurentSeries:
    """``U^a_ell(b) = sum_n q^{a n^2 + b n} / (1 - q^{ell(3n+1)})``."""
    return _bilateral(_frac(a), _frac(b), _frac(ell), 3 * _frac(ell), depth, False)


def V_series(a, ell, b, depth) -> LaurentSeries:
    """``V^a_ell(b) = sum_{n != 0} q^{a n^2 + b n} / (1 - q^{3 ell n})``."""
    return _bilateral(_frac(a), _frac(b), Fraction(0), 3 * _frac(ell), depth, True)


def _one_sided(first: Fraction, step: Fraction, sign, depth: Fraction, n0: int) -> Iterator[Tuple[object, Fraction, Fraction]]:
    """Terms ``sign * x/(1-x)`` with ``x = q^{first + step n}`` for n >= n0."""
    n = n0
    while True:
        d = first + step * n
        if d == 0:
            raise PoleAtInteger(f"term x/(1-x) with x = q^0 at n = {n}")
        if d >= depth:
            return
        yield sign, d, d
        n += 1


def g_series(s, qbase, depth) -> LaurentSeries:
    """``g(q^s, q^c) = 1 - sum_{n>=0} x_n/(1-x_n) + sum_{n>=1} y_n/(1-y_n)``,
    ``x_n = q^{2s + cn}``, ``y_n = q^{cn - 2s}``."""
    s, c, depth = _frac(s), _frac(qbase), _frac(depth)
    terms = list(_one_sided(2 * s, c, -1, depth, 0)) + list(_one_sided(-2 * s, c, 1, depth, 1))
    return lambert_terms(terms, depth, INTEGER).add_scalar(1)


def h_series(s, qbase, depth) -> LaurentSeries:
    """``h(q^s, q^c) = -sum_{n>=0} x_n/(1-x_n) + sum_{n>=1} y_n/(1-y_n)``,
    ``x_n = q^{s + cn}``, ``y_n = q^{cn - s}``."""
    s, c, depth = _frac(s), _frac(qbase), _frac(depth)
    terms = list(_one_sided(s, c, -1, depth, 0)) + list(_one_sided(-s, c, 1, depth, 1))
    return lambert_terms(terms, depth, INTEGER)


def chi3(n: int) -> int:
    """The character mod 3: 1, -1, 0 on residues 1, 2, 0."""
    return (0, 1, -1)[n % 3]


def v_chi1(scale: int, depth) -> LaurentSeries:
    """``1/6 + sum_{n>=1} chi(n) q^{sn}/(1 - q^{sn})`` truncated below ``depth``."""
    depth = _frac(depth)
    terms = []
    n = 1
    while scale * n < depth:
        if chi3(n):
            terms.append((chi3(n), Fraction(scale * n), Fraction(scale * n)))
        n += 1
    out = lambert_terms(terms, depth, INTEGER)
    return out.add_scalar(Fraction(1, 6))


# ---------------------------------------------------------------------------
# g and h through theta quotients


def doubling_period(ell: int) -> Tuple[int, int]:
    """Least n >= 1 with 2^n = 1 mod 3*ell, and b = (2^n - 1)/(3*ell)."""
    m = 3 * ell
    if math.gcd(2, m) != 1:
        raise ValueError("3*ell must be odd")
    n, p = 1, 2 % m
    while p != 1 % m:
        n += 1
        p = (p * 2) % m
    return n, (2 ** n - 1) // m


def _jac_checked(x: Fraction, base: Fraction, where: str) -> ProductForm:
    if (x / base).denominator == 1:
        raise DegenerateProductArgument(f"j(q^{x}; q^{base}) vanishes in a denominator ({where})")
    return ProductForm.jac(x, base)


def g_doubling_terms(x: Fraction, base: Fraction) -> Tuple[ProductForm, ProductForm]:
    """The two theta quotients in ``4g(z) - 2g(z^2) = 3 - P1 - P2`` at z = q^x."""
    e = ProductForm.qinf(base) ** 2
    j = lambda m: ProductForm.jac(m * x, base)
    jd = lambda m: _jac_checked(m * x, base, "g doubling")
    p1 = ProductForm.q_power(2 * x) * e * j(2) * j(8) / (jd(4) ** 2 * jd(6))
    p2 = e * j(4) ** 3 / (jd(2) ** 3 * jd(6))
    return p1, p2


def h_doubling_terms(x: Fraction, base: Fraction) -> Tuple[ProductForm, ProductForm]:
    """The two theta quotients in ``4h(z) - 2h(z^2) = 1 - P1 - P2`` at z = q^x."""
    e = ProductForm.qinf(base) ** 2
    j = lambda m: ProductForm.jac(m * x, base)
    jd = lambda m: _jac_checked(m * x, base, "h doubling")
    p1 = ProductForm.q_power(x) * e * j(1) * j(4) / (jd(2) ** 2 * jd(3))
    p2 = e * j(2) ** 3 / (jd(1) ** 3 * jd(3))
    return p1, p2


def _product_expansion(ell: int, a: int, depth, kind: str) -> LaurentSeries:
    n, b = doubling_period(ell)
    base = Fraction(3 * ell * ell)
    depth = _frac(depth)
    const = 3 if kind == "g" else 1
    shift = -4 * b * a if kind == "g" else -2 * b * a
    pieces = doubling_pieces(ell, a, kind)
    total = LaurentSeries.constant(shift + const * sum(w for w, _, _ in pieces), depth)
    for weight, p1, p2 in pieces:
        total = total - p1.expand(depth).scale(weight) - p2.expand(depth).scale(weight)
    return total.scale(Fraction(1, 2 ** (n + 1) - 2))


def doubling_pieces(ell: int, a: int, kind: str) -> List[Tuple[int, ProductForm, ProductForm]]:
    """``[(2^{n-k-1}, P1_k, P2_k)]`` for the telescoped doubling identity."""
    n, _ = doubling_period(ell)
    base = Fraction(3 * ell * ell)
    out = []
    for k in range(n):
        x = Fraction(ell * a * 2 ** k)
        p1, p2 = (g_doubling_terms if kind == "g" else h_doubling_terms)(x, base)
        out.append((2 ** (n - k - 1), p1, p2))
    return out


def g_product_expansion(ell: int, a: int, depth) -> LaurentSeries:
    """``g(q^{ell a}; q^{3 ell^2})`` from theta quotients and the constant ``-4ba``."""
    return _product_expansion(ell, a, depth, "g")


def h_product_expansion(ell: int, a: int, depth) -> LaurentSeries:
    """``h(q^{ell a}; q^{3 ell^2})`` from theta quotients and the constant ``-2ba``."""
    return _product_expansion(ell, a, depth, "h")
