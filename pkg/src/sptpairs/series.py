"""Truncated Laurent series in q with rational exponents, and (z, q) bivariate series.

A :class:`LaurentSeries` stores coefficients densely in a numpy object array.
Exponents are integers in units of ``1/den``; ``start`` is the exponent of
the first stored coefficient and ``prec`` is the exclusive truncation bound,
so the array always covers exactly ``start <= e < prec``.  Coefficients are
plain Python ``int``/``Fraction`` values or :class:`CyclotomicNumber`.

Products follow the usual truncation rule: if ``a`` is known below ``O_a``
with valuation ``m_a`` (and likewise for ``b``) then ``a*b`` is known below
``min(O_a + m_b, O_b + m_a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exactring import (
    INTEGER,
    RATIONAL,
    CyclotomicNumber,
    Ring,
    RingMismatch,
    coerce,
    cyclotomic,
    exact,
    inverse,
    is_unit,
    join_rings,
    ring_of,
)


class SeriesError(ArithmeticError):
    pass


class NonUnitLeadingCoefficient(SeriesError):
    pass


class FractionalExponents(SeriesError, ValueError):
    pass


class InsufficientTruncation(SeriesError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _units(x, den: int) -> int:
    """Exponent ``x`` expressed in units of ``1/den`` (must be exact)."""
    v = _frac(x) * den
    if v.denominator != 1:
        raise FractionalExponents(f"exponent {x} is not a multiple of 1/{den}")
    return v.numerator


def _zeros(n: int) -> np.ndarray:
    return np.zeros(max(n, 0), dtype=object)


def _ring_of_values(values: Iterable) -> Ring:
    ring = INTEGER
    for v in values:
        if isinstance(v, CyclotomicNumber):
            return join_rings(ring, cyclotomic(v.order))
        if isinstance(v, Fraction) and v.denominator != 1:
            ring = RATIONAL
    return ring


def nonzero_positions(arr: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(np.fromiter((x != 0 for x in arr), dtype=bool, count=len(arr)))


class LaurentSeries:
    """Immutable truncated series ``sum c_e q^e + O(q^order)``."""

    __slots__ = ("ring", "den", "start", "prec", "coeffs")

    def __init__(self, ring: Ring, den: int, start: int, prec: int, coeffs: np.ndarray, trim=True):
        if den <= 0:
            raise ValueError("exponent denominator must be positive")
        if coeffs.dtype != object:
            coeffs = coeffs.astype(object)
        if start > prec:
            start, coeffs = prec, coeffs[:0]
        if len(coeffs) != prec - start:
            raise ValueError("coefficient array must span start..prec exactly")
        if trim and len(coeffs) and coeffs[0] == 0:
            nz = nonzero_positions(coeffs)
            skip = int(nz[0]) if len(nz) else len(coeffs)
            start += skip
            coeffs = coeffs[skip:]
        coeffs.flags.writeable = False
        self.ring = ring
        self.den = den
        self.start = start
        self.prec = prec
        self.coeffs = coeffs

    # construction
    @classmethod
    def from_coeffs(cls, values: Sequence, start=0, order=None, den: int = 1, ring: Optional[Ring] = None):
        """Series with ``values[k]`` at exponent ``start + k/den``."""
        s = _units(start, den)
        arr = np.empty(len(values), dtype=object)
        for k, v in enumerate(values):
            arr[k] = exact(v) if isinstance(v, Fraction) else v
        p = s + len(arr) if order is None else _units(order, den)
        if p < s + len(arr):
            arr = arr[: max(p - s, 0)]
        elif p > s + len(arr):
            arr = np.concatenate([arr, _zeros(p - s - len(arr))])
        if ring is None:
            ring = _ring_of_values(arr)
        return cls(ring, den, s, p, arr)

    @classmethod
    def from_dict(cls, terms: Mapping, order, ring: Optional[Ring] = None):
        """Build from ``{exponent: coefficient}``; terms at or beyond ``order`` are dropped."""
        exps = [_frac(e) for e in terms] + [_frac(order)]
        den = 1
        for e in exps:
            den = den * e.denominator // math.gcd(den, e.denominator)
        p = _units(order, den)
        keys = [(_units(e, den), c) for e, c in terms.items()]
        s = min([k for k, _ in keys if k < p], default=p)
        arr = _zeros(p - s)
        for k, c in keys:
            if k < p:
                arr[k - s] += c
        if ring is None:
            ring = _ring_of_values(terms.values())
        return cls(ring, den, s, p, arr)

    @classmethod
    def zero(cls, order, ring: Ring = INTEGER):
        o = _frac(order)
        p = o.numerator
        return cls(ring, o.denominator, p, p, _zeros(0))

    @classmethod
    def monomial(cls, coeff, exponent, order, ring: Optional[Ring] = None):
        return cls.from_dict({exponent: coeff}, order, ring or ring_of(coeff))

    @classmethod
    def constant(cls, coeff, order, ring: Optional[Ring] = None):
        return cls.monomial(coeff, 0, order, ring)

    # basic accessors
    @property
    def order(self) -> Fraction:
        return Fraction(self.prec, self.den)

    @property
    def valuation(self) -> Optional[Fraction]:
        """Exponent of the first nonzero coefficient, or None if zero to the order."""
        if len(self.coeffs) == 0:
            return None
        return Fraction(self.start, self.den)

    @property
    def min_exponent(self) -> Fraction:
        """Valuation, or the truncation order for a series known to be zero."""
        return Fraction(self.start, self.den)

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def coefficient(self, exponent):
        e = _frac(exponent) * self.den
        if e >= self.prec:
            raise InsufficientTruncation(f"exponent {exponent} is at or beyond order {self.order}")
        if e.denominator != 1 or e < self.start:
            return 0
        return self.coeffs[e.numerator - self.start]

    def __getitem__(self, exponent):
        return self.coefficient(exponent)

    def items(self) -> Iterator[Tuple[Fraction, object]]:
        for k in nonzero_positions(self.coeffs):
            yield Fraction(self.start + int(k), self.den), self.coeffs[int(k)]

    def to_dict(self) -> Dict[Fraction, object]:
        return dict(self.items())

    def coefficient_list(self, upto=None) -> list:
        """Coefficients at exponents 0, 1, ... (integer exponents only) below ``upto``."""
        if self.den != 1:
            raise FractionalExponents("coefficient_list needs integer exponents")
        stop = self.prec if upto is None else min(int(upto), self.prec)
        return [self.coefficient(n) for n in range(0, stop)]

    def nnz(self) -> int:
        return len(nonzero_positions(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        parts = []
        for e, c in list(self.items())[:8]:
            parts.append(f"({c})*q^{e}")
        more = " + ..." if self.nnz() > 8 else ""
        body = " + ".join(parts) if parts else "0"
        return f"LaurentSeries[{self.ring}]({body}{more} + O(q^{self.order}))"

    # representation changes
    def with_den(self, den: int) -> "LaurentSeries":
        if den == self.den:
            return self
        if den % self.den:
            raise ValueError("new denominator must be a multiple of the old one")
        f = den // self.den
        arr = _zeros((self.prec - self.start) * f)
        arr[::f] = self.coeffs
        return LaurentSeries(self.ring, den, self.start * f, self.prec * f, arr, trim=False)

    def reduced(self) -> "LaurentSeries":
        """Smallest exponent denominator that still represents the series."""
        if self.den == 1:
            return self
        g = self.prec
        for k in nonzero_positions(self.coeffs):
            g = math.gcd(g, self.start + int(k))
        g = math.gcd(g, self.den)
        if g == 1:
            return self
        idx = [k for k in range(len(self.coeffs)) if (self.start + k) % g == 0]
        first = idx[0] if idx else 0
        arr = self.coeffs[first::g].copy()
        s = (self.start + first) // g if idx else self.prec // g
        if not idx:
            arr = _zeros(0)
        return LaurentSeries(self.ring, self.den // g, s, self.prec // g, arr[: self.prec // g - s])

    def to_ring(self, ring: Ring) -> "LaurentSeries":
        if ring == self.ring:
            return self
        target = join_rings(self.ring, ring)
        if target != ring:
            raise RingMismatch(f"cannot embed {self.ring} series into {ring}")
        if ring.kind == "cyclotomic":
            arr = np.array([coerce(c, ring) for c in self.coeffs], dtype=object)
        else:
            arr = self.coeffs.copy()
        return LaurentSeries(ring, self.den, self.start, self.prec, arr, trim=False)

    def truncate(self, order) -> "LaurentSeries":
        o = _frac(order)
        common = _lcm(self.den, o.denominator)
        s = self.with_den(common)
        p = min(_units(o, common), s.prec)
        if p <= s.start:
            return LaurentSeries(s.ring, common, p, p, _zeros(0))
        return LaurentSeries(s.ring, common, s.start, p, s.coeffs[: p - s.start].copy())

    def map_coefficients(self, fn, ring: Optional[Ring] = None) -> "LaurentSeries":
        arr = np.array([fn(c) for c in self.coeffs], dtype=object)
        return LaurentSeries(ring or _ring_of_values(arr), self.den, self.start, self.prec, arr)

    # arithmetic
    def _align(self, other: "LaurentSeries"):
        d = _lcm(self.den, other.den)
        return self.with_den(d), other.with_den(d), join_rings(self.ring, other.ring)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.add_scalar(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        a, b, ring = self._align(other)
        p = min(a.prec, b.prec)
        s = min(a.start, b.start, p)
        arr = _zeros(p - s)
        if a.start < p:
            arr[a.start - s : p - s] += a.coeffs[: p - a.start]
        if b.start < p:
            arr[b.start - s : p - s] += b.coeffs[: p - b.start]
        return LaurentSeries(ring, a.den, s, p, arr)

    __radd__ = __add__

    def add_scalar(self, c) -> "LaurentSeries":
        ring = join_rings(self.ring, ring_of(c))
        if c == 0 or self.prec <= 0:
            return self if ring == self.ring else self.to_ring(ring)
        s = min(self.start, 0)
        arr = _zeros(self.prec - s)
        arr[self.start - s :] += self.coeffs
        arr[-s] += c
        return LaurentSeries(ring, self.den, s, self.prec, arr)

    def __neg__(self):
        return LaurentSeries(self.ring, self.den, self.start, self.prec, -self.coeffs, trim=False)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.add_scalar(-other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        ring = join_rings(self.ring, ring_of(c))
        if c == 0:
            return LaurentSeries(ring, self.den, self.prec, self.prec, _zeros(0))
        if c == 1:
            return self if ring == self.ring else LaurentSeries(ring, self.den, self.start, self.prec, self.coeffs.copy(), trim=False)
        arr = self.coeffs * c
        if isinstance(c, Fraction):
            arr = np.array([exact(x) if isinstance(x, Fraction) else x for x in arr], dtype=object)
        return LaurentSeries(ring, self.den, self.start, self.prec, arr, trim=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(other)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(inverse(other))
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return series_mul(self, series_invert(other))

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return series_invert(self).scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return series_invert(self) ** (-n)
        if n == 0:
            return LaurentSeries.constant(1, self.order - self.min_exponent, self.ring)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else series_mul(result, base)
            n >>= 1
            if n:
                base = series_mul(base, base)
        return result

    def shift(self, exponent) -> "LaurentSeries":
        """Multiply by q^exponent exactly."""
        e = _frac(exponent)
        d = _lcm(self.den, e.denominator)
        s = self.with_den(d)
        k = _units(e, d)
        return LaurentSeries(s.ring, d, s.start + k, s.prec + k, s.coeffs.copy(), trim=False)

    def substitute(self, k: int) -> "LaurentSeries":
        """The series in q^k (q -> q^k), k a positive integer."""
        if not isinstance(k, int) or k <= 0:
            raise ValueError("substitution power must be a positive integer")
        if k == 1:
            return self
        arr = _zeros((self.prec - self.start) * k - (k - 1) if self.prec > self.start else 0)
        arr[::k] = self.coeffs
        # prec scales by k; pad to the new span
        span = self.prec * k - self.start * k
        full = _zeros(span)
        full[: len(arr)] = arr
        return LaurentSeries(self.ring, self.den, self.start * k, self.prec * k, full, trim=False)

    # comparison
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = LaurentSeries.constant(other, self.order)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        return compare_to_depth(self, other, self.order).passed

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def exponent_cosets(self) -> set:
        """Fractional parts of the exponents carrying nonzero coefficients."""
        return {e - math.floor(e) for e, _ in self.items()}


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Truncated product, known below ``min(O_a + m_b, O_b + m_a)``."""
    a, b, ring = a._align(b)
    start = a.start + b.start
    prec = min(a.prec + b.start, b.prec + a.start)
    length = prec - start
    out = _zeros(length)
    if length <= 0 or a.is_zero() or b.is_zero():
        return LaurentSeries(ring, a.den, prec, prec, _zeros(0))
    ac = a.coeffs[:length]
    bc = b.coeffs[:length]
    a_nz = nonzero_positions(ac)
    b_nz = nonzero_positions(bc)
    if len(b_nz) < len(a_nz):
        ac, bc, a_nz = bc, ac, b_nz
    for i in a_nz:
        i = int(i)
        c = ac[i]
        seg = bc[: length - i]
        if c == 1:
            out[i : i + len(seg)] += seg
        elif c == -1:
            out[i : i + len(seg)] -= seg
        else:
            out[i : i + len(seg)] += c * seg
    if ring.kind == "Q":
        out = np.array([exact(x) if isinstance(x, Fraction) else x for x in out], dtype=object)
    return LaurentSeries(ring, a.den, start, prec, out)


def series_invert(a: LaurentSeries) -> LaurentSeries:
    """Multiplicative inverse, known below ``O_a - 2*m_a``."""
    if a.is_zero():
        raise NonUnitLeadingCoefficient("series is zero to its truncation order; cannot invert")
    lead = a.coeffs[0]
    if not is_unit(lead, a.ring):
        raise NonUnitLeadingCoefficient(f"leading coefficient {lead} is not a unit in {a.ring}")
    n = len(a.coeffs)
    inv_lead = inverse(lead)
    b = a.coeffs
    c = _zeros(n)
    c[0] = inv_lead
    nz = [int(k) for k in nonzero_positions(b) if k > 0]
    if len(nz) * 4 < n:
        for m in range(1, n):
            acc = 0
            for j in nz:
                if j > m:
                    break
                acc += b[j] * c[m - j]
            if acc != 0:
                c[m] = exact(-acc * inv_lead) if isinstance(acc, Fraction) else -acc * inv_lead
    else:
        for m in range(1, n):
            acc = np.dot(b[1 : m + 1], c[m - 1 :: -1]) if m > 1 else b[1] * c[0]
            if acc != 0:
                v = -acc * inv_lead
                c[m] = exact(v) if isinstance(v, Fraction) else v
    start = -a.start
    prec = a.prec - 2 * a.start
    return LaurentSeries(a.ring, a.den, start, prec, c)


def dissect(f: LaurentSeries, ell: int) -> List[LaurentSeries]:
    """Split ``f(q) = sum_j q^j A_j(q^ell)`` and return ``[A_0, ..., A_{ell-1}]``."""
    if f.den != 1:
        g = f.reduced()
        if g.den != 1:
            raise FractionalExponents("dissection needs integer exponents")
        f = g
    if ell <= 0:
        raise ValueError("dissection modulus must be positive")
    if ell == 1:
        return [f]
    parts = []
    for j in range(ell):
        # A_j has coefficient f_{ell*k + j} at q^k, known while ell*k + j < prec
        k_lo = -((-(f.start - j)) // ell)
        k_hi = -((-(f.prec - j)) // ell)
        k_lo = min(k_lo, k_hi)
        arr = _zeros(k_hi - k_lo)
        for k in range(k_lo, k_hi):
            e = ell * k + j
            if e >= f.start:
                arr[k - k_lo] = f.coeffs[e - f.start]
        parts.append(LaurentSeries(f.ring, 1, k_lo, k_hi, arr))
    return parts


def reassemble(parts: Sequence[LaurentSeries]) -> LaurentSeries:
    """Inverse of :func:`dissect`."""
    ell = len(parts)
    total = None
    for j, part in enumerate(parts):
        term = part.substitute(ell).shift(j)
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class VerificationOutcome:
    passed: bool
    depth: Fraction
    exponent: Optional[Fraction] = None
    lhs: object = None
    rhs: object = None
    compared: int = 0

    def __bool__(self):
        return self.passed

    def witness(self) -> Optional[dict]:
        if self.passed:
            return None
        return {"exponent": str(self.exponent), "lhs": str(self.lhs), "rhs": str(self.rhs)}


def compare_to_depth(a: LaurentSeries, b: LaurentSeries, depth) -> VerificationOutcome:
    """Compare coefficients at every exponent < depth."""
    d = _frac(depth)
    if d > a.order or d > b.order:
        raise InsufficientTruncation(
            f"depth {d} exceeds known range (orders {a.order} and {b.order})"
        )
    join_rings(a.ring, b.ring)
    da, db, _ = a._align(b)
    common = _lcm(da.den, d.denominator)
    da, db = da.with_den(common), db.with_den(common)
    limit = math.ceil(d * common)
    lo = min(da.start, db.start)
    compared = 0
    for e in range(lo, limit):
        ca = da.coeffs[e - da.start] if e >= da.start else 0
        cb = db.coeffs[e - db.start] if e >= db.start else 0
        compared += 1
        if ca != cb:
            return VerificationOutcome(False, d, Fraction(e, common), ca, cb, compared)
    # exponents from 0 (or the lowest stored one) up to the depth were all checked
    return VerificationOutcome(True, d, compared=max(compared, limit - min(lo, 0)))


class BivariateSeries:
    """Series ``sum_n P_n(z) q^n`` with Laurent polynomials ``P_n`` stored q-major.

    ``rows[n]`` maps z-exponents to nonzero coefficients for ``0 <= n < order``.
    """

    __slots__ = ("ring", "order", "rows")

    def __init__(self, rows: Sequence[Mapping[int, object]], order: Optional[int] = None, ring: Ring = INTEGER):
        self.order = len(rows) if order is None else order
        self.rows = tuple({m: c for m, c in dict(r).items() if c != 0} for r in list(rows)[: self.order])
        if len(self.rows) < self.order:
            self.rows = self.rows + tuple({} for _ in range(self.order - len(self.rows)))
        self.ring = ring

    @classmethod
    def from_dense(cls, grid: np.ndarray, z_offset: int, ring: Ring = INTEGER):
        """``grid[n, j]`` is the coefficient of ``z^(j - z_offset) q^n``."""
        rows = []
        for n in range(grid.shape[0]):
            row = grid[n]
            rows.append({int(j) - z_offset: row[int(j)] for j in nonzero_positions(row)})
        return cls(rows, grid.shape[0], ring)

    def coefficient(self, n: int) -> Dict[int, object]:
        if n >= self.order:
            raise InsufficientTruncation(f"q^{n} is beyond order {self.order}")
        if n < 0:
            return {}
        return dict(self.rows[n])

    def M(self, m: int, n: int):
        return self.coefficient(n).get(m, 0)

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        order = min(self.order, other.order)
        rows = []
        for n in range(order):
            row = dict(self.rows[n])
            for m, c in other.rows[n].items():
                row[m] = row.get(m, 0) + c
            rows.append(row)
        return BivariateSeries(rows, order, join_rings(self.ring, other.ring))

    def scale_by_series(self, f: LaurentSeries) -> "BivariateSeries":
        """Multiply by a univariate series with integer exponents."""
        f = f.reduced()
        if f.den != 1:
            raise FractionalExponents("bivariate series use integer q-exponents")
        v = 0
        if not f.is_zero():
            v = f.start
        order = min(self.order + v, f.prec)
        first_row = next((n for n in range(self.order) if self.rows[n]), self.order)
        order = min(order, f.prec + first_row)
        rows = [dict() for _ in range(max(order, 0))]
        for e, c in f.items():
            e = int(e)
            for n in range(max(0, -e), max(order - e, 0)):
                if n >= self.order:
                    break
                tgt = rows[n + e]
                for m, x in self.rows[n].items():
                    tgt[m] = tgt.get(m, 0) + c * x
        return BivariateSeries(rows, max(order, 0), join_rings(self.ring, f.ring))

    def at_z_equals_one(self) -> LaurentSeries:
        return LaurentSeries.from_coeffs([sum(r.values()) for r in self.rows], 0, self.order)

    def symmetric(self) -> bool:
        return all(r.get(-m, 0) == c for r in self.rows for m, c in r.items())

    def __repr__(self):
        return f"BivariateSeries(order={self.order})"


def eval_z_at_root(f: BivariateSeries, ell: int) -> LaurentSeries:
    """Evaluate every z-coefficient at z = zeta_ell."""
    ring = cyclotomic(ell)
    out = _zeros(f.order)
    for n, row in enumerate(f.rows):
        buckets = [0] * ell
        for m, c in row.items():
            buckets[m % ell] += c
        if any(buckets):
            top = buckets[ell - 1]
            out[n] = CyclotomicNumber._raw(ell, tuple(exact(buckets[j] - top) for j in range(ell - 1)))
        else:
            out[n] = CyclotomicNumber.scalar(ell, 0)
    return LaurentSeries(ring, 1, 0, f.order, out)
