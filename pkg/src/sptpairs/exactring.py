"""Exact coefficient rings: integers, rationals and the cyclotomic field Q(zeta_l).

Integers and rationals are the builtin ``int`` and ``fractions.Fraction``.
:class:`CyclotomicNumber` stores an element of Q(zeta_l), l an odd prime, in
the power basis ``1, zeta, ..., zeta^(l-2)``.  Internally products are formed
in Q[x]/(x^l - 1) and the coefficient of ``zeta^(l-1)`` is then eliminated
with ``1 + zeta + ... + zeta^(l-1) = 0``.

Coordinates are kept as ``int`` whenever they are integral, which keeps the
common case (elements of Z[zeta]) on the fast integer path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from sympy import isprime

Scalar = Union[int, Fraction, "CyclotomicNumber"]


class ExactRingError(ArithmeticError):
    """Base class for coefficient-ring errors."""


class NonPrimeOrder(ExactRingError, ValueError):
    pass


class OrderMismatch(ExactRingError, TypeError):
    pass


class DivisionByZero(ExactRingError, ZeroDivisionError):
    pass


class RingMismatch(ExactRingError, TypeError):
    pass


def _tidy(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def _check_order(order: int) -> int:
    if not isinstance(order, int) or order < 3 or not isprime(order):
        raise NonPrimeOrder(f"cyclotomic order must be an odd prime, got {order!r}")
    return order


class CyclotomicNumber:
    """An element ``a0 + a1*zeta + ... + a_{l-2}*zeta^(l-2)`` of Q(zeta_l)."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords: Iterable = ()):
        _check_order(order)
        vals = [_tidy(Fraction(c) if not isinstance(c, int) else c) for c in coords]
        if len(vals) > order - 1:
            vals = _reduce_full(order, vals)
        vals.extend([0] * (order - 1 - len(vals)))
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coords", tuple(vals))

    @classmethod
    def _raw(cls, order: int, coords: tuple) -> "CyclotomicNumber":
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coords", coords)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # construction helpers
    @classmethod
    def root_power(cls, order: int, k: int) -> "CyclotomicNumber":
        return cyclo_from_root_power(order, k)

    @classmethod
    def scalar(cls, order: int, value) -> "CyclotomicNumber":
        _check_order(order)
        return cls._raw(order, (_tidy(value),) + (0,) * (order - 2))

    # predicates
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def is_integral(self) -> bool:
        """True when every power-basis coordinate is an integer (i.e. in Z[zeta])."""
        return all(isinstance(c, int) for c in self.coords)

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coords[0]

    # arithmetic
    def _coerce(self, other) -> "CyclotomicNumber | None":
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise OrderMismatch(f"orders {self.order} and {other.order} differ")
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return CyclotomicNumber._raw(self.order, (_tidy(other),) + (0,) * (self.order - 2))
        return None

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.coords
            return CyclotomicNumber._raw(self.order, (_tidy(c[0] + other),) + c[1:])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber._raw(
            self.order, tuple(_tidy(x + y) for x, y in zip(self.coords, o.coords))
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.order, tuple(-x for x in self.coords))

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.coords
            return CyclotomicNumber._raw(self.order, (_tidy(c[0] - other),) + c[1:])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber._raw(
            self.order, tuple(_tidy(x - y) for x, y in zip(self.coords, o.coords))
        )

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CyclotomicNumber._raw(self.order, (0,) * (self.order - 1))
            return CyclotomicNumber._raw(self.order, tuple(_tidy(x * other) for x in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return CyclotomicNumber._raw(
                self.order, tuple(_tidy(Fraction(x) / other) for x in self.coords)
            )
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(self, cyclo_inverse(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return cyclo_mul(o, cyclo_inverse(self))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return cyclo_inverse(self) ** (-n)
        result = CyclotomicNumber.scalar(self.order, 1)
        base = self
        while n:
            if n & 1:
                result = cyclo_mul(result, base)
            base = cyclo_mul(base, base)
            n >>= 1
        return result

    def galois(self, k: int) -> "CyclotomicNumber":
        """Apply the automorphism zeta -> zeta^k (k prime to the order)."""
        ell = self.order
        if k % ell == 0:
            raise ValueError("k must be prime to the order")
        full = [0] * ell
        for j, c in enumerate(self.coords):
            full[(j * k) % ell] += c
        return CyclotomicNumber._raw(ell, tuple(_reduce_full(ell, full)))

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def norm(self):
        result = CyclotomicNumber.scalar(self.order, 1)
        for k in range(1, self.order):
            result = cyclo_mul(result, self.galois(k))
        return result.rational_value()

    # comparison and hashing
    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.order == other.order and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.order, self.coords))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {list(self.coords)!r})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                mono = "z" if k == 1 else f"z^{k}"
                if c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"({c})*{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _reduce_full(order: int, full: Sequence) -> list:
    """Reduce a coefficient list of any length modulo x^l - 1 and then Phi_l."""
    buf = [0] * order
    for j, c in enumerate(full):
        buf[j % order] += c
    top = buf[order - 1]
    return [_tidy(buf[j] - top) for j in range(order - 1)]


def cyclo_from_root_power(order: int, k: int) -> CyclotomicNumber:
    """Return zeta_l^k in the canonical power basis."""
    _check_order(order)
    k %= order
    if k == order - 1:
        return CyclotomicNumber._raw(order, (-1,) * (order - 1))
    coords = [0] * (order - 1)
    coords[k] = 1
    return CyclotomicNumber._raw(order, tuple(coords))


def cyclo_mul(a: CyclotomicNumber, b: CyclotomicNumber) -> CyclotomicNumber:
    if not isinstance(a, CyclotomicNumber) or not isinstance(b, CyclotomicNumber):
        raise TypeError("cyclo_mul expects two CyclotomicNumber values")
    ell = a.order
    if b.order != ell:
        raise OrderMismatch(f"orders {a.order} and {b.order} differ")
    buf = [0] * ell
    bc = b.coords
    for i, x in enumerate(a.coords):
        if x == 0:
            continue
        for j, y in enumerate(bc):
            if y:
                buf[(i + j) % ell] += x * y
    top = buf[ell - 1]
    return CyclotomicNumber._raw(ell, tuple(_tidy(buf[j] - top) for j in range(ell - 1)))


def cyclo_inverse(a: CyclotomicNumber) -> CyclotomicNumber:
    """Multiplicative inverse, found by solving the multiplication-by-a system."""
    if a.is_zero():
        raise DivisionByZero("zero has no inverse")
    ell = a.order
    dim = ell - 1
    if a.is_rational():
        return CyclotomicNumber.scalar(ell, Fraction(1) / Fraction(a.coords[0]))
    # column j of the matrix is a * zeta^j
    cols = [cyclo_mul(a, cyclo_from_root_power(ell, j)).coords for j in range(dim)]
    rows = [[Fraction(cols[j][i]) for j in range(dim)] + [Fraction(int(i == 0))] for i in range(dim)]
    for col in range(dim):
        pivot = next(r for r in range(col, dim) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [v / pv for v in rows[col]]
        for r in range(dim):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return CyclotomicNumber._raw(ell, tuple(_tidy(rows[i][dim]) for i in range(dim)))


@dataclass(frozen=True)
class Ring:
    """Tag for a coefficient ring: ``Z``, ``Q`` or ``Q(zeta_l)``."""

    kind: str
    order: int = 0

    def __str__(self):
        return f"Q(zeta_{self.order})" if self.kind == "cyclotomic" else self.kind

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"


INTEGER = Ring("Z")
RATIONAL = Ring("Q")


def cyclotomic(order: int) -> Ring:
    return Ring("cyclotomic", _check_order(order))


def join_rings(a: Ring, b: Ring) -> Ring:
    if a == b:
        return a
    if a.kind == "cyclotomic" and b.kind == "cyclotomic":
        raise RingMismatch(f"cannot combine {a} and {b}")
    if a.kind == "cyclotomic":
        return a
    if b.kind == "cyclotomic":
        return b
    return RATIONAL


def ring_of(value) -> Ring:
    if isinstance(value, bool):
        raise TypeError("booleans are not ring elements")
    if isinstance(value, int):
        return INTEGER
    if isinstance(value, Fraction):
        return INTEGER if value.denominator == 1 else RATIONAL
    if isinstance(value, CyclotomicNumber):
        return cyclotomic(value.order)
    raise TypeError(f"unsupported coefficient {value!r}")


def coerce(value, ring: Ring):
    """Embed ``value`` into ``ring`` (int -> Fraction -> CyclotomicNumber)."""
    if ring.kind == "cyclotomic":
        if isinstance(value, CyclotomicNumber):
            if value.order != ring.order:
                raise RingMismatch(f"cannot embed {ring_of(value)} into {ring}")
            return value
        return CyclotomicNumber.scalar(ring.order, value)
    if isinstance(value, CyclotomicNumber):
        if value.is_rational():
            return coerce(value.coords[0], ring)
        raise RingMismatch(f"cannot embed {value} into {ring}")
    if ring.kind == "Z":
        v = _tidy(Fraction(value))
        if not isinstance(v, int):
            raise RingMismatch(f"{value} is not an integer")
        return v
    return _tidy(Fraction(value))


def is_unit(value, ring: Ring) -> bool:
    if value == 0:
        return False
    if ring.kind == "Z":
        return value in (1, -1)
    return True


def inverse(value):
    if isinstance(value, CyclotomicNumber):
        return cyclo_inverse(value)
    if value == 0:
        raise DivisionByZero("division by zero")
    return _tidy(Fraction(1) / Fraction(value))


def zeta(order: int, k: int = 1) -> CyclotomicNumber:
    return cyclo_from_root_power(order, k)


def exact(value):
    """Normalise a Fraction with denominator 1 to int."""
    return _tidy(value)
