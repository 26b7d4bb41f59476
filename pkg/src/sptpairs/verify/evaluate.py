"""Turning registry expression trees into exact truncated series.

Values are numbers (int, Fraction, CyclotomicNumber), :class:`ProductForm`
objects (kept symbolic as long as possible) or :class:`LaurentSeries`.
``Evaluator.value(node, D)`` returns a value whose series is correct for every
exponent below ``D``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .. import bailey, qfunctions as qf
from ..exactring import CyclotomicNumber, RATIONAL, cyclotomic, inverse, zeta
from ..qfunctions import ProductForm
from ..series import LaurentSeries, series_invert, series_mul
from .sexpr import Node, dump


class EvaluationError(ValueError):
    pass


Number = (int, Fraction, CyclotomicNumber)


def _num(x, what="argument") -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise EvaluationError(f"{what} must be a rational number, got {dump(x)}")
    return Fraction(x)


def _int(x, what="argument") -> int:
    v = _num(x, what)
    if v.denominator != 1:
        raise EvaluationError(f"{what} must be an integer, got {v}")
    return v.numerator


def _as_series(v, order) -> LaurentSeries:
    if isinstance(v, LaurentSeries):
        return v
    if isinstance(v, ProductForm):
        return v.expand(order)
    return LaurentSeries.constant(v, order)


def _eta_token(tok: str) -> ProductForm:
    """``27:6``, ``27:6^2``, ``1:0^1/2``, ``eta:5^-1`` or ``q^22``."""
    base, _, power = tok.partition("^")
    r = Fraction(power) if power else Fraction(1)
    if base == "q":
        return ProductForm.q_power(r)
    head, sep, tail = base.partition(":")
    if not sep:
        raise EvaluationError(f"cannot read eta token {tok!r}")
    if head == "eta":
        pf = ProductForm.eta(int(tail))
    else:
        pf = ProductForm.geta(int(head), int(tail))
    return pf ** r


def eta_quotient(coef, tokens: Sequence[str]) -> ProductForm:
    pf = ProductForm.scalar(coef)
    sign = 1
    for tok in tokens:
        if tok == "/":
            sign = -1
            continue
        f = _eta_token(str(tok))
        pf = pf * f if sign > 0 else pf / f
    return pf


class Evaluator:
    def __init__(self, ell: Optional[int] = None):
        self.ell = ell
        self.memo: Dict[Tuple[Node, Fraction], object] = {}

    # public
    def series(self, node: Node, order) -> LaurentSeries:
        order = Fraction(order)
        return _as_series(self.value(node, order), order)

    def value(self, node: Node, order) -> object:
        order = Fraction(order)
        key = (node, order)
        if key not in self.memo:
            self.memo[key] = self._eval(node, order)
        return self.memo[key]

    # dispatch
    def _zeta(self, k=1):
        if self.ell is None:
            raise EvaluationError("zeta used in an entry without a cyclotomic ring")
        return zeta(self.ell, k)

    def _eval(self, node: Node, D: Fraction):
        if isinstance(node, bool):
            raise EvaluationError("booleans are not values")
        if isinstance(node, (int, Fraction)):
            return node
        if isinstance(node, str):
            if node == "zeta":
                return self._zeta()
            raise EvaluationError(f"unbound symbol {node!r}")
        head, args = node[0], node[1:]
        fn = getattr(self, "_op_" + str(head).replace("-", "_"), None) if isinstance(head, str) else None
        if head == "+":
            return self._sum(args, D)
        if head == "-":
            if len(args) == 1:
                return self._product([(args[0], 1)], D, scale=-1)
            return self._sum(args[:1], D, subtract=args[1:])
        if head == "*":
            return self._product([(a, 1) for a in args], D)
        if head == "/":
            return self._product([(args[0], 1)] + [(a, -1) for a in args[1:]], D)
        if head == "^":
            n = _num(args[1], "power")
            if n.denominator != 1:
                base = self.value(args[0], D)
                if not isinstance(base, ProductForm):
                    raise EvaluationError("rational powers need a product")
                return base ** n
            n = n.numerator
            if n == 0:
                return 1
            return self._product([(args[0], 1 if n > 0 else -1)] * abs(n), D)
        if fn is None:
            raise EvaluationError(f"unknown operator {head!r}")
        return fn(D, *args)

    # arithmetic
    def _sum(self, args, D, subtract=()):
        vals = [self.value(a, D) for a in args]
        negs = [self.value(a, D) for a in subtract]
        if all(isinstance(v, Number) for v in vals + negs):
            return sum(vals) - sum(negs)
        total = LaurentSeries.zero(D)
        for v in vals:
            total = total + _as_series(v, D)
        for v in negs:
            total = total - _as_series(v, D)
        return total.truncate(D) if total.order > D else total

    def _factor(self, node, sgn, T):
        v = self.value(node, T)
        if sgn > 0:
            return v
        if isinstance(v, Number):
            if v == 0:
                raise EvaluationError(f"division by zero in {dump(node)}")
            return inverse(v)
        if isinstance(v, ProductForm):
            return v.inverse()
        m = v.min_exponent
        if v.order - 2 * m < T:
            v = self.value(node, T + 2 * m)
        return series_invert(v)

    def _product(self, factors: List[Tuple[Node, int]], D, scale=1):
        demands = [D] * len(factors)
        for _ in range(12):
            vals = [self._factor(n, s, T) for (n, s), T in zip(factors, demands)]
            pf = ProductForm.scalar(scale)
            series = []
            for i, v in enumerate(vals):
                if isinstance(v, LaurentSeries):
                    series.append(i)
                else:
                    pf = pf * v
            if not series:
                if not pf.finite and not pf.infinite and pf.qexp == 0:
                    return pf.coeff
                return pf
            if pf.coeff == 0:
                return LaurentSeries.zero(D)
            p = pf.qexp
            lows = {i: vals[i].min_exponent for i in series}
            ok = True
            for i in series:
                need = D - p - sum(lows[j] for j in series if j != i)
                if vals[i].order < need:
                    demands[i] = max(need, demands[i] + 1)
                    ok = False
            if ok:
                break
        else:
            raise EvaluationError("product factors did not settle on a common truncation")
        acc = vals[series[0]]
        for i in series[1:]:
            acc = series_mul(acc, vals[i])
        out = acc if (pf.is_scalar and pf.coeff == 1) else pf.apply_to(acc)
        return out.truncate(D) if out.order > D else out

    # leaves: products
    def _op_zeta(self, D, k=1):
        return self._zeta(_int(k, "zeta power"))

    def _op_q(self, D, e):
        return ProductForm.q_power(_num(e, "q exponent"))

    def _op_qinf(self, D, d):
        return ProductForm.qinf(_num(d, "qinf base"))

    def _op_poch(self, D, a, b, n=None):
        if n is None:
            return ProductForm.poch_inf(_num(a), _num(b))
        return ProductForm.poch_finite(_num(a), _num(b), _int(n, "length"))

    def _op_jac(self, D, base, *exps):
        pf = ProductForm()
        for e in exps:
            pf = pf * ProductForm.jac(_num(e, "jac exponent"), _num(base, "jac base"))
        return pf

    def _op_geta(self, D, d, g):
        return ProductForm.geta(_int(d), _int(g))

    def _op_eta(self, D, d):
        return ProductForm.eta(_int(d))

    def _op_etaq(self, D, coef, *tokens):
        return eta_quotient(self.value(coef, D), tokens)

    def _op_crank(self, D, ell):
        return bailey.crank_product_form(_int(ell))

    def _op_sub(self, D, k, body):
        k = _int(k, "substitution power")
        if k <= 0:
            raise EvaluationError("substitution power must be positive")
        v = self.value(body, D / k)
        if isinstance(v, Number):
            return v
        return v.substitute(k)

    # leaves: series
    def _op_pent(self, D, base=1):
        return qf.euler_pentagonal(D, _num(base))

    def _op_S(self, D, a, b, c):
        return qf.lambert_S(_num(a), _num(b), _num(c), D)

    def _op_T(self, D, a, b, c):
        return qf.lambert_T(_num(a), _num(b), _num(c), D)

    def _op_Sstar(self, D, b, c):
        return qf.s_star(_num(b), _num(c), D)

    def _op_Tstar(self, D, b, c):
        return qf.t_star(_num(b), _num(c), D)

    def _op_U(self, D, a, ell, b):
        return qf.U_series(_num(a), _num(ell), _num(b), D)

    def _op_V(self, D, a, ell, b):
        return qf.V_series(_num(a), _num(ell), _num(b), D)

    def _op_g(self, D, s, c):
        return qf.g_series(_num(s), _num(c), D)

    def _op_h(self, D, s, c):
        return qf.h_series(_num(s), _num(c), D)

    def _op_vchi(self, D, s):
        return qf.v_chi1(_int(s), D)

    def _op_rootpair(self, D, ell, a, b, c, s, t):
        return bailey.root_pair_sum(_int(ell), a, b, c, s, t, _ceil(D))

    def _op_ppuv(self, D, i, ell):
        return bailey.pp_uv_at_root(_int(i), _int(ell), _ceil(D))

    def _op_ppalpha(self, D, i, ell):
        return bailey.pp_alpha_at_root(_int(i), _int(ell), _ceil(D))

    def _op_ppdirect(self, D, i, ell):
        return bailey.pp_direct_at_root(_int(i), _int(ell), _ceil(D))

    def _op_ppseries(self, D, i):
        return bailey.pp_series(_int(i), _ceil(D))


def _ceil(D: Fraction) -> int:
    return max(int(math.ceil(D)), 0)


def summands(node: Node) -> List[Node]:
    """Top-level additive pieces of an expression."""
    if isinstance(node, tuple) and node and node[0] == "+":
        out = []
        for a in node[1:]:
            out += summands(a)
        return out
    if isinstance(node, tuple) and node and node[0] == "-":
        if len(node) == 2:
            return summands(node[1])
        out = summands(node[1])
        for a in node[2:]:
            out += summands(a)
        return out
    return [node]


def cosets_of(value, order) -> set:
    """Fractional parts of the exponents a value can carry."""
    if isinstance(value, Number):
        return set() if value == 0 else {Fraction(0)}
    if isinstance(value, ProductForm):
        if value.coeff == 0:
            return set()
        if value.den() == 1 or all(
            Fraction(k).denominator == 1 for (_, k) in value.finite
        ) and all(Fraction(a).denominator == 1 and Fraction(b).denominator == 1 for (_, a, b) in value.infinite):
            return {value.qexp - math.floor(value.qexp)}
        return value.expand(order).exponent_cosets()
    return value.exponent_cosets()
