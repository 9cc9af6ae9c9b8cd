"""Truncated multivariate power series over the rationals.

Truncation is by total degree: a series with ``cap = N`` carries every
monomial of total degree <= N and nothing above.
"""
from __future__ import annotations

from operator import add
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import MultiPoly, Q, Rational, RationalFunction, symbol

Exponent = Tuple[int, ...]


class SeriesError(ValueError):
    pass


class NotAUnitError(SeriesError):
    pass


class NotHolomorphicError(SeriesError):
    pass


class TruncatedSeries:
    __slots__ = ("vars", "cap", "terms")

    def __init__(self, vars: Iterable, cap: int, terms: Mapping[Exponent, object] = None, _trusted=False):
        if cap < 0:
            raise ValueError("cap must be nonnegative")
        self.vars = tuple(symbol(v) for v in vars) if not _trusted else vars
        self.cap = cap
        if _trusted:
            self.terms = terms
            return
        tm = {}
        n = len(self.vars)
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError("exponent length does not match variables")
            c = Q(c)
            if c and sum(e) <= cap:
                tm[e] = c
        self.terms = tm

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, vars, cap, c=1):
        vars = tuple(symbol(v) for v in vars)
        c = Q(c)
        return cls(vars, cap, {(0,) * len(vars): c} if c else {}, _trusted=True)

    @classmethod
    def zero(cls, vars, cap):
        return cls(vars, cap, {})

    @classmethod
    def monomial(cls, vars, cap, exps, c=1):
        return cls(vars, cap, {tuple(exps): c})

    @classmethod
    def from_poly(cls, p: MultiPoly, vars, cap) -> "TruncatedSeries":
        vars = tuple(symbol(v) for v in vars)
        extra = set(p.vars) - set(vars)
        if extra:
            raise SeriesError(f"polynomial has symbols {sorted(s.name for s in extra)} outside the series variables")
        pos = [vars.index(v) for v in p.vars]
        out = {}
        for e, c in p.terms.items():
            if sum(e) <= cap:
                k = [0] * len(vars)
                for i, x in zip(pos, e):
                    k[i] = x
                out[tuple(k)] = c
        return cls(vars, cap, out, _trusted=True)

    # queries ------------------------------------------------------------
    def coefficient(self, exps) -> Rational:
        return self.terms.get(tuple(exps), Q(0))

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * len(self.vars), Q(0))

    def valuation(self) -> int:
        if not self.terms:
            return self.cap + 1
        return min(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap >= self.cap:
            return self
        return TruncatedSeries(self.vars, cap, {e: c for e, c in self.terms.items() if sum(e) <= cap}, _trusted=True)

    def to_poly(self) -> MultiPoly:
        return MultiPoly(self.vars, self.terms)

    def _check(self, other):
        if self.vars != other.vars:
            raise SeriesError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
            return TruncatedSeries.const(self.vars, self.cap, other)
        return NotImplemented

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return TruncatedSeries(self.vars, self.cap, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cap = min(self.cap, other.cap)
        out = {e: c for e, c in self.terms.items() if sum(e) <= cap}
        for e, c in other.terms.items():
            if sum(e) > cap:
                continue
            r = out.get(e, 0) + c
            if r:
                out[e] = r
            else:
                out.pop(e, None)
        return TruncatedSeries(self.vars, cap, out, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        c = Q(c)
        if not c:
            return TruncatedSeries.zero(self.vars, self.cap)
        return TruncatedSeries(self.vars, self.cap, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def _by_degree(self, cap) -> List[List[Tuple[Exponent, Rational]]]:
        buckets: List[List] = [[] for _ in range(cap + 1)]
        for e, c in self.terms.items():
            d = sum(e)
            if d <= cap:
                buckets[d].append((e, c))
        return buckets

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, (int, Rational)) or hasattr(other, "denominator"):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        cap = min(self.cap, other.cap)
        a = self._by_degree(cap)
        b = other._by_degree(cap)
        out: Dict[Exponent, Rational] = {}
        get = out.get
        for i, bucket_a in enumerate(a):
            if not bucket_a:
                continue
            for j in range(cap - i + 1):
                bucket_b = b[j]
                for e1, c1 in bucket_a:
                    for e2, c2 in bucket_b:
                        k = tuple(map(add, e1, e2))
                        out[k] = get(k, 0) + c1 * c2
        return TruncatedSeries(self.vars, cap, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return series_inverse(self) ** (-n)
        result = TruncatedSeries.const(self.vars, self.cap, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.vars == other.vars and self.cap == other.cap and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({self.to_poly()} + O(deg {self.cap + 1}))"


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def _one_plus_h(a: TruncatedSeries):
    c0 = a.constant_term()
    zero = (0,) * len(a.vars)
    h = TruncatedSeries(a.vars, a.cap, {e: c for e, c in a.terms.items() if e != zero}, _trusted=True)
    return c0, h


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    c0, h = _one_plus_h(a)
    if not c0:
        raise NotAUnitError("not a unit: constant term is zero")
    h = h.scale(1 / c0)
    # 1/(1+h) = 1 - h(1 - h(1 - ...))
    r = TruncatedSeries.const(a.vars, a.cap, 1)
    for _ in range(a.cap):
        r = 1 - h * r
    return r.scale(1 / c0)


def binomial_coefficients(e, n: int) -> List[Rational]:
    """[C(e,0), ..., C(e,n)] for rational e."""
    e = Q(e)
    out = [Q(1)]
    for k in range(1, n + 1):
        out.append(out[-1] * (e - k + 1) / k)
    return out


def series_pow_rational(a: TruncatedSeries, e) -> TruncatedSeries:
    """(1 + h)^e as a binomial series; the constant term must be exactly 1."""
    c0, h = _one_plus_h(a)
    if c0 != 1:
        raise SeriesError(f"constant term must be 1 for a rational power, got {c0}")
    coeffs = binomial_coefficients(e, a.cap)
    r = TruncatedSeries.const(a.vars, a.cap, coeffs[a.cap])
    for k in range(a.cap - 1, -1, -1):
        r = h * r + coeffs[k]
    return r


def series_diff(a: TruncatedSeries, v) -> TruncatedSeries:
    v = symbol(v)
    if v not in a.vars:
        raise SeriesError(f"{v.name} is not a series variable")
    i = a.vars.index(v)
    cap = max(a.cap - 1, 0)
    out = {}
    for e, c in a.terms.items():
        if e[i] and sum(e) - 1 <= cap:
            out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
    return TruncatedSeries(a.vars, cap, out, _trusted=True)


def series_compose(outer: TruncatedSeries, args: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Substitute ``args[i]`` for the i-th variable of ``outer``.

    Every argument must vanish at the origin.  Outer terms whose weighted
    degree sum(m_i * val(arg_i)) exceeds the cap are skipped.
    """
    if len(args) != len(outer.vars):
        raise SeriesError("one argument per outer variable is required")
    if not args:
        raise SeriesError("no arguments")
    vars, cap = args[0].vars, args[0].cap
    for g in args:
        if g.vars != vars or g.cap != cap:
            raise SeriesError("arguments must share variables and cap")
        if g.constant_term():
            raise SeriesError("argument with nonzero constant term cannot be composed")
    vals = [g.valuation() for g in args]
    powers = [[TruncatedSeries.const(vars, cap, 1)] for _ in args]
    result = TruncatedSeries.zero(vars, cap)
    for e, c in sorted(outer.terms.items()):
        if sum(k * v for k, v in zip(e, vals)) > cap:
            continue
        term = None
        for i, k in enumerate(e):
            if not k:
                continue
            pw = powers[i]
            while len(pw) <= k:
                pw.append(pw[-1] * args[i])
            term = pw[k] if term is None else term * pw[k]
        if term is None:
            term = powers[0][0]
        result = result + term.scale(c)
    return result


def series_of_ratfunc(
    f,
    vars,
    cap: int,
    center: Optional[Mapping] = None,
    subs: Optional[Mapping] = None,
) -> TruncatedSeries:
    """Expand a rational function as a power series in ``vars``.

    ``center`` shifts a variable, ``{s: 1}`` meaning s -> 1 + s; ``subs``
    replaces a symbol by a polynomial in the expansion variables, as in
    s -> -1 + 2*u*v.  A shared monomial factor of numerator and
    denominator is cancelled before inverting; a remaining zero constant
    term in the denominator is reported as a pole.
    """
    f = RationalFunction.coerce(f)
    vars = tuple(symbol(v) for v in vars)
    mapping = {}
    for k, val in (subs or {}).items():
        mapping[symbol(k)] = val if isinstance(val, MultiPoly) else _as_poly(val)
    for k, c in (center or {}).items():
        k = symbol(k)
        base = mapping.get(k, MultiPoly.var(k))
        mapping[k] = base + Q(c)
    num = f.num.subs(mapping)
    den = f.den.subs(mapping)
    if den.is_zero():
        raise NotHolomorphicError("denominator vanishes identically after substitution")
    if num.is_zero():
        return TruncatedSeries.zero(vars, cap)
    nser_full = TruncatedSeries.from_poly(num, vars, 10 ** 9)
    dser_full = TruncatedSeries.from_poly(den, vars, 10 ** 9)
    alpha = tuple(min(col) for col in zip(*nser_full.terms)) if vars else ()
    beta = tuple(min(col) for col in zip(*dser_full.terms)) if vars else ()
    shift = tuple(a - b for a, b in zip(alpha, beta))
    if any(k < 0 for k in shift):
        raise NotHolomorphicError(f"not holomorphic at center: pole along monomial {shift}")
    d = sum(shift)
    if d > cap:
        return TruncatedSeries.zero(vars, cap)
    inner = cap - d
    n_unit = _divide_monomial(nser_full, alpha, inner)
    d_unit = _divide_monomial(dser_full, beta, inner)
    if not d_unit.constant_term():
        raise NotHolomorphicError("not holomorphic at center: denominator is not a unit after monomial cancellation")
    q = n_unit * series_inverse(d_unit)
    out = {tuple(map(add, e, shift)): c for e, c in q.terms.items()}
    return TruncatedSeries(vars, cap, out, _trusted=True)


def _as_poly(val) -> MultiPoly:
    if isinstance(val, RationalFunction):
        if not (val.den.is_constant()):
            raise SeriesError("substitutions must be polynomial")
        return val.num * (1 / val.den.constant_value())
    return MultiPoly.const(val)


def _divide_monomial(s: TruncatedSeries, mono, cap) -> TruncatedSeries:
    out = {}
    for e, c in s.terms.items():
        k = tuple(x - y for x, y in zip(e, mono))
        if sum(k) <= cap:
            out[k] = c
    return TruncatedSeries(s.vars, cap, out, _trusted=True)


def first_mismatch(a: TruncatedSeries, b: TruncatedSeries):
    """Lowest-degree monomial where ``a`` and ``b`` differ, or None.

    Returns (exponent, coeff_a, coeff_b); ties broken in graded-lex order.
    """
    a._check(b)
    cap = min(a.cap, b.cap)
    keys = {e for e in a.terms if sum(e) <= cap} | {e for e in b.terms if sum(e) <= cap}
    bad = [e for e in keys if a.coefficient(e) != b.coefficient(e)]
    if not bad:
        return None
    e = min(bad, key=lambda k: (sum(k), tuple(-x for x in k)))
    return e, a.coefficient(e), b.coefficient(e)


def monomial_text(vars, exps) -> str:
    names = [symbol(v).name for v in vars]
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, exps) if k]
    return "*".join(parts) or "1"
