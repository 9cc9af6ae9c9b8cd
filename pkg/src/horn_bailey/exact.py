"""Exact arithmetic: rationals, sparse multivariate polynomials, unreduced
rational functions and elements of quadratic number fields.

Everything here is immutable.  Rational functions are never reduced to
lowest terms; equality is decided by cross-multiplication.
"""
from __future__ import annotations

from fractions import Fraction
from operator import add
from typing import Dict, Iterable, Mapping, Tuple, Union

from gmpy2 import mpq

Rational = type(mpq(0))

SYMBOL_NAMES = (
    "a", "b", "c", "d", "q0", "q1", "q",
    "s", "t", "u", "v", "x", "y", "w", "z", "sigma",
    "xdot", "ydot", "udot", "vdot", "xddot", "yddot",
)


class UnknownSymbolError(KeyError):
    pass


class Symbol:
    """A registered variable name.  Instances are unique per name."""

    __slots__ = ("name", "index")

    def __init__(self, name: str, index: int):
        self.name = name
        self.index = index

    def __repr__(self):
        return self.name

    def __lt__(self, other: "Symbol"):
        return self.index < other.index

    def __reduce__(self):
        return (symbol, (self.name,))


_REGISTRY = {name: Symbol(name, i) for i, name in enumerate(SYMBOL_NAMES)}


def symbol(name: Union[str, Symbol]) -> Symbol:
    if isinstance(name, Symbol):
        return name
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownSymbolError(f"unknown symbol {name!r}") from None


def symbols(names: str):
    return tuple(symbol(n) for n in names.replace(",", " ").split())


def Q(value, den=None) -> Rational:
    """Coerce ints, strings like ``"3/7"``, Fractions and mpq to a Rational.

    Floats are refused: every quantity in this package is exact.
    """
    if isinstance(value, float) or isinstance(den, float):
        raise TypeError("floating point values are not accepted")
    if den is not None:
        return mpq(value, den)
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def format_rational(r) -> str:
    """``p/q`` string form used in reports (q may be 1)."""
    r = Q(r)
    return f"{r.numerator}/{r.denominator}"


Exponent = Tuple[int, ...]


class MultiPoly:
    """Sparse polynomial over the rationals.

    ``vars`` is a tuple of symbols in registry order and ``terms`` maps
    exponent tuples to nonzero coefficients.  Variables that do not occur
    in any term are dropped, so structurally equal polynomials compare equal.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Iterable = (), terms: Mapping[Exponent, object] = None, _trusted=False):
        if _trusted:
            self.vars = vars
            self.terms = terms
            return
        vs = tuple(symbol(v) for v in vars)
        tm: Dict[Exponent, Rational] = {}
        if terms:
            for e, c in terms.items():
                c = Q(c)
                if c:
                    e = tuple(e)
                    if len(e) != len(vs):
                        raise ValueError("exponent length does not match variables")
                    tm[e] = tm.get(e, 0) + c
                    if not tm[e]:
                        del tm[e]
        order = sorted(range(len(vs)), key=lambda i: vs[i].index)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variables")
        if order != list(range(len(vs))):
            vs = tuple(vs[i] for i in order)
            tm = {tuple(e[i] for i in order): c for e, c in tm.items()}
        self.vars, self.terms = _trim(vs, tm)

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = Q(c)
        return cls((), {(): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, name) -> "MultiPoly":
        return cls((symbol(name),), {(1,): Q(1)}, _trusted=True)

    @classmethod
    def monomial(cls, vars, exps, coeff=1) -> "MultiPoly":
        return cls(vars, {tuple(exps): coeff})

    @classmethod
    def coerce(cls, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Rational, Fraction)):
            return cls.const(other)
        return NotImplemented

    # basic queries ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self) -> Rational:
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), Q(0))

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * len(self.vars), Q(0))

    def free_symbols(self):
        return frozenset(self.vars)

    def degree(self, v=None) -> int:
        """Degree in ``v``; total degree when ``v`` is None.  -1 for zero."""
        if not self.terms:
            return -1
        if v is None:
            return max(sum(e) for e in self.terms)
        v = symbol(v)
        if v not in self.vars:
            return 0
        i = self.vars.index(v)
        return max(e[i] for e in self.terms)

    def __len__(self):
        return len(self.terms)

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __add__(self, other):
        other = MultiPoly.coerce(other)
        if other is NotImplemented:
            return other
        vs, a, b = _align(self, other)
        out = dict(a)
        for e, c in b.items():
            r = out.get(e)
            if r is None:
                out[e] = c
            else:
                r = r + c
                if r:
                    out[e] = r
                else:
                    del out[e]
        return _make(vs, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = MultiPoly.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational, Fraction)):
            c = Q(other)
            if not c:
                return MultiPoly.const(0)
            return MultiPoly(self.vars, {e: v * c for e, v in self.terms.items()}, _trusted=True)
        other = MultiPoly.coerce(other)
        if other is NotImplemented:
            return other
        vs, a, b = _align(self, other)
        out: Dict[Exponent, Rational] = {}
        get = out.get
        if len(vs) == 1:
            for (e1,), c1 in a.items():
                for (e2,), c2 in b.items():
                    k = (e1 + e2,)
                    out[k] = get(k, 0) + c1 * c2
        else:
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    k = tuple(map(add, e1, e2))
                    out[k] = get(k, 0) + c1 * c2
        return _make(vs, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        other = MultiPoly.coerce(other)
        if other is NotImplemented:
            return False
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, Fraction)):
            return self * (1 / Q(other))
        return RationalFunction(self, other)

    # calculus and substitution -----------------------------------------
    def diff(self, v) -> "MultiPoly":
        v = symbol(v)
        if v not in self.vars:
            return MultiPoly.const(0)
        i = self.vars.index(v)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                k = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[k] = c * e[i]
        return _make(self.vars, out)

    def evaluate(self, bind: Mapping) -> Rational:
        """Exact value at a full binding of the variables (``poly_eval``)."""
        vals = []
        b = {symbol(k): Q(v) for k, v in bind.items()}
        for v in self.vars:
            if v not in b:
                raise UnboundSymbolError(f"no value bound for symbol {v.name!r}")
            vals.append(b[v])
        total = Q(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def subs(self, mapping: Mapping) -> "MultiPoly":
        """Substitute polynomials (or rationals) for some of the variables."""
        m = {}
        for k, val in mapping.items():
            k = symbol(k)
            if k in self.vars:
                m[k] = val if isinstance(val, MultiPoly) else MultiPoly.const(val)
        if not m:
            return self
        idx = [(i, m[v]) for i, v in enumerate(self.vars) if v in m]
        keep = [i for i, v in enumerate(self.vars) if v not in m]
        keep_vars = tuple(self.vars[i] for i in keep)
        powers = {v: [MultiPoly.const(1)] for v in m}
        # group by the substituted exponents to share products
        groups: Dict[Exponent, Dict[Exponent, Rational]] = {}
        for e, c in self.terms.items():
            se = tuple(e[i] for i, _ in idx)
            groups.setdefault(se, {})[tuple(e[i] for i in keep)] = c
        result = MultiPoly.const(0)
        for se, rest in groups.items():
            prod = MultiPoly(keep_vars, rest, _trusted=True) if keep_vars else MultiPoly.const(rest[()])
            for (i, val), k in zip(idx, se):
                if k:
                    pw = powers[self.vars[i]]
                    while len(pw) <= k:
                        pw.append(pw[-1] * val)
                    prod = prod * pw[k]
            result = result + prod
        return result

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent vector (the largest monomial divisor)."""
        if not self.terms:
            raise ZeroDivisionError("monomial content of the zero polynomial")
        return tuple(min(col) for col in zip(*self.terms)) if self.vars else ()

    def divide_monomial(self, exps: Exponent) -> "MultiPoly":
        if not any(exps):
            return self
        out = {}
        for e, c in self.terms.items():
            k = tuple(x - y for x, y in zip(e, exps))
            if min(k) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[k] = c
        return _make(self.vars, out)

    def coefficients_in(self, v) -> Dict[int, "MultiPoly"]:
        """Split as sum_k coeff_k * v^k; returns {k: coeff_k}."""
        v = symbol(v)
        if v not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(v)
        rest = self.vars[:i] + self.vars[i + 1:]
        buckets: Dict[int, Dict[Exponent, Rational]] = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: _make(rest, d) for k, d in buckets.items()}

    def integer_content(self) -> Rational:
        """Positive rational g with self/g integral and primitive."""
        from math import gcd, lcm
        if not self.terms:
            return Q(1)
        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c.numerator * (den // c.denominator)))
        return Q(g, den)

    # ordering / text ----------------------------------------------------
    def sorted_terms(self):
        """Terms in graded-lex order, highest first."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def leading_coefficient(self) -> Rational:
        if not self.terms:
            return Q(0)
        return self.sorted_terms()[0][1]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v.name if k == 1 else f"{v.name}^{k}" for v, k in zip(self.vars, e) if k
            )
            mag = abs(c)
            if not mono:
                body = _fmt_coeff(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(mag)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


class UnboundSymbolError(KeyError):
    pass


def _fmt_coeff(c: Rational) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _trim(vs, tm):
    if not vs:
        return vs, tm
    used = [False] * len(vs)
    for e in tm:
        for i, k in enumerate(e):
            if k:
                used[i] = True
    if all(used):
        return vs, tm
    idx = [i for i, u in enumerate(used) if u]
    return tuple(vs[i] for i in idx), {tuple(e[i] for i in idx): c for e, c in tm.items()}


def _make(vs, tm) -> MultiPoly:
    vs, tm = _trim(vs, tm)
    return MultiPoly(vs, tm, _trusted=True)


def _align(p: MultiPoly, q: MultiPoly):
    if p.vars == q.vars:
        return p.vars, p.terms, q.terms
    vs = tuple(sorted(set(p.vars) | set(q.vars), key=lambda s: s.index))
    return vs, _remap(p, vs), _remap(q, vs)


def _remap(p: MultiPoly, vs) -> Dict[Exponent, Rational]:
    if p.vars == vs:
        return p.terms
    pos = [vs.index(v) for v in p.vars]
    n = len(vs)
    out = {}
    for e, c in p.terms.items():
        k = [0] * n
        for i, x in zip(pos, e):
            k[i] = x
        out[tuple(k)] = c
    return out


def poly_eval(p: MultiPoly, bind: Mapping) -> Rational:
    return p.evaluate(bind)


def monomial_content(p: MultiPoly) -> Exponent:
    return p.monomial_content()


PolyLike = Union[MultiPoly, int, Rational, Fraction]


class RationalFunction:
    """Quotient ``num/den`` of polynomials, kept unreduced.

    Only cheap normalisations are applied: a shared monomial factor is
    cancelled and the denominator is scaled to be primitive with a positive
    leading coefficient.  These never change the value.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: PolyLike, den: PolyLike = 1, _raw=False):
        num = MultiPoly.coerce(num)
        den = MultiPoly.coerce(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("numerator and denominator must be polynomials")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _raw:
            num, den = _normalise(num, den)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, MultiPoly):
            return cls(other)
        if isinstance(other, (int, Rational, Fraction)):
            return cls(MultiPoly.const(other))
        return NotImplemented

    @classmethod
    def var(cls, name):
        return cls(MultiPoly.var(name))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def free_symbols(self):
        return self.num.free_symbols() | self.den.free_symbols()

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _raw=True)

    def __add__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        if other.den.is_constant():
            return RationalFunction(self.num + other.num * (self.den * (1 / other.den.constant_value())), self.den)
        if self.den.is_constant():
            return other + self
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunction(MultiPoly.const(0))
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = RationalFunction.coerce(other)
        if other is NotImplemented:
            return False
        return ratfunc_eq(self, other)

    __hash__ = None

    def diff(self, v) -> "RationalFunction":
        return ratfunc_diff(self, v)

    def evaluate(self, bind: Mapping) -> Rational:
        d = self.den.evaluate(bind)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the binding")
        return self.num.evaluate(bind) / d

    def subs(self, mapping: Mapping) -> "RationalFunction":
        """Substitute rational functions, polynomials or rationals for symbols."""
        m = {}
        for k, val in mapping.items():
            k = symbol(k)
            if k in self.num.vars or k in self.den.vars:
                val = RationalFunction.coerce(val)
                m[k] = val
        if not m:
            return self
        if all(val.den.is_constant() and val.den.constant_value() == 1 for val in m.values()):
            pm = {k: val.num for k, val in m.items()}
            return RationalFunction(self.num.subs(pm), self.den.subs(pm))
        pm = {k: val.num for k, val in m.items()}
        cache: Dict = {}
        n_num, dn = _subs_homogeneous(self.num, m, pm, cache)
        n_den, dd = _subs_homogeneous(self.den, m, pm, cache)
        top, bottom = n_num, n_den
        for k, val in m.items():
            diff = dd.get(k, 0) - dn.get(k, 0)
            if diff > 0:
                top = top * _power(cache, ("den", k), val.den, diff)
            elif diff < 0:
                bottom = bottom * _power(cache, ("den", k), val.den, -diff)
        return RationalFunction(top, bottom)

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _power(cache, key, base: MultiPoly, k: int) -> MultiPoly:
    pw = cache.setdefault(key, [MultiPoly.const(1)])
    while len(pw) <= k:
        pw.append(pw[-1] * base)
    return pw[k]


def _subs_homogeneous(p: MultiPoly, m, pm, cache):
    """Return (P, degs) with p(subs) = P / prod den_k^degs[k]."""
    degs = {k: p.degree(k) for k in m if k in p.vars}
    if not degs:
        return p, {}
    keys = [k for k in p.vars if k in degs]
    idx = [p.vars.index(k) for k in keys]
    keep = [i for i in range(len(p.vars)) if i not in idx]
    keep_vars = tuple(p.vars[i] for i in keep)
    groups: Dict[Exponent, Dict[Exponent, Rational]] = {}
    for e, c in p.terms.items():
        groups.setdefault(tuple(e[i] for i in idx), {})[tuple(e[i] for i in keep)] = c
    total = MultiPoly.const(0)
    for se, rest in groups.items():
        prod = MultiPoly(keep_vars, rest, _trusted=True) if keep_vars else MultiPoly.const(rest[()])
        for k, e in zip(keys, se):
            if e:
                prod = prod * _power(cache, ("num", k), pm[k], e)
            if degs[k] - e:
                prod = prod * _power(cache, ("den", k), m[k].den, degs[k] - e)
        total = total + prod
    return total, degs


def _normalise(num: MultiPoly, den: MultiPoly):
    if num.is_zero():
        return num, MultiPoly.const(1)
    if den.is_constant():
        c = den.constant_value()
        return num * (1 / c), MultiPoly.const(1)
    # cancel a common monomial factor
    vs = tuple(sorted(set(num.vars) | set(den.vars), key=lambda s: s.index))
    nt, dt = _remap(num, vs), _remap(den, vs)
    cn = tuple(min(col) for col in zip(*nt))
    cd = tuple(min(col) for col in zip(*dt))
    common = tuple(min(a, b) for a, b in zip(cn, cd))
    if any(common):
        num = _make(vs, {tuple(x - y for x, y in zip(e, common)): c for e, c in nt.items()})
        den = _make(vs, {tuple(x - y for x, y in zip(e, common)): c for e, c in dt.items()})
    g = den.integer_content()
    if den.leading_coefficient() < 0:
        g = -g
    if g != 1:
        inv = 1 / g
        num, den = num * inv, den * inv
    return num, den


def ratfunc_eq(f: RationalFunction, g: RationalFunction) -> bool:
    """Exact equality by cross-multiplication; no GCD is ever computed."""
    if f.den == g.den:
        return f.num == g.num
    return (f.num * g.den - g.num * f.den).is_zero()


def ratfunc_diff(f: RationalFunction, v) -> RationalFunction:
    v = symbol(v)
    dn = f.num.diff(v)
    dd = f.den.diff(v)
    if dd.is_zero():
        return RationalFunction(dn, f.den)
    return RationalFunction(dn * f.den - f.num * dd, f.den * f.den)


def total_derivative(f: RationalFunction, rates: Mapping) -> RationalFunction:
    """Chain rule: sum over variables v of (df/dv) * rates[v]."""
    out = RationalFunction(0)
    for v, rate in rates.items():
        if symbol(v) in f.free_symbols():
            out = out + ratfunc_diff(f, v) * RationalFunction.coerce(rate)
    return out


class QuadExtElement:
    """``a0 + a1*theta`` in Q(theta) with theta^2 = p*theta + q."""

    __slots__ = ("a0", "a1", "minpoly")

    def __init__(self, a0, a1, minpoly):
        self.a0 = Q(a0)
        self.a1 = Q(a1)
        self.minpoly = (Q(minpoly[0]), Q(minpoly[1]))

    @classmethod
    def theta(cls, minpoly):
        return cls(0, 1, minpoly)

    def _lift(self, other):
        if isinstance(other, QuadExtElement):
            if other.minpoly != self.minpoly:
                raise ValueError("elements belong to different quadratic extensions")
            return other
        if isinstance(other, (int, Rational, Fraction)):
            return QuadExtElement(other, 0, self.minpoly)
        return NotImplemented

    def is_zero(self):
        return not self.a0 and not self.a1

    def is_rational(self):
        return not self.a1

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return False
        return self.a0 == other.a0 and self.a1 == other.a1

    __hash__ = None

    def __neg__(self):
        return QuadExtElement(-self.a0, -self.a1, self.minpoly)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadExtElement(self.a0 + other.a0, self.a1 + other.a1, self.minpoly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return QuadExtElement(self.a0 - other.a0, self.a1 - other.a1, self.minpoly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p, q = self.minpoly
        a0, a1, b0, b1 = self.a0, self.a1, other.a0, other.a1
        hi = a1 * b1
        return QuadExtElement(a0 * b0 + hi * q, a0 * b1 + a1 * b0 + hi * p, self.minpoly)

    __rmul__ = __mul__

    def norm(self) -> Rational:
        # (a0 + a1 th)(a0 + a1 th') with th + th' = p, th th' = -q
        p, q = self.minpoly
        return self.a0 * self.a0 + self.a0 * self.a1 * p - self.a1 * self.a1 * q

    def conjugate(self):
        p, _ = self.minpoly
        return QuadExtElement(self.a0 + self.a1 * p, -self.a1, self.minpoly)

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in quadratic extension")
        n = self.norm()
        if not n:
            raise ZeroDivisionError("zero divisor: minimal polynomial is reducible")
        c = self.conjugate()
        return QuadExtElement(c.a0 / n, c.a1 / n, self.minpoly)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExtElement(1, 0, self.minpoly)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __repr__(self):
        return f"QuadExtElement({self.a0} + {self.a1}*theta)"


def poly(text: str):
    """Parse a polynomial or rational function from the fixture grammar."""
    from .parser import parse_expression
    return parse_expression(text)


__all__ = [
    "Rational", "Q", "Symbol", "symbol", "symbols", "SYMBOL_NAMES", "format_rational",
    "MultiPoly", "RationalFunction", "QuadExtElement", "poly_eval", "ratfunc_eq",
    "ratfunc_diff", "monomial_content", "total_derivative", "UnknownSymbolError",
    "UnboundSymbolError",
]
