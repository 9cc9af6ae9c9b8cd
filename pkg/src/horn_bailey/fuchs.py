"""Local analysis of second-order Fuchsian equations.

Everything here works with a single free variable: any other symbol
(s, q0, ...) must be bound to a rational before singular points are
located.  Univariate polynomials get a small dense representation so that
numerator and denominator can be reduced by a GCD and their denominators
split into linear and quadratic factors over the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import gmpy2
import mpmath

from .exact import MultiPoly, Q, QuadExtElement, Rational, RationalFunction, format_rational, ratfunc_diff, symbol
from .parser import parse_ratfunc
from .reduce import ODE2


class FuchsError(ValueError):
    pass


class FactorizationError(FuchsError):
    pass


class IrregularSingularityError(FuchsError):
    pass


# --------------------------------------------------------------------------
# dense univariate polynomials, coefficients low degree first

class UPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable):
        c = [Q(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def from_multipoly(cls, p: MultiPoly, var) -> "UPoly":
        v = symbol(var)
        extra = p.free_symbols() - {v}
        if extra:
            names = ", ".join(sorted(s.name for s in extra))
            raise FuchsError(f"unbound symbols {names}; bind them before local analysis")
        if not p.vars:
            return cls([p.constant_term()])
        i = p.vars.index(v)
        coeffs = [Q(0)] * (p.degree(v) + 1)
        for e, c in p.terms.items():
            coeffs[e[i]] += c
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Rational:
        return self.c[-1]

    def monic(self) -> "UPoly":
        lc = self.lead()
        return UPoly(x / lc for x in self.c)

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __mul__(self, other: "UPoly") -> "UPoly":
        if not self.c or not other.c:
            return UPoly([])
        out = [Q(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return UPoly(out)

    def divmod(self, other: "UPoly") -> Tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return UPoly([]), self
        q = [Q(0)] * (dq + 1)
        lc = other.lead()
        for k in range(dq, -1, -1):
            f = r[k + len(other.c) - 1] / lc
            q[k] = f
            if f:
                for j, b in enumerate(other.c):
                    r[k + j] -= f * b
        return UPoly(q), UPoly(r[: len(other.c) - 1])

    def exact_div(self, other: "UPoly") -> Optional["UPoly"]:
        q, r = self.divmod(other)
        return q if r.is_zero() else None

    def derivative(self) -> "UPoly":
        return UPoly(i * x for i, x in enumerate(self.c) if i)

    def __call__(self, x):
        acc = Q(0) if not isinstance(x, QuadExtElement) else QuadExtElement(0, 0, x.minpoly)
        for coeff in reversed(self.c):
            acc = acc * x + coeff
        return acc

    def __str__(self):
        t = RationalFunction.var("t").num
        out = MultiPoly.const(0)
        for i, x in enumerate(self.c):
            out = out + x * t ** i
        return str(out)


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: UPoly) -> UPoly:
    g = upoly_gcd(p, p.derivative())
    return p.divmod(g)[0].monic()


def multiplicity(p: UPoly, m: UPoly) -> Tuple[int, UPoly]:
    k = 0
    while p.degree >= m.degree:
        q = p.exact_div(m)
        if q is None:
            break
        p, k = q, k + 1
    return k, p


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _rationalize(x, bound=10 ** 15) -> Rational:
    f = Fraction(mpmath.nstr(x, 60, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)).limit_denominator(bound)
    return Q(f.numerator, f.denominator)


def factor_degree_two(p: UPoly) -> List[UPoly]:
    """Distinct monic irreducible factors of ``p``, all of degree 1 or 2.

    Roots are isolated numerically and every candidate factor is certified
    by exact division; anything left over raises FactorizationError.
    """
    rest = squarefree_part(p)
    if rest.degree <= 0:
        return []
    with mpmath.workdps(80):
        coeffs = [mpmath.mpf(_to_fraction(x).numerator) / _to_fraction(x).denominator for x in reversed(rest.c)]
        roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=800) if rest.degree > 1 else [-coeffs[1] / coeffs[0]]
        roots = list(roots)
        factors: List[UPoly] = []
        pending = []
        for r in roots:
            r = mpmath.mpc(r)
            if abs(r.imag) < mpmath.mpf(10) ** -40:
                cand = _rationalize(r.real)
                lin = UPoly([-cand, 1])
                q = rest.exact_div(lin)
                if q is not None:
                    factors.append(lin)
                    rest = q
                    continue
            pending.append(r)
        while pending:
            r0 = pending.pop(0)
            for j, r1 in enumerate(pending):
                quad = UPoly([_rationalize((r0 * r1).real), -_rationalize((r0 + r1).real), 1])
                q = rest.exact_div(quad)
                if q is not None:
                    factors.append(quad)
                    rest = q
                    pending.pop(j)
                    break
            else:
                raise FactorizationError(f"denominator factor of degree >= 3 (or unresolved root {mpmath.nstr(r0, 12)})")
    if rest.degree > 0:
        raise FactorizationError("could not split denominator into factors of degree <= 2")
    return factors


def _is_rational_square(x: Rational) -> bool:
    return x >= 0 and gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)


def _rational_sqrt(x: Rational) -> Rational:
    return Q(int(gmpy2.isqrt(x.numerator)), int(gmpy2.isqrt(x.denominator)))


# --------------------------------------------------------------------------
# singular points

@dataclass(frozen=True)
class SingularPoint:
    """A rational point, the two roots of an irreducible monic quadratic
    t^2 + b t + c (``value`` = (b, c)), or infinity."""

    kind: str
    value: Union[Rational, Tuple[Rational, Rational], None] = None

    def __post_init__(self):
        if self.kind not in ("rational", "quadratic", "infinity"):
            raise ValueError(f"unknown point kind {self.kind!r}")
        if self.kind == "quadratic":
            b, c = (Q(x) for x in self.value)
            if _is_rational_square(b * b - 4 * c):
                raise ValueError("quadratic point must have an irreducible minimal polynomial")
            object.__setattr__(self, "value", (b, c))
        elif self.kind == "rational":
            object.__setattr__(self, "value", Q(self.value))

    @classmethod
    def infinity(cls) -> "SingularPoint":
        return cls("infinity")

    def minpoly(self) -> UPoly:
        if self.kind == "rational":
            return UPoly([-self.value, 1])
        if self.kind == "quadratic":
            b, c = self.value
            return UPoly([c, b, 1])
        raise FuchsError("infinity has no minimal polynomial")

    def describe(self, var: str = "t") -> str:
        if self.kind == "infinity":
            return f"{var} = infinity"
        if self.kind == "rational":
            return f"{var} = {Q(self.value)}"
        b, c = self.value
        return f"roots of {var}^2 + {Q(b)}*{var} + {Q(c)}"


def _reduced(f: RationalFunction, var) -> Tuple[UPoly, UPoly]:
    num = UPoly.from_multipoly(f.num, var)
    den = UPoly.from_multipoly(f.den, var)
    if num.is_zero():
        return num, UPoly([1])
    g = upoly_gcd(num, den)
    return num.divmod(g)[0], den.divmod(g)[0]


def at_infinity(ode: ODE2) -> ODE2:
    """The equation after t = 1/w, in the variable w."""
    return pullback_ode(ode, RationalFunction(1) / RationalFunction.var("w"), var="w")


def _pole_factors(ode: ODE2) -> List[UPoly]:
    out: List[UPoly] = []
    for f in (ode.r2, ode.r3):
        _, den = _reduced(f, ode.var)
        for fac in factor_degree_two(den):
            if fac not in out:
                out.append(fac)
    return out


def _has_pole_at_zero(ode: ODE2) -> bool:
    for f in (ode.r2, ode.r3):
        _, den = _reduced(f, ode.var)
        if den.c and not den.c[0]:
            return True
    return False


def singular_points(ode: ODE2) -> List[SingularPoint]:
    """Finite poles of r2 or r3 plus infinity when t = 1/w is singular at 0."""
    points = []
    for fac in _pole_factors(ode):
        if fac.degree == 1:
            points.append(SingularPoint("rational", -fac.c[0]))
        else:
            points.append(SingularPoint("quadratic", (fac.c[1], fac.c[0])))
    points.sort(key=lambda p: (p.kind != "rational", p.value if p.kind == "rational" else Q(0),
                               p.value if p.kind == "quadratic" else ()))
    if _has_pole_at_zero(at_infinity(ode)):
        points.append(SingularPoint.infinity())
    return points


def _limit(f: RationalFunction, var, point: SingularPoint, order: int):
    """lim (t - p)^order f(t) at the point, in Q or Q(theta)."""
    num, den = _reduced(f, var)
    if num.is_zero():
        return Q(0)
    m = point.minpoly()
    k, rest = multiplicity(den, m)
    if k > order:
        raise IrregularSingularityError(f"pole of order {k} > {order} at {point.describe(var)}")
    if k < order:
        return Q(0)
    if point.kind == "rational":
        return num(point.value) / rest(point.value)
    b, c = point.value
    theta = QuadExtElement.theta((-b, -c))
    dm = m.derivative()(theta)
    return num(theta) / (dm ** k * rest(theta))


def _as_rational(x, what) -> Rational:
    if isinstance(x, QuadExtElement):
        if not x.is_rational():
            raise FuchsError(f"{what} is irrational")
        return x.a0
    return Q(x)


def local_data(ode: ODE2, p: SingularPoint) -> Tuple[Rational, Rational]:
    """(a0, b0) = lim (t-p) r2, lim (t-p)^2 r3."""
    if p.kind == "infinity":
        w = at_infinity(ode)
        return local_data(w, SingularPoint("rational", 0))
    a0 = _as_rational(_limit(ode.r2, ode.var, p, 1), "a0")
    b0 = _as_rational(_limit(ode.r3, ode.var, p, 2), "b0")
    return a0, b0


def indicial_exponents(ode: ODE2, p: SingularPoint) -> Tuple[Rational, Rational]:
    """Roots of rho(rho - 1) + a0 rho + b0, smallest first."""
    a0, b0 = local_data(ode, p)
    lin = a0 - 1
    disc = lin * lin - 4 * b0
    if not _is_rational_square(disc):
        raise FuchsError(f"indicial roots at {p.describe(ode.var)} are irrational")
    root = _rational_sqrt(disc)
    return ((-lin - root) / 2, (-lin + root) / 2)


def exponent_table(ode: ODE2) -> List[Tuple[SingularPoint, Tuple[Rational, Rational]]]:
    return [(p, indicial_exponents(ode, p)) for p in singular_points(ode)]


# --------------------------------------------------------------------------
# Gauss equation, gauges and pullbacks

def hypergeometric_ode(a, b, c, var: str = "z") -> ODE2:
    z = RationalFunction.var(var)
    a, b, c = (RationalFunction.coerce(x) if isinstance(x, (MultiPoly, RationalFunction)) else RationalFunction(MultiPoly.const(x))
               for x in (a, b, c))
    den = z * (1 - z)
    return ODE2((c - (a + b + 1) * z) / den, -(a * b) / den, var)


@dataclass(frozen=True)
class GaugeFactor:
    """prod base_i ** exponent_i; exponents may be symbolic in the parameters."""

    factors: Tuple[Tuple[RationalFunction, RationalFunction], ...] = field(default_factory=tuple)

    @classmethod
    def parse(cls, pairs: Sequence[Tuple[str, str]]) -> "GaugeFactor":
        return cls(tuple((parse_ratfunc(b), parse_ratfunc(e)) for b, e in pairs))

    def subs(self, values: Mapping) -> "GaugeFactor":
        return GaugeFactor(tuple((b.subs(values), e.subs(values)) for b, e in self.factors))

    def log_derivative(self, var) -> RationalFunction:
        total = RationalFunction(0)
        for base, exp in self.factors:
            if base.is_zero():
                raise FuchsError("gauge base is identically zero")
            total = total + exp * ratfunc_diff(base, var) / base
        return total


def pullback_ode(ode_z: ODE2, covering: RationalFunction, gauge: Optional[GaugeFactor] = None,
                 var: str = "t") -> ODE2:
    """Equation for h(t) = gauge(t) * g(z(t)) where g solves ``ode_z``."""
    z1 = ratfunc_diff(covering, var)
    if z1.is_zero():
        raise FuchsError("covering is constant")
    z2 = ratfunc_diff(z1, var)
    bind = {symbol(ode_z.var): covering}
    R2 = ode_z.r2.subs(bind)
    R3 = ode_z.r3.subs(bind)
    P = R2 * z1 - z2 / z1
    Qz = R3 * z1 * z1
    if gauge is None or not gauge.factors:
        return ODE2(P, Qz, var)
    L = gauge.log_derivative(var)
    return ODE2(P - 2 * L, Qz - P * L + L * L - ratfunc_diff(L, var), var)


# --------------------------------------------------------------------------
# exponent matching

_UNKNOWNS = ("a", "b", "c")


def _parse_constraint(eq) -> RationalFunction:
    if isinstance(eq, str):
        if eq.count("=") != 1:
            raise FuchsError(f"constraint must contain exactly one '=': {eq!r}")
        lhs, rhs = eq.split("=")
        return parse_ratfunc(lhs) - parse_ratfunc(rhs)
    lhs, rhs = eq
    return RationalFunction.coerce(lhs) - RationalFunction.coerce(rhs)


def solve_gauss_parameters(constraints: Sequence, bindings: Optional[Mapping] = None):
    """Solve linear equations in a, b, c; right-hand sides may involve other
    symbols (bound by ``bindings`` or left symbolic)."""
    rows = []
    for eq in constraints:
        expr = _parse_constraint(eq)
        if bindings:
            expr = expr.subs({symbol(k): v for k, v in bindings.items()})
        if expr.den.free_symbols() & {symbol(u) for u in _UNKNOWNS}:
            raise FuchsError("constraint is not linear in a, b, c")
        coeffs = []
        for u in _UNKNOWNS:
            cu = ratfunc_diff(expr, u)
            if cu.free_symbols() & {symbol(x) for x in _UNKNOWNS}:
                raise FuchsError("constraint is not linear in a, b, c")
            coeffs.append(cu)
        const = expr.subs({symbol(u): 0 for u in _UNKNOWNS})
        rows.append(coeffs + [-const])
    n = len(_UNKNOWNS)
    # Gaussian elimination over rational functions
    r = 0
    pivots = []
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            raise FuchsError("underdetermined exponent constraints")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    for extra in rows[n:]:
        if not extra[n].is_zero():
            raise FuchsError("inconsistent exponent constraints")
    return tuple(_simplify(rows[i][n]) for i in pivots)


def _simplify(f: RationalFunction):
    if not f.num.free_symbols() and not f.den.free_symbols():
        return f.num.constant_term() / f.den.constant_term()
    if f.den.is_constant():
        return RationalFunction(f.num * (1 / f.den.constant_value()))
    return f


# --------------------------------------------------------------------------
# per-family data: exponent-matching systems, coverings, gauges, tables

@dataclass(frozen=True)
class CoveringData:
    constraints: Tuple[str, ...]
    covering: str
    gauge: Tuple[Tuple[str, str], ...]


COVERINGS = {
    # the 2F1 exponent pair at t = 1 is oriented so that a - b = 1/2
    "H4": CoveringData(
        ("4*a - 4*b = 2", "4 - 4*c = 2 - 4*q1", "c - a - b = q1 - q0"),
        "(s + 1)^2*(t + 1)^4/((s - 1)^2*(t - 1)^4)",
        (("1 - t", "-2*q0"), ("t", "q0")),
    ),
    "H1": CoveringData(
        ("1 - c = 1/4", "c - a - b = 1 - 2*q0", "b - a = 1/4"),
        "(s + 1)^2*(t + 1)^4/((s - 1)^2*(t - 1)^4)",
        (("t - 1", "1 - 4*q0"), ("t", "2*q0 - 1")),
    ),
    "H5": CoveringData(
        ("2*(1 - c) = 1 - 2*q", "2*(b - a) = 1", "c - a - b = 1 - 2*q"),
        "-4*(s + t)^2/(12*s*t + 1)^2",
        (("12*s*t + 1", "1 - 3*q"), ("t", "2*q - 1")),
    ),
}

# rows: (kind, point text or None, (exponent texts)); quadratics are given
# by a polynomial in t whose roots are the points
EXPONENT_TABLES = {
    "H4": (
        ("rational", "1", ("0", "2")),
        ("rational", "-1", ("0", "2 - 4*q1")),
        ("rational", "0", ("q0", "q0 + 1")),
        ("infinity", None, ("q0", "q0 + 1")),
        ("quadratic", "t^2 + 2*t/s + 1", ("0", "q1 - q0")),
        ("quadratic", "t^2 + 2*t*s + 1", ("0", "q1 - q0")),
    ),
    "H1": (
        ("rational", "0", ("2*q0 - 1", "2*q0")),
        ("infinity", None, ("2*q0", "2*q0 + 1")),
        ("quadratic", "t^2 + 2*t/s + 1", ("0", "1 - 2*q0")),
        ("quadratic", "t^2 + 2*t*s + 1", ("0", "1 - 2*q0")),
    ),
    "H5": (
        ("rational", "0", ("2*q - 1", "2*q")),
        ("infinity", None, ("q", "q + 1")),
        ("rational", "-s", ("0", "1 - 2*q")),
        ("quadratic", "144*s^2*t^2 + 4*s^2 + 32*s*t + 4*t^2 + 1", ("0", "1 - 2*q")),
    ),
}


def _const(text: str, binding: Mapping) -> Rational:
    f = parse_ratfunc(text).subs(binding)
    if f.free_symbols():
        raise FuchsError(f"{text!r} still depends on {sorted(s.name for s in f.free_symbols())}")
    return f.num.constant_term() / f.den.constant_term()


def gauss_pullback(family: str, s, slots: Mapping) -> ODE2:
    """The Gauss equation pulled back along the family's covering, gauged,
    with s and the slot parameters bound to rationals."""
    data = COVERINGS[family]
    binding = {symbol(k): Q(v) for k, v in slots.items()}
    binding[symbol("s")] = Q(s)
    a, b, c = solve_gauss_parameters(data.constraints, {k: Q(v) for k, v in slots.items()})
    covering = parse_ratfunc(data.covering).subs(binding)
    gauge = GaugeFactor.parse(data.gauge).subs(binding)
    return pullback_ode(hypergeometric_ode(a, b, c), covering, gauge, var="t")


@dataclass(frozen=True)
class TableRowCheck:
    description: str
    expected: Tuple[Rational, Rational]
    found: List[Tuple[str, Tuple[Rational, Rational]]]
    ok: bool


def check_exponent_table(family: str, ode: ODE2, s, slots: Mapping) -> Tuple[bool, List[TableRowCheck], List[str]]:
    """Compare the computed singular points and exponents with the expected
    table.  Returns (all ok, row checks, unexplained singular points)."""
    binding = {symbol(k): Q(v) for k, v in slots.items()}
    binding[symbol("s")] = Q(s)
    table = exponent_table(ode)
    used = set()
    rows = []
    for kind, text, exps in EXPONENT_TABLES[family]:
        expected = tuple(sorted(_const(e, binding) for e in exps))
        if kind == "infinity":
            matches = [i for i, (p, _) in enumerate(table) if p.kind == "infinity"]
            desc = "t = infinity"
        elif kind == "rational":
            value = _const(text, binding)
            matches = [i for i, (p, _) in enumerate(table) if p.kind == "rational" and p.value == value]
            desc = f"t = {text}"
        else:
            m = UPoly.from_multipoly(_poly_numerator(text, binding), "t").monic()
            matches = [i for i, (p, _) in enumerate(table)
                       if p.kind != "infinity" and m.exact_div(p.minpoly()) is not None]
            covered = sum(table[i][0].minpoly().degree for i in matches)
            if covered != m.degree:
                matches = []
            desc = f"roots of {text}"
        found = [(table[i][0].describe(), table[i][1]) for i in matches]
        ok = bool(matches) and all(table[i][1] == expected for i in matches)
        used.update(matches)
        rows.append(TableRowCheck(desc, expected, found, ok))
    extra = [table[i][0].describe() for i in range(len(table)) if i not in used]
    return all(r.ok for r in rows) and not extra, rows, extra


def _poly_numerator(text: str, binding: Mapping) -> MultiPoly:
    f = parse_ratfunc(text).subs(binding)
    return f.num * (1 / f.den.constant_term()) if f.den.is_constant() else f.num
