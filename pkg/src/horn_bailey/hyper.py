"""Hypergeometric series (2F1, Appell F2/F4, Horn H1/H4/H5) and the
partial differential systems annihilating H1, H4 and H5."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from .exact import MultiPoly, Q, Rational, RationalFunction, symbol
from .parser import parse_ratfunc
from .series import TruncatedSeries, series_diff

FAMILIES = {"2F1": 3, "F2": 5, "F4": 4, "H1": 4, "H4": 4, "H5": 3}

# positions of lower parameters within the parameter list
_LOWER = {"2F1": (2,), "F2": (3, 4), "F4": (2, 3), "H1": (3,), "H4": (2, 3), "H5": (2,)}


class PochhammerPoleError(ZeroDivisionError):
    pass


def pochhammer(a, k: int) -> Rational:
    """Rising factorial (a)_k, extended to k < 0 by (a)_{k-1} = (a)_k / (a+k-1).

    For k < 0 this is 1 / ((a-1)(a-2)...(a+k)).
    """
    a = Q(a)
    out = Q(1)
    if k >= 0:
        for i in range(k):
            out *= a + i
        return out
    den = Q(1)
    for i in range(1, -k + 1):
        den *= a - i
    if not den:
        raise PochhammerPoleError(f"({a})_{k} has a pole")
    return 1 / den


def _is_nonpositive_integer(r: Rational) -> bool:
    return r.denominator == 1 and r <= 0


def _is_positive_integer_upto(r: Rational, bound: int) -> bool:
    return r.denominator == 1 and 1 <= r <= bound


@dataclass(frozen=True)
class HypergeometricSpec:
    family: str
    params: Tuple[Rational, ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        params = tuple(Q(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != FAMILIES[self.family]:
            raise ValueError(f"{self.family} takes {FAMILIES[self.family]} parameters, got {len(params)}")
        for i in _LOWER[self.family]:
            if _is_nonpositive_integer(params[i]):
                raise ValueError(f"lower parameter {params[i]} of {self.family} is a nonpositive integer")

    def admissible(self, cap: int) -> bool:
        """Whether every coefficient up to total degree ``cap`` is defined."""
        if self.family == "H1":
            return not _is_positive_integer_upto(self.params[0], cap)
        if self.family == "H5":
            return not _is_positive_integer_upto(self.params[1], cap)
        return True


def _coefficient(spec: HypergeometricSpec, m: int, n: int) -> Rational:
    p = spec.params
    f = spec.family
    P = pochhammer
    if f == "F2":
        a, b1, b2, c1, c2 = p
        return P(a, m + n) * P(b1, m) * P(b2, n) / (P(c1, m) * P(c2, n) * _fact(m) * _fact(n))
    if f == "F4":
        a, b, c1, c2 = p
        return P(a, m + n) * P(b, m + n) / (P(c1, m) * P(c2, n) * _fact(m) * _fact(n))
    if f == "H1":
        a, b, c, d = p
        return P(a, m - n) * P(b, m + n) * P(c, n) / (P(d, m) * _fact(m) * _fact(n))
    if f == "H4":
        a, b, c, d = p
        return P(a, 2 * m + n) * P(b, n) / (P(c, m) * P(d, n) * _fact(m) * _fact(n))
    if f == "H5":
        a, b, c = p
        return P(a, 2 * m + n) * P(b, n - m) / (P(c, n) * _fact(m) * _fact(n))
    raise ValueError(f)


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def hyper_series(spec: HypergeometricSpec, cap: int, vars=None) -> TruncatedSeries:
    """Truncated series of ``spec`` in formal variables (x,) or (x, y).

    Double sums keep every term with m + n <= cap.
    """
    if spec.family == "2F1":
        vars = vars or ("x",)
        a, b, c = spec.params
        coeffs = {}
        term = Q(1)
        for k in range(cap + 1):
            if term:
                coeffs[(k,)] = term
            term = term * (a + k) * (b + k) / ((c + k) * (k + 1))
        return TruncatedSeries(vars, cap, coeffs)
    vars = vars or ("x", "y")
    coeffs = {}
    for m in range(cap + 1):
        for n in range(cap + 1 - m):
            try:
                coeffs[(m, n)] = _coefficient(spec, m, n)
            except ZeroDivisionError as exc:
                raise PochhammerPoleError(f"{spec.family}{spec.params}: pole at (m, n) = ({m}, {n})") from exc
    return TruncatedSeries(vars, cap, coeffs)


# --------------------------------------------------------------------------
# PDE systems

SLOTS = ("F", "Fx", "Fy", "Fxx", "Fxy", "Fyy")
_SECOND = ("Fxx", "Fxy", "Fyy")

# Parameters are the letters a, b, c, d.  Every sign here is pinned by
# pde_residual vanishing on the series itself.
_SYSTEMS: Dict[str, Tuple[Dict[str, str], Dict[str, str]]] = {
    "H4": (
        {"Fxx": "x*(1 - 4*x)", "Fxy": "-4*x*y", "Fyy": "-y^2",
         "Fx": "c - (4*a + 6)*x", "Fy": "-2*(a + 1)*y", "F": "-a*(a + 1)"},
        {"Fyy": "y*(1 - y)", "Fxy": "-2*x*y",
         "Fy": "d - (a + b + 1)*y", "Fx": "-2*b*x", "F": "-a*b"},
    ),
    "H1": (
        {"Fxx": "x*(1 - x)", "Fyy": "y^2",
         "Fx": "d - (a + b + 1)*x", "Fy": "-(a - b - 1)*y", "F": "-a*b"},
        {"Fyy": "-y*(1 + y)", "Fxy": "x*(1 - y)",
         "Fy": "a - 1 - (b + c + 1)*y", "Fx": "-c*x", "F": "-b*c"},
    ),
    "H5": (
        {"Fxx": "x*(1 + 4*x)", "Fxy": "y*(4*x - 1)", "Fyy": "y^2",
         "Fx": "1 - b + (4*a + 6)*x", "Fy": "2*(a + 1)*y", "F": "a*(a + 1)"},
        {"Fyy": "y*(1 - y)", "Fxy": "-x*y", "Fxx": "2*x^2",
         "Fy": "c - (a + b + 1)*y", "Fx": "(2 + a - 2*b)*x", "F": "-a*b"},
    ),
}

_PARAM_NAMES = {"H1": "abcd", "H4": "abcd", "H5": "abc"}

ParamValue = Union[Rational, int, MultiPoly, RationalFunction]


@dataclass(frozen=True)
class PDESystem:
    """Two operators, each a map slot -> polynomial coefficient."""

    family: str
    operators: Tuple[Dict[str, RationalFunction], Dict[str, RationalFunction]]

    def coefficient(self, op: int, slot: str) -> RationalFunction:
        return self.operators[op].get(slot, RationalFunction(0))


def pde_system(family: str, params: Sequence[ParamValue]) -> PDESystem:
    if family not in _SYSTEMS:
        raise ValueError(f"no PDE system for {family!r}")
    names = _PARAM_NAMES[family]
    if len(params) != len(names):
        raise ValueError(f"{family} system takes {len(names)} parameters, got {len(params)}")
    binding = {symbol(n): _as_ratfunc(p) for n, p in zip(names, params)}
    ops = []
    for table in _SYSTEMS[family]:
        ops.append({slot: parse_ratfunc(text).subs(binding) for slot, text in table.items()})
    return PDESystem(family, tuple(ops))


def _as_ratfunc(p) -> RationalFunction:
    if isinstance(p, RationalFunction):
        return p
    if isinstance(p, MultiPoly):
        return RationalFunction(p)
    if isinstance(p, str):
        return parse_ratfunc(p)
    return RationalFunction(MultiPoly.const(p))


def pde_residual(F: TruncatedSeries, sys: PDESystem) -> Tuple[TruncatedSeries, TruncatedSeries]:
    """Apply both operators to ``F``; residuals are exact through F.cap - 2."""
    if F.cap < 2:
        raise ValueError("series cap must be at least 2")
    x, y = F.vars
    cap = F.cap - 2
    derivs = {"F": F}
    derivs["Fx"] = series_diff(F, x)
    derivs["Fy"] = series_diff(F, y)
    derivs["Fxx"] = series_diff(derivs["Fx"], x)
    derivs["Fxy"] = series_diff(derivs["Fx"], y)
    derivs["Fyy"] = series_diff(derivs["Fy"], y)
    out = []
    for op in sys.operators:
        total = TruncatedSeries.zero(F.vars, cap)
        for slot, coeff in op.items():
            if coeff.is_zero():
                continue
            if not coeff.den.is_constant():
                raise ValueError("PDE coefficients must be polynomial")
            poly = coeff.num * (1 / coeff.den.constant_value())
            if poly.free_symbols() - set(F.vars):
                raise ValueError("PDE coefficients contain unbound parameters")
            c = TruncatedSeries.from_poly(poly, F.vars, cap)
            total = total + c * derivs[slot].truncate(cap)
        out.append(total)
    return out[0], out[1]


# --------------------------------------------------------------------------
# deterministic parameter sampling

def sample_rational(rng: random.Random, lo: int = -3, hi: int = 3) -> Rational:
    """Random rational with denominator in 2..9 and value in [lo, hi]."""
    den = rng.randint(2, 9)
    num = rng.randint(lo * den, hi * den)
    return Q(num, den)


def sample_params(rng: random.Random, names: Sequence[str], ok=lambda binding: True, tries: int = 1000) -> Dict[str, Rational]:
    """Draw bindings until ``ok`` accepts one.  Integers are always rejected
    so that no parameter sits on a lattice of special values."""
    for _ in range(tries):
        binding = {n: sample_rational(rng) for n in names}
        if any(v.denominator == 1 for v in binding.values()):
            continue
        try:
            if ok(binding):
                return binding
        except (ValueError, ZeroDivisionError):
            continue
    raise RuntimeError("could not find admissible parameters")


def family_params_ok(family: str, params: Sequence, cap: int) -> bool:
    try:
        spec = HypergeometricSpec(family, tuple(params))
    except ValueError:
        return False
    return spec.admissible(cap)
