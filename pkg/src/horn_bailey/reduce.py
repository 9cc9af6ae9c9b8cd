"""Reduction of F(x(t), y(t)) to a second-order ODE in t.

Writing f(t) = F(x(t), y(t)), the chain rule gives

    f'  = x' Fx + y' Fy
    f'' = x'^2 Fxx + 2 x'y' Fxy + y'^2 Fyy + x'' Fx + y'' Fy.

Two second partials are eliminated with the PDE system; the coefficient of
the third must vanish along the curve, after which
f'' = c3 Fx + c4 Fy + c5 f.  When (c3, c4) is proportional to (x', y') the
curve carries the Fuchsian equation f'' + r2 f' + r3 f = 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .exact import MultiPoly, Q, RationalFunction, ratfunc_diff, symbol
from .hyper import PDESystem, pde_system
from .parser import parse_ratfunc

ELIMINATED = {"H4": ("Fxx", "Fyy"), "H1": ("Fxx", "Fxy"), "H5": ("Fxx", "Fxy")}
SURVIVING = {"H4": "Fxy", "H1": "Fyy", "H5": "Fyy"}


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Parameterization:
    x: RationalFunction
    y: RationalFunction
    active: str = "t"
    frozen: str = "s"

    @classmethod
    def parse(cls, x: str, y: str, **kw) -> "Parameterization":
        return cls(parse_ratfunc(x), parse_ratfunc(y), **kw)

    def rates(self) -> Dict[str, RationalFunction]:
        """x, y and their first and second derivatives in the active variable."""
        t = self.active
        xd = ratfunc_diff(self.x, t)
        yd = ratfunc_diff(self.y, t)
        return {
            "x": self.x, "y": self.y, "xdot": xd, "ydot": yd,
            "xddot": ratfunc_diff(xd, t), "yddot": ratfunc_diff(yd, t),
        }

    def bind(self, values: Mapping) -> "Parameterization":
        return Parameterization(self.x.subs(values), self.y.subs(values), self.active, self.frozen)


PARAMETERIZATIONS = {
    "H4": Parameterization.parse(
        "-(s*t^2 + s + 2*t)*(2*s*t + t^2 + 1)*s/(4*(s^2 - 1)^2*t^2)",
        "(t + 1)^2/(2*t)",
    ),
    "H1": Parameterization.parse(
        "-(s*t^2 + s + 2*t)*(2*s*t + t^2 + 1)*s/((s^2 - 1)^2*t^2)",
        "t^2",
    ),
    "H5": Parameterization.parse(
        "t^2",
        "4*(144*s^2*t^2 + 4*s^2 + 32*s*t + 4*t^2 + 1)*(4*s^2 + 1)*(s + t)*s/((12*s^2 - 1)^3*t^2)",
    ),
}

# parameter specialisations under which (c3, c4) is proportional to (x', y')
SPECIALIZATIONS = {
    "H4": ("q0 q1", ("q0", "q1", "1 + q0 - q1", "2*q1")),
    "H1": ("q0", ("q0 - 1/2", "q0", "1/2", "2*q0")),
    "H5": ("q", ("q", "q - 1/2", "2*q")),
}


def specialize(family: str, slots: Mapping) -> Tuple:
    """Hypergeometric parameters of the proportional specialisation."""
    names, templates = SPECIALIZATIONS[family]
    binding = {symbol(n): _slot_value(slots[n]) for n in names.split()}
    out = []
    for text in templates:
        value = parse_ratfunc(text).subs(binding)
        if value.num.free_symbols() or value.den.free_symbols():
            out.append(value)
        else:
            out.append(value.num.constant_term() / value.den.constant_term())
    return tuple(out)


def _slot_value(v):
    if isinstance(v, (MultiPoly, RationalFunction)):
        return v
    return Q(v)


def _formal_rates() -> Dict[str, RationalFunction]:
    return {k: RationalFunction.var(k) for k in ("x", "y", "xdot", "ydot", "xddot", "yddot")}


def eliminate(family: str, sys: PDESystem, rates: Mapping[str, RationalFunction]) -> Dict[str, RationalFunction]:
    """Express f'' in the basis {F, Fx, Fy, K} with K the surviving second
    partial.  ``rates`` supplies x', y', x'', y'' (formal or concrete)."""
    e1, e2 = ELIMINATED[family]
    keep = SURVIVING[family]
    xd, yd = rates["xdot"], rates["ydot"]
    chain = {
        "Fxx": xd * xd, "Fxy": 2 * xd * yd, "Fyy": yd * yd,
        "Fx": rates["xddot"], "Fy": rates["yddot"], "F": RationalFunction(0),
    }
    m11, m12 = sys.coefficient(0, e1), sys.coefficient(0, e2)
    m21, m22 = sys.coefficient(1, e1), sys.coefficient(1, e2)
    det = m11 * m22 - m12 * m21
    if det.is_zero():
        raise ReductionError(f"cannot eliminate {e1}, {e2}: system is singular")
    out = {}
    for slot in ("F", "Fx", "Fy", keep):
        r1 = -sys.coefficient(0, slot)
        r2 = -sys.coefficient(1, slot)
        sol1 = (r1 * m22 - m12 * r2) / det
        sol2 = (m11 * r2 - m21 * r1) / det
        out[slot] = chain[slot] + chain[e1] * sol1 + chain[e2] * sol2
    return out


def _bind_system(sys: PDESystem, x: RationalFunction, y: RationalFunction) -> PDESystem:
    ops = tuple({k: v.subs({"x": x, "y": y}) for k, v in op.items()} for op in sys.operators)
    return PDESystem(sys.family, ops)


def mixed_coefficient(family: str, params: Sequence = None, P: Optional[Parameterization] = None,
                      rates: Optional[Mapping] = None) -> RationalFunction:
    """Coefficient of the surviving second partial after elimination.

    With neither ``P`` nor ``rates`` the result is formal in x, y, xdot, ydot.
    ``rates`` may map xdot/ydot (and optionally x/y) to arbitrary rational
    functions, e.g. total derivatives in formal udot, vdot.
    """
    sys = pde_system(family, params if params is not None else _symbolic_params(family))
    if P is not None:
        rates = P.rates()
    if rates is None:
        formal = _formal_rates()
        return eliminate(family, sys, formal)[SURVIVING[family]]
    full = _formal_rates()
    full.update(rates)
    sys = _bind_system(sys, full["x"], full["y"])
    return eliminate(family, sys, full)[SURVIVING[family]]


def _symbolic_params(family: str):
    return [MultiPoly.var(n) for n in ("abc" if family == "H5" else "abcd")]


@dataclass(frozen=True)
class ReductionResult:
    c3: RationalFunction
    c4: RationalFunction
    c5: RationalFunction


def derive_reduction(family: str, params: Sequence, P: Parameterization,
                     order: str = "eliminate-first") -> ReductionResult:
    """c3, c4, c5 with f'' = c3 Fx + c4 Fy + c5 f along the curve P.

    ``order`` selects eliminating formally and substituting afterwards
    ("eliminate-first") or substituting the curve into the PDE coefficients
    before eliminating ("substitute-first"); both must agree.
    """
    rates = P.rates()
    if order == "eliminate-first":
        formal = eliminate(family, pde_system(family, params), _formal_rates())
        binding = {symbol(k): v for k, v in rates.items()}
        coeffs = {k: v.subs(binding) for k, v in formal.items()}
    elif order == "substitute-first":
        sys = _bind_system(pde_system(family, params), rates["x"], rates["y"])
        coeffs = eliminate(family, sys, rates)
    else:
        raise ValueError(f"unknown order {order!r}")
    if not coeffs[SURVIVING[family]].is_zero():
        raise ReductionError("parameterization does not annihilate the mixed coefficient")
    return ReductionResult(coeffs["Fx"], coeffs["Fy"], coeffs["F"])


def proportionality_check(R: ReductionResult, P: Parameterization) -> bool:
    rates = P.rates()
    return (R.c3 * rates["ydot"] - R.c4 * rates["xdot"]).is_zero()


@dataclass(frozen=True)
class ODE2:
    """y'' + r2 y' + r3 y = 0 in the variable ``var``."""

    r2: RationalFunction
    r3: RationalFunction
    var: str = "t"

    def subs(self, values: Mapping) -> "ODE2":
        return ODE2(self.r2.subs(values), self.r3.subs(values), self.var)

    def __eq__(self, other):
        if not isinstance(other, ODE2):
            return NotImplemented
        return self.var == other.var and self.r2 == other.r2 and self.r3 == other.r3

    __hash__ = None


def to_fuchsian(R: ReductionResult, P: Parameterization) -> ODE2:
    if not proportionality_check(R, P):
        raise ReductionError("(c3, c4) is not proportional to (x', y')")
    rates = P.rates()
    if not rates["xdot"].is_zero():
        r2 = -R.c3 / rates["xdot"]
    else:
        r2 = -R.c4 / rates["ydot"]
    return ODE2(r2, -R.c5, P.active)


def fuchsian_ode(family: str, slots: Mapping, P: Optional[Parameterization] = None) -> ODE2:
    """The ODE along the family's curve at the proportional specialisation."""
    P = P or PARAMETERIZATIONS[family]
    params = specialize(family, slots)
    return to_fuchsian(derive_reduction(family, params, P), P)
