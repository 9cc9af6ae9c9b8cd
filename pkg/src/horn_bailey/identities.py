"""Truncated power-series verification of Bailey-type factorisations.

Each identity has the shape

    Hyp(params; phi, psi) = prod base_i^e_i * prod 2F1/F4(...)

with every hypergeometric argument vanishing at the expansion centre and
every prefactor base equal to 1 there.  Both sides are expanded over the
rationals to a total-degree cap and compared monomial by monomial.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import MultiPoly, Q, Rational, RationalFunction, format_rational, ratfunc_eq, symbol
from .hyper import HypergeometricSpec, PochhammerPoleError, hyper_series, sample_params
from .parser import parse_ratfunc
from .series import (SeriesError, TruncatedSeries, first_mismatch, monomial_text, series_compose,
                     series_of_ratfunc, series_pow_rational)

PERTURBATION = Q(1, 7)


class IdentityError(ValueError):
    pass


@dataclass(frozen=True)
class HyperFactor:
    """A hypergeometric function with parameter and argument templates."""

    family: str
    params: Tuple[str, ...]
    args: Tuple[str, ...]


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    lhs: HyperFactor
    prefactors: Tuple[Tuple[str, str], ...]
    rhs: Tuple[HyperFactor, ...]
    expansion_vars: Tuple[str, ...]
    slots: Tuple[str, ...]
    substitution: Tuple[Tuple[str, str], ...] = ()
    # slot shifted on the right-hand side only, for the negative control
    control_slot: str = ""
    description: str = ""

    def hyper_factors(self) -> Tuple[HyperFactor, ...]:
        return (self.lhs,) + self.rhs


_CATALOG = (
    IdentitySpec(
        name="f4-bailey",
        lhs=HyperFactor("F4", ("a", "b", "c", "a + b - c + 1"), ("x*(1 - y)", "y*(1 - x)")),
        prefactors=(),
        rhs=(HyperFactor("2F1", ("a", "b", "c"), ("x",)),
             HyperFactor("2F1", ("a", "b", "a + b - c + 1"), ("y",))),
        expansion_vars=("x", "y"),
        slots=("a", "b", "c"),
        control_slot="c",
        description="F4 with c + c' = a + b + 1 on x(1-y), y(1-x) as a product of two 2F1",
    ),
    IdentitySpec(
        name="f2-bailey",
        lhs=HyperFactor("F2", ("a + b - 1/2", "a", "b", "2*a", "2*b"),
                        ("4*u*(1 - u)*(1 - 2*v)/(1 - 2*u*v)^2", "4*v*(1 - v)*(1 - 2*u)/(1 - 2*u*v)^2")),
        prefactors=(("1 - 2*u*v", "-1 + 2*a + 2*b"),),
        rhs=(HyperFactor("2F1", ("a + b - 1/2", "a", "2*a"), ("4*u*(1 - u)",)),
             HyperFactor("2F1", ("a + b - 1/2", "b", "2*b"), ("4*v*(1 - v)",))),
        expansion_vars=("u", "v"),
        slots=("a", "b"),
        control_slot="a",
        description="F2 factorisation with prefactor (1 - 2uv)^(2a + 2b - 1)",
    ),
    IdentitySpec(
        name="erdelyi-h4",
        lhs=HyperFactor("H4", ("a", "b", "c", "2*b"), ("x", "y")),
        prefactors=(("1 - y/2", "-a"),),
        rhs=(HyperFactor("F4", ("a/2", "a/2 + 1/2", "c", "b + 1/2"), ("16*x/(2 - y)^2", "y^2/(2 - y)^2")),),
        expansion_vars=("x", "y"),
        slots=("a", "b", "c"),
        control_slot="c",
        description="H4 with d = 2b as (1 - y/2)^(-a) times an F4",
    ),
    IdentitySpec(
        name="h4",
        lhs=HyperFactor("H4", ("q0", "q1", "1 + q0 - q1", "2*q1"),
                        ("(s^2 - 1)*(t^2 - 1)/(4*(s*t - 1)^2)", "2*s*t/(s*t - 1)")),
        prefactors=(("1 - s*t", "q0"),),
        rhs=(HyperFactor("2F1", ("q0/2 + 1/2", "q0/2", "q0 - q1 + 1"), ("1 - s^2",)),
             HyperFactor("2F1", ("q0/2 + 1/2", "q0/2", "q1 + 1/2"), ("t^2",))),
        expansion_vars=("sigma", "t"),
        slots=("q0", "q1"),
        substitution=(("s", "1 + sigma"),),
        control_slot="q1",
        description="H4 factorisation expanded at (s, t) = (1, 0) with s = 1 + sigma",
    ),
    IdentitySpec(
        name="h1",
        lhs=HyperFactor("H1", ("q0 - 1/2", "q0", "1/2", "2*q0"),
                        ("(s^4 - 1)*(t^4 - 1)/(s^2*t^2 - 1)^2", "((s*t + 1)/(s*t - 1))^2")),
        prefactors=(("1 + v - u*v - 2*u*v^2", "2*q0"),
                    ("(1 - u - 2*u*v)/((1 + v)*(1 + 2*v + 2*v^2))", "2*q0 - 1")),
        rhs=(HyperFactor("2F1", ("1 - q0", "3/4 - q0", "2 - 2*q0"), ("-8*v*(1 + v)*(1 + 2*v + 2*v^2)",)),
             HyperFactor("2F1", ("q0 - 1/4", "q0", "2*q0"), ("8*u*v*(1 - u*v)*(1 - 2*u*v + 2*u^2*v^2)",))),
        expansion_vars=("u", "v"),
        slots=("q0",),
        substitution=(("s", "-1 + 2*u*v"), ("t", "1 + 2*v")),
        control_slot="q0",
        description="H1 factorisation near (s, t) = (-1, 1) with s = -1 + 2uv, t = 1 + 2v",
    ),
    IdentitySpec(
        name="h5",
        lhs=HyperFactor("H5", ("q", "q - 1/2", "2*q"),
                        ("x*(y - 1)^2/(4*(3*x*y - 1)^2)", "4*(x*y^2 + 1)*(x + 1)*y/((3*x*y - 1)*(y - 1)^2)")),
        prefactors=(("1 - 3*x*y", "q"), ("1 - y", "2*q - 1")),
        rhs=(HyperFactor("2F1", ("3*q/2 - 1/2", "3*q/2", "q + 1/2"), ("-x*y^2",)),
             HyperFactor("2F1", ("q/2", "q/2 + 1/2", "3/2 - q"), ("-x",))),
        expansion_vars=("x", "y"),
        slots=("q",),
        control_slot="q",
        description="H5 factorisation at the origin",
    ),
)


def identity_catalog() -> List[IdentitySpec]:
    return list(_CATALOG)


def get_identity(name: str) -> IdentitySpec:
    for spec in _CATALOG:
        if spec.name == name:
            return spec
    raise KeyError(f"unknown identity {name!r}; known: {', '.join(s.name for s in _CATALOG)}")


def _bind(text: str, params: Mapping[str, Rational]) -> Rational:
    f = parse_ratfunc(text).subs({symbol(k): Q(v) for k, v in params.items()})
    if f.free_symbols():
        raise IdentityError(f"parameter template {text!r} has unbound slots")
    return f.num.constant_term() / f.den.constant_term()


def bind_factor(factor: HyperFactor, params: Mapping[str, Rational]) -> HypergeometricSpec:
    return HypergeometricSpec(factor.family, tuple(_bind(p, params) for p in factor.params))


def _substitution(spec: IdentitySpec) -> Dict:
    out = {}
    for k, text in spec.substitution:
        f = parse_ratfunc(text)
        out[symbol(k)] = f.num * (1 / f.den.constant_value())
    return out


def _argument_series(spec: IdentitySpec, text: str, cap: int) -> TruncatedSeries:
    try:
        ser = series_of_ratfunc(parse_ratfunc(text), spec.expansion_vars, cap, subs=_substitution(spec))
    except SeriesError as exc:
        raise IdentityError(f"argument {text!r} of {spec.name}: {exc}") from exc
    if ser.valuation() < 1:
        raise IdentityError(f"argument {text!r} of {spec.name} does not vanish at the expansion centre")
    return ser


def _factor_series(spec: IdentitySpec, factor: HyperFactor, params, cap: int) -> TruncatedSeries:
    hs = bind_factor(factor, params)
    if not hs.admissible(cap):
        raise IdentityError(f"{factor.family}{tuple(format_rational(p) for p in hs.params)} has poles below degree {cap}")
    outer = hyper_series(hs, cap)
    args = [_argument_series(spec, a, cap) for a in factor.args]
    return series_compose(outer, args)


def expand_side(spec: IdentitySpec, side: str, cap: int, params: Mapping[str, Rational]) -> TruncatedSeries:
    """Series of one side of ``spec`` to total degree ``cap``."""
    params = {k: Q(v) for k, v in params.items()}
    missing = set(spec.slots) - set(params)
    if missing:
        raise IdentityError(f"missing parameters {sorted(missing)} for {spec.name}")
    if side == "lhs":
        return _factor_series(spec, spec.lhs, params, cap)
    if side != "rhs":
        raise ValueError(f"side must be 'lhs' or 'rhs', not {side!r}")
    out = TruncatedSeries.const(spec.expansion_vars, cap, 1)
    for base_text, exp_text in spec.prefactors:
        try:
            base = series_of_ratfunc(parse_ratfunc(base_text), spec.expansion_vars, cap, subs=_substitution(spec))
        except SeriesError as exc:
            raise IdentityError(f"prefactor {base_text!r} of {spec.name}: {exc}") from exc
        if base.constant_term() != 1:
            raise IdentityError(f"normalization constant not 1 for prefactor {base_text!r} "
                                f"(got {format_rational(base.constant_term())})")
        out = out * series_pow_rational(base, _bind(exp_text, params))
    for factor in spec.rhs:
        out = out * _factor_series(spec, factor, params, cap)
    return out


def admissible_params(spec: IdentitySpec, params: Mapping[str, Rational], cap: int) -> bool:
    for factor in spec.hyper_factors():
        try:
            hs = bind_factor(factor, params)
        except (ValueError, ZeroDivisionError):
            return False
        if not hs.admissible(cap):
            return False
        if any(p.denominator == 1 and p <= 0 for p in hs.params):
            # an integral upper parameter truncates the series, which would
            # make the comparison weaker than intended
            return False
    for _, exp_text in spec.prefactors:
        _bind(exp_text, params)
    return True


def perturbation(params: Mapping[str, Rational], slot: str, delta: Rational = PERTURBATION) -> Dict[str, Rational]:
    out = dict(params)
    out[slot] = Q(out[slot]) + delta
    return out


@dataclass
class VerificationReport:
    name: str
    cap: int
    params: Dict[str, Rational]
    status: str
    first_mismatch: Optional[Dict[str, str]] = None
    elapsed_ms: int = 0
    cause: Optional[str] = None
    rhs_params: Optional[Dict[str, Rational]] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def mismatch_degree(self) -> Optional[int]:
        if self.first_mismatch is None:
            return None
        return self.first_mismatch["degree"]

    def to_json(self) -> Dict:
        out = {
            "name": self.name,
            "params": {k: format_rational(v) for k, v in self.params.items()},
            "status": self.status,
            "first_mismatch": None,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.first_mismatch is not None:
            out["first_mismatch"] = {k: self.first_mismatch[k] for k in ("monomial", "lhs", "rhs")}
        if self.cause:
            out["cause"] = self.cause
        if self.rhs_params is not None:
            out["rhs_params"] = {k: format_rational(v) for k, v in self.rhs_params.items()}
        return out


def compare_sides(spec: IdentitySpec, cap: int, lhs_params: Mapping, rhs_params: Optional[Mapping] = None) -> VerificationReport:
    rhs_params = dict(lhs_params if rhs_params is None else rhs_params)
    start = time.perf_counter()
    report = VerificationReport(spec.name, cap, {k: Q(v) for k, v in lhs_params.items()}, "pass")
    if rhs_params != dict(lhs_params):
        report.rhs_params = {k: Q(v) for k, v in rhs_params.items()}
    try:
        lhs = expand_side(spec, "lhs", cap, lhs_params)
        rhs = expand_side(spec, "rhs", cap, rhs_params)
        mm = first_mismatch(lhs, rhs)
        if mm is not None:
            exps, a, b = mm
            report.status = "fail"
            report.first_mismatch = {
                "monomial": monomial_text(spec.expansion_vars, exps),
                "lhs": format_rational(a),
                "rhs": format_rational(b),
                "degree": sum(exps),
            }
    except (IdentityError, SeriesError, PochhammerPoleError, ValueError, ZeroDivisionError) as exc:
        report.status = "error"
        report.cause = str(exc)
    report.elapsed_ms = int((time.perf_counter() - start) * 1000)
    return report


def sample_identity_params(spec: IdentitySpec, rng: random.Random, cap: int) -> Dict[str, Rational]:
    def ok(binding):
        if not admissible_params(spec, binding, cap):
            return False
        if spec.control_slot:
            return admissible_params(spec, perturbation(binding, spec.control_slot), cap)
        return True

    return sample_params(rng, spec.slots, ok)


def verify_identity(name: str, cap: int = 8, samples: int = 3, seed: int = 0,
                    params: Optional[Mapping[str, Rational]] = None,
                    perturb: Optional[str] = None, delta: Rational = PERTURBATION) -> List[VerificationReport]:
    """Compare both sides for ``samples`` random admissible bindings.

    ``params`` pins some or all slots; ``perturb`` shifts that slot by
    ``delta`` on the right-hand side only (a negative control).
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    spec = get_identity(name)
    rng = random.Random(f"{seed}:{name}")
    reports = []
    for _ in range(samples):
        binding = sample_identity_params(spec, rng, cap)
        if params:
            binding.update({k: Q(v) for k, v in params.items()})
        rhs = perturbation(binding, perturb, delta) if perturb else None
        reports.append(compare_sides(spec, cap, binding, rhs))
    return reports


def negative_control(name: str, cap: int = 8, seed: int = 0) -> VerificationReport:
    spec = get_identity(name)
    return verify_identity(name, cap, 1, seed, perturb=spec.control_slot)[0]


# --------------------------------------------------------------------------
# rational identities behind the symmetric H5 form

G_S = "2*(s + t)/(12*s*t + 1)"
G_S_INVERSE = "(2*s - t)/(12*s*t - 2)"
G_S_INVERSE_SWAPPED = "(2*t - s)/(12*s*t - 2)"
H5_SYM_ARGS = ("(u + v)^2/(4*(3*u*v + 1)^2)", "4*(u^2 + 1)*(v^2 + 1)*u*v/((3*u*v + 1)*(u + v)^2)")


def composes_to_identity(inverse_text: str) -> bool:
    """Whether g_s(h(t)) = t for the candidate inverse h."""
    g = parse_ratfunc(G_S)
    h = parse_ratfunc(inverse_text)
    return ratfunc_eq(g.subs({symbol("t"): h}), RationalFunction.var("t"))


def _swap_uv(f: RationalFunction) -> RationalFunction:
    return f.subs({symbol("u"): RationalFunction.var("v"), symbol("v"): RationalFunction.var("u")})


def rational_symmetry_report() -> Dict[str, bool]:
    from .reduce import PARAMETERIZATIONS

    out = {"g_s inverse": composes_to_identity(G_S_INVERSE)}
    args = [parse_ratfunc(a) for a in H5_SYM_ARGS]
    for i, f in enumerate(args, 1):
        out[f"argument {i} symmetric in u, v"] = ratfunc_eq(_swap_uv(f), f)
    # s = u/2 and t = g_{u/2}^{-1}(-v) carry the H5 curve to the symmetric arguments
    s = parse_ratfunc("u/2")
    t = parse_ratfunc(G_S_INVERSE).subs({symbol("s"): s, symbol("t"): -RationalFunction.var("v")})
    P = PARAMETERIZATIONS["H5"]
    bind = {symbol("s"): s, symbol("t"): t}
    out["curve maps to symmetric arguments"] = (ratfunc_eq(P.x.subs(bind), args[0])
                                                and ratfunc_eq(P.y.subs(bind), args[1]))
    return out


def rational_symmetry_checks() -> bool:
    return all(rational_symmetry_report().values())
