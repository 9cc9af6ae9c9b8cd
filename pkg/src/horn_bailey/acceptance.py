"""The end-to-end checks behind ``horn-bailey all`` and the acceptance tests.

Every check is exact; a check passes only on literal equality.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .discover import (DEFAULT_GRID, DEFAULT_ORDER, DEFAULT_SAMPLES, KernelRelation, discover_relation,
                       ode_residual, ode_series_solution, projective_ratio, verify_relation)
from .exact import MultiPoly, Q, Rational, RationalFunction, format_rational, ratfunc_eq, symbol, total_derivative
from .fixtures import FIXTURE_NAMES, fixture_text, load_fixture, load_fixture_expression
from .fuchs import (COVERINGS, EXPONENT_TABLES, check_exponent_table, gauss_pullback, hypergeometric_ode,
                    indicial_exponents, local_data, singular_points)
from .hyper import (HypergeometricSpec, family_params_ok, hyper_series, pde_residual, pde_system, sample_params)
from .identities import identity_catalog, negative_control, verify_identity
from .parser import parse_ratfunc
from .reduce import (PARAMETERIZATIONS, SPECIALIZATIONS, derive_reduction, fuchsian_ode, mixed_coefficient,
                     proportionality_check, specialize, to_fuchsian)
from .series import TruncatedSeries, series_inverse, series_pow_rational

FAMILIES = ("H4", "H1", "H5")
S_VALUES = (Q(1, 3), Q(2, 5))


@dataclass
class CheckResult:
    name: str
    status: str
    params: Dict[str, Rational] = field(default_factory=dict)
    first_mismatch: Optional[Dict[str, str]] = None
    elapsed_ms: int = 0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> Dict:
        out = {
            "name": self.name,
            "params": {k: format_rational(Q(v)) for k, v in self.params.items()},
            "status": self.status,
            "first_mismatch": self.first_mismatch,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def run_check(name: str, params: Mapping, fn: Callable[[], object]) -> CheckResult:
    """Run ``fn``; a truthy result passes, a string result fails with that
    detail, and an exception is reported as an error."""
    start = time.perf_counter()
    try:
        outcome = fn()
        if outcome is True:
            status, detail = "pass", ""
        elif isinstance(outcome, str):
            status, detail = "fail", outcome
        else:
            status, detail = ("pass", "") if outcome else ("fail", "")
    except Exception as exc:  # reported, never swallowed silently
        status, detail = "error", f"{type(exc).__name__}: {exc}"
    elapsed = int((time.perf_counter() - start) * 1000)
    return CheckResult(name, status, dict(params), None, elapsed, detail)


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{seed}:{tag}")


# --------------------------------------------------------------------------
# parameter sampling shared by the reduction, pullback and exponent checks

def _slot_names(family: str) -> List[str]:
    return SPECIALIZATIONS[family][0].split()


def _exponents_generic(family: str, slots: Mapping) -> bool:
    """Reject slots that make a parameter-dependent exponent gap integral,
    which could merge or hide rows of the exponent table."""
    binding = {symbol(k): Q(v) for k, v in slots.items()}
    binding[symbol("s")] = Q(1, 3)
    for _, _, exps in EXPONENT_TABLES[family]:
        diff = parse_ratfunc(f"({exps[1]}) - ({exps[0]})")
        if not diff.free_symbols() - {symbol("s")}:
            continue
        value = diff.subs(binding)
        v = value.num.constant_term() / value.den.constant_term()
        if v.denominator == 1:
            return False
    params = specialize(family, slots)
    from .fuchs import solve_gauss_parameters
    a, b, c = solve_gauss_parameters(COVERINGS[family].constraints, {k: Q(v) for k, v in slots.items()})
    return all(Q(x).denominator != 1 for x in (a, b, c)) and all(Q(p) != 0 for p in params)


def sample_slots(family: str, rng: random.Random) -> Dict[str, Rational]:
    return sample_params(rng, _slot_names(family), lambda b: _exponents_generic(family, b))


def sample_hyper_params(family: str, rng: random.Random) -> List[Rational]:
    names = "abc" if family == "H5" else "abcd"
    binding = sample_params(rng, list(names), lambda b: family_params_ok(family, [b[n] for n in names], 10))
    return [binding[n] for n in names]


def _bound_ode(family: str, slots: Mapping, s) -> "object":
    P = PARAMETERIZATIONS[family].bind({symbol("s"): Q(s)})
    return fuchsian_ode(family, slots, P)


# --------------------------------------------------------------------------
# criteria

def criterion_identities(seed: int = 0, cap: int = 8, samples: int = 3) -> List[CheckResult]:
    out = []
    for spec in identity_catalog():
        for rep in verify_identity(spec.name, cap, samples, seed):
            res = CheckResult(f"identity {spec.name}", rep.status, rep.params, None, rep.elapsed_ms, rep.cause or "")
            if rep.first_mismatch:
                res.first_mismatch = {k: rep.first_mismatch[k] for k in ("monomial", "lhs", "rhs")}
            out.append(res)
    return out


def criterion_negative_controls(seed: int = 0, cap: int = 8) -> List[CheckResult]:
    out = []
    for spec in identity_catalog():
        rep = negative_control(spec.name, cap, seed)
        deg = rep.mismatch_degree()
        ok = rep.status == "fail" and deg is not None and deg <= 3
        detail = f"{spec.control_slot} shifted by 1/7 on the right-hand side; " + (
            f"mismatch at degree {deg}" if deg is not None else f"status {rep.status} {rep.cause or ''}".strip())
        res = CheckResult(f"negative control {spec.name}", "pass" if ok else "fail", rep.params, None,
                          rep.elapsed_ms, detail)
        if rep.first_mismatch:
            res.first_mismatch = {k: rep.first_mismatch[k] for k in ("monomial", "lhs", "rhs")}
        out.append(res)
    return out


def pde_check(family: str, params: Sequence, cap: int = 10) -> bool:
    F = hyper_series(HypergeometricSpec(family, tuple(params)), cap)
    r1, r2 = pde_residual(F, pde_system(family, params))
    return r1.is_zero() and r2.is_zero()


def criterion_pde(seed: int = 0, cap: int = 10, samples: int = 3) -> List[CheckResult]:
    out = []
    for family in FAMILIES:
        rng = _rng(seed, f"pde:{family}")
        for _ in range(samples):
            params = sample_hyper_params(family, rng)
            names = "abc" if family == "H5" else "abcd"
            out.append(run_check(f"pde {family} residual through degree {cap - 2}",
                                 dict(zip(names, params)), lambda: pde_check(family, params, cap)))
    return out


H4_UV = ("(1 - ((v - 1/v)/2*(u - 1/u)/2)^2)/4", "1 + (v + 1/v)/2")
H4_UV_FACTORED = ("(v^2*udot + 2*u*vdot - udot)*(v^2*udot - 2*u*vdot - udot)*(u^2 + 1)^2*(v^2 - 1)^2"
                  "/(64*(v^2 + 1)*u^4*v^3)")
H1_UV = ("1 - (v - 1/v)^2*(u - 1/u)^2/16", "v^2")
H1_UV_FACTORED = ("4*(v^2*udot + 2*u*vdot - udot)*(v^2*udot - 2*u*vdot - udot)*(u^2 + 1)^2*v^4"
                  "/((u*v + u + v - 1)*(u*v + u - v + 1)*(u*v - u + v + 1)*(u*v - u - v - 1)*u^2)")
H1_UV_CURVE = ("(1 + s)/(1 - s)*(1 + t)/(1 - t)", "t")


def uv_rates(xy: Tuple[str, str]) -> Dict[str, RationalFunction]:
    x, y = (parse_ratfunc(e) for e in xy)
    rates = {"u": RationalFunction.var("udot"), "v": RationalFunction.var("vdot")}
    return {"x": x, "y": y, "xdot": total_derivative(x, rates), "ydot": total_derivative(y, rates)}


def uv_curve_annihilates(family: str, xy, curve) -> bool:
    """Mixed coefficient along (u(s,t), v(s,t)) pushed through x(u,v), y(u,v)."""
    from .reduce import Parameterization

    bind = {symbol("u"): parse_ratfunc(curve[0]), symbol("v"): parse_ratfunc(curve[1])}
    x, y = (parse_ratfunc(e).subs(bind) for e in xy)
    return mixed_coefficient(family, P=Parameterization(x, y)).is_zero()


def criterion_annihilation(seed: int = 0) -> List[CheckResult]:
    out = []
    for family in FAMILIES:
        P = PARAMETERIZATIONS[family]
        out.append(run_check(f"annihilation {family} symbolic in s, t", {},
                             lambda: mixed_coefficient(family, P=P).is_zero()))
        rng = _rng(seed, f"annihilation:{family}")
        for _ in range(3):
            s = sample_params(rng, ["s"])["s"]
            out.append(run_check(f"annihilation {family} at fixed s", {"s": s},
                                 lambda: mixed_coefficient(family, P=P.bind({symbol("s"): s})).is_zero()))
    out.append(run_check("H4 mixed coefficient factors under the (u, v) specialisation", {},
                         lambda: ratfunc_eq(mixed_coefficient("H4", rates=uv_rates(H4_UV)),
                                            parse_ratfunc(H4_UV_FACTORED))))
    out.append(run_check("H1 mixed coefficient factors under the (u, v) specialisation", {},
                         lambda: ratfunc_eq(mixed_coefficient("H1", rates=uv_rates(H1_UV)),
                                            parse_ratfunc(H1_UV_FACTORED))))
    out.append(run_check("H1 annihilation through u = C(1+t)/(1-t), v = t", {},
                         lambda: uv_curve_annihilates("H1", H1_UV, H1_UV_CURVE)))
    return out


def reference_c_check(family: str, params: Sequence) -> str | bool:
    R = derive_reduction(family, params, PARAMETERIZATIONS[family])
    names = "abc" if family == "H5" else "abcd"
    bind = {symbol(n): v for n, v in zip(names, params)}
    bad = [part for part in ("c3", "c4", "c5")
           if not ratfunc_eq(getattr(R, part), load_fixture(f"{family.lower()}_{part}").subs(bind))]
    return True if not bad else f"differs from fixture: {', '.join(bad)}"


def reference_r_check(family: str, slots: Mapping) -> str | bool:
    ode = fuchsian_ode(family, slots)
    bind = {symbol(k): Q(v) for k, v in slots.items()}
    bad = [part for part in ("r2", "r3")
           if not ratfunc_eq(getattr(ode, part), load_fixture(f"{family.lower()}_{part}").subs(bind))]
    return True if not bad else f"differs from fixture: {', '.join(bad)}"


def criterion_reference(seed: int = 0, samples: int = 3) -> List[CheckResult]:
    out = []
    for family in FAMILIES:
        rng = _rng(seed, f"reference:{family}")
        names = "abc" if family == "H5" else "abcd"
        for _ in range(samples):
            params = [sample_params(rng, ["p"])["p"] for _ in names]
            out.append(run_check(f"reference {family} c3 c4 c5", dict(zip(names, params)),
                                 lambda: reference_c_check(family, params)))
        for _ in range(samples):
            slots = sample_slots(family, rng)
            out.append(run_check(f"reference {family} r2 r3", slots, lambda: reference_r_check(family, slots)))
    return out


_PERTURBED_SLOT = {"H4": 3, "H1": 3, "H5": 2}


def proportional(family: str, params: Sequence) -> bool:
    P = PARAMETERIZATIONS[family]
    return proportionality_check(derive_reduction(family, params, P), P)


def criterion_proportionality(seed: int = 0, samples: int = 3) -> List[CheckResult]:
    out = []
    for family in FAMILIES:
        rng = _rng(seed, f"proportionality:{family}")
        for _ in range(samples):
            slots = sample_slots(family, rng)
            params = list(specialize(family, slots))
            out.append(run_check(f"proportionality {family} at the specialisation", slots,
                                 lambda: proportional(family, params)))
            bumped = list(params)
            i = _PERTURBED_SLOT[family]
            bumped[i] = bumped[i] + Q(1, 3)
            out.append(run_check(f"proportionality {family} fails with parameter {i + 1} shifted by 1/3", slots,
                                 lambda: not proportional(family, bumped)))
    return out


def pullback_check(family: str, slots: Mapping, s) -> bool:
    return gauss_pullback(family, s, slots) == _bound_ode(family, slots, s)


def criterion_pullback(seed: int = 0, samples: int = 3) -> List[CheckResult]:
    out = []
    for family in FAMILIES:
        rng = _rng(seed, f"pullback:{family}")
        for _ in range(samples):
            slots = sample_slots(family, rng)
            for s in S_VALUES:
                out.append(run_check(f"pullback {family} equals reduced equation", {**slots, "s": s},
                                     lambda: pullback_check(family, slots, s)))
    return out


def exponent_check(family: str, slots: Mapping, s) -> str | bool:
    ok, rows, extra = check_exponent_table(family, _bound_ode(family, slots, s), s, slots)
    if ok:
        return True
    bad = [f"{r.description}: expected {[format_rational(e) for e in r.expected]}, "
           f"found {[(d, [format_rational(x) for x in e]) for d, e in r.found]}" for r in rows if not r.ok]
    if extra:
        bad.append(f"unexpected singular points {extra}")
    return "; ".join(bad)


def criterion_exponents(seed: int = 0, samples: int = 3) -> List[CheckResult]:
    out = []
    for family in FAMILIES:
        rng = _rng(seed, f"exponents:{family}")
        for _ in range(samples):
            slots = sample_slots(family, rng)
            for s in S_VALUES:
                out.append(run_check(f"exponent table {family}", {**slots, "s": s},
                                     lambda: exponent_check(family, slots, s)))
    return out


def criterion_discovery(M: int = DEFAULT_ORDER, samples: Sequence = DEFAULT_SAMPLES,
                        state: Optional[Dict] = None) -> List[CheckResult]:
    """Discovery checks; ``state`` (if given) receives the relation and kernels."""
    out = []
    state = {} if state is None else state

    def run():
        rel, kernels = discover_relation(samples, M)
        state["rel"], state["kernels"] = rel, kernels
        return True

    out.append(run_check("discovery: every kernel is one-dimensional", {"M": M}, run))
    if "rel" not in state:
        return out
    rel, kernels = state["rel"], state["kernels"]
    reference = KernelRelation.from_polynomial(load_fixture_expression("h5_relation"))

    def per_sample():
        bad = []
        for a, basis in kernels:
            vec = dict(zip(sorted(DEFAULT_GRID), [Q(x) for x in basis[0]]))
            if projective_ratio(vec, reference.at(a)) is None:
                bad.append(format_rational(a))
        return True if not bad else f"kernel not proportional to the reference at a = {', '.join(bad)}"

    out.append(run_check("discovery: kernels proportional to the reference relation", {}, per_sample))

    def whole():
        ratio = projective_ratio(dict(rel.coefficients), dict(reference.coefficients))
        return True if ratio is not None else "reconstructed relation is not a scalar multiple of the reference"

    out.append(run_check("discovery: reconstruction matches the reference up to a scalar", {}, whole))
    x2y2 = parse_ratfunc("2985984*a^6 - 1492992*a^5 + 311040*a^4 - 34560*a^3 + 2160*a^2 - 72*a + 1").num
    c00 = parse_ratfunc("4096*a^6 + 4096*a^5 + 1536*a^4 + 256*a^3 + 16*a^2").num

    def spot():
        r1 = projective_ratio({0: rel.coefficient(2, 2)}, {0: x2y2})
        r2 = projective_ratio({0: rel.coefficient(0, 0)}, {0: c00})
        return r1 is not None and r1 == r2

    out.append(run_check("discovery: spot coefficients x^2 y^2 and 1", {}, spot))
    out.append(run_check("discovery: relation vanishes on the H5 curve", {}, lambda: verify_relation(rel)))
    return out


def criterion_recurrence() -> List[CheckResult]:
    def check():
        sol = ode_series_solution(1, DEFAULT_ORDER)
        x1 = sol.coefficient((1,))
        if x1 != Q(-11, 10):
            return f"x1 = {format_rational(x1)}"
        return all(c == 0 for c in ode_residual(sol))

    return [run_check("recurrence x0 = 1 gives x1 = -11/10", {"x0": 1}, check)]


# --------------------------------------------------------------------------
# randomized engine properties

def _random_poly(rng: random.Random, names=("s", "t", "x"), terms=4, deg=3) -> MultiPoly:
    out = {}
    for _ in range(rng.randint(0, terms)):
        e = tuple(rng.randint(0, deg) for _ in names)
        out[e] = Q(rng.randint(-9, 9), rng.randint(1, 6))
    return MultiPoly(names, out)


def _random_series(rng: random.Random, cap: int, unit: bool = False) -> TruncatedSeries:
    p = _random_poly(rng, ("x", "y"), 6, cap)
    s = TruncatedSeries.from_poly(p, ("x", "y"), cap)
    if unit:
        s = s - TruncatedSeries.const(("x", "y"), cap, s.constant_term()) + TruncatedSeries.const(("x", "y"), cap, 1)
    return s


def property_ring_axioms(rng: random.Random) -> bool:
    p, q, r = (_random_poly(rng) for _ in range(3))
    zero = MultiPoly.const(0)
    return ((p + q) + r == p + (q + r) and p * (q + r) == p * q + p * r and p * q == q * p
            and (p * q) * r == p * (q * r) and (p - p) == zero)


def property_series_ring(rng: random.Random) -> bool:
    a, b, c = (_random_series(rng, 5) for _ in range(3))
    return (a * (b + c) == a * b + a * c and (a * b) * c == a * (b * c) and a * b == b * a)


def property_pow_inverse(rng: random.Random) -> bool:
    a = _random_series(rng, 6, unit=True)
    e = Q(rng.randint(-7, 7), rng.randint(1, 5))
    one = TruncatedSeries.const(a.vars, a.cap, 1)
    return series_pow_rational(a, e) * series_pow_rational(a, -e) == one and a * series_inverse(a) == one


def property_exponent_sum(rng: random.Random) -> bool:
    a, b, c = (sample_params(rng, ["p"])["p"] for _ in range(3))
    ode = hypergeometric_ode(a, b, c)
    for p in singular_points(ode):
        a0, _ = local_data(ode, p)
        e1, e2 = indicial_exponents(ode, p)
        if e1 + e2 != 1 - a0:
            return False
    return True


def property_fixture_roundtrip(rng: random.Random) -> bool:
    name = rng.choice(FIXTURE_NAMES)
    f = parse_ratfunc(fixture_text(name))
    p = _random_poly(rng)
    return ratfunc_eq(parse_ratfunc(str(f)), f) and parse_ratfunc(str(p)).num == p


PROPERTIES = {
    "polynomial ring axioms": property_ring_axioms,
    "series ring axioms": property_series_ring,
    "pow * pow^-1 = 1": property_pow_inverse,
    "Fuchs exponent-sum relation": property_exponent_sum,
    "fixture round-trip": property_fixture_roundtrip,
}


def criterion_properties(seed: int = 0, instances: int = 50) -> List[CheckResult]:
    out = []
    for name, prop in PROPERTIES.items():
        rng = _rng(seed, f"property:{name}")

        def run(prop=prop, rng=rng):
            failures = [i for i in range(instances) if not prop(rng)]
            return True if not failures else f"failed on instances {failures}"

        out.append(run_check(f"property {name} ({instances} instances)", {}, run))
    return out


CRITERIA: Dict[int, Tuple[str, Callable[[int], List[CheckResult]]]] = {
    1: ("identity suite", lambda seed: criterion_identities(seed)),
    2: ("negative controls", lambda seed: criterion_negative_controls(seed)),
    3: ("PDE residuals", lambda seed: criterion_pde(seed)),
    4: ("annihilation", lambda seed: criterion_annihilation(seed)),
    5: ("reference agreement", lambda seed: criterion_reference(seed)),
    6: ("proportionality", lambda seed: criterion_proportionality(seed)),
    7: ("pullback equality", lambda seed: criterion_pullback(seed)),
    8: ("exponent tables", lambda seed: criterion_exponents(seed)),
    9: ("discovery", lambda seed: criterion_discovery()),
    10: ("recurrence spot check", lambda seed: criterion_recurrence()),
    11: ("engine properties", lambda seed: criterion_properties(seed)),
}


@dataclass
class CriterionOutcome:
    number: int
    title: str
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r.passed for r in self.results)

    def summary(self) -> str:
        good = sum(r.passed for r in self.results)
        return f"criterion {self.number:2d} {self.title}: {'PASS' if self.passed else 'FAIL'} ({good}/{len(self.results)} checks)"


def run_criterion(number: int, seed: int = 0) -> CriterionOutcome:
    title, fn = CRITERIA[number]
    return CriterionOutcome(number, title, fn(seed))


def run_all(seed: int = 0) -> List[CriterionOutcome]:
    return [run_criterion(n, seed) for n in sorted(CRITERIA)]
