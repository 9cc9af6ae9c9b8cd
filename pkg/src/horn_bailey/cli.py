"""Command-line front end.

    horn-bailey verify h4 --order 8 --samples 3 --seed 7
    horn-bailey check pde h5
    horn-bailey check reduction h1
    horn-bailey exponents h5 --s 1/2 --params q=2/7
    horn-bailey discover h5 --out rel.expr
    horn-bailey all

Reports are JSON on stdout (or ``--out``).  Exit status is 0 when every
check passes, 1 when any check fails and 2 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .exact import format_rational
from .parser import ExpressionSyntaxError, parse_rational

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FAMILY_NAMES = {"h1": "H1", "h4": "H4", "h5": "H5"}


class UsageError(ValueError):
    pass


def parse_params(text: Optional[str]) -> Dict[str, object]:
    """``k=v,k2=v2`` with rational values such as ``-3/7``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not of the form name=value")
        k, v = (x.strip() for x in item.split("=", 1))
        if not k.isidentifier():
            raise UsageError(f"bad parameter name {k!r}")
        try:
            out[k] = parse_rational(v)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return out


def parse_samples(text: str) -> List:
    """Comma-separated rationals; ``a..b`` expands to the integers a..b."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if ".." in item:
            lo, hi = item.split("..", 1)
            try:
                out.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                raise UsageError(f"bad sample range {item!r}") from None
        elif item:
            try:
                out.append(parse_rational(item))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    if not out:
        raise UsageError("no samples given")
    return out


def _family(name: str) -> str:
    try:
        return FAMILY_NAMES[name.lower()]
    except KeyError:
        raise UsageError(f"unknown family {name!r}; choose from h1, h4, h5") from None


def _report(command: str, seed: int, cap: Optional[int], results: Sequence, **extra) -> Dict:
    out = {"command": command, "seed": seed, "cap": cap, "results": [r.to_json() for r in results]}
    out.update(extra)
    return out


def _status(results: Sequence) -> int:
    return EXIT_OK if results and all(r.passed for r in results) else EXIT_FAIL


# --------------------------------------------------------------------------
# subcommands

def cmd_verify(args) -> tuple:
    from .identities import get_identity, verify_identity

    try:
        spec = get_identity(args.identity)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    params = parse_params(args.params)
    unknown = set(params) - set(spec.slots)
    if unknown:
        raise UsageError(f"{spec.name} has no parameter(s) {sorted(unknown)}; slots are {list(spec.slots)}")
    if args.perturb and args.perturb not in spec.slots:
        raise UsageError(f"cannot perturb {args.perturb!r}; slots are {list(spec.slots)}")
    if args.order < 2:
        raise UsageError("--order must be at least 2")
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    try:
        reports = verify_identity(spec.name, args.order, args.samples, args.seed, params, args.perturb)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _report(f"verify {spec.name}", args.seed, args.order, reports), _status(reports)


def cmd_check(args) -> tuple:
    from . import acceptance as acc

    family = _family(args.family)
    rng_seed = args.seed
    results = []
    if args.what == "pde":
        cap = args.order
        rng = acc._rng(rng_seed, f"pde:{family}")
        names = "abc" if family == "H5" else "abcd"
        for _ in range(args.samples):
            params = acc.sample_hyper_params(family, rng)
            results.append(acc.run_check(f"pde {family} residual through degree {cap - 2}",
                                         dict(zip(names, params)), lambda: acc.pde_check(family, params, cap)))
    else:
        cap = None
        from .reduce import PARAMETERIZATIONS, mixed_coefficient

        P = PARAMETERIZATIONS[family]
        results.append(acc.run_check(f"annihilation {family}", {}, lambda: mixed_coefficient(family, P=P).is_zero()))
        rng = acc._rng(rng_seed, f"check:{family}")
        names = "abc" if family == "H5" else "abcd"
        for _ in range(args.samples):
            params = [acc.sample_params(rng, ["p"])["p"] for _ in names]
            results.append(acc.run_check(f"c3 c4 c5 {family} vs fixtures", dict(zip(names, params)),
                                         lambda: acc.reference_c_check(family, params)))
        for _ in range(args.samples):
            slots = acc.sample_slots(family, rng)
            results.append(acc.run_check(f"proportionality {family}", slots,
                                         lambda: acc.proportional(family, list(acc.specialize(family, slots)))))
            results.append(acc.run_check(f"r2 r3 {family} vs fixtures", slots,
                                         lambda: acc.reference_r_check(family, slots)))
            for s in acc.S_VALUES:
                results.append(acc.run_check(f"pullback {family}", {**slots, "s": s},
                                             lambda: acc.pullback_check(family, slots, s)))
    return _report(f"check {args.what} {args.family.lower()}", args.seed, cap, results), _status(results)


def cmd_exponents(args) -> tuple:
    from . import acceptance as acc
    from .fuchs import check_exponent_table

    family = _family(args.family)
    try:
        s = parse_rational(args.s)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    params = parse_params(args.params)
    names = acc._slot_names(family)
    unknown = set(params) - set(names)
    if unknown:
        raise UsageError(f"{family} has no parameter(s) {sorted(unknown)}; slots are {names}")
    if set(params) != set(names):
        slots = acc.sample_slots(family, random.Random(f"{args.seed}:exponents-cli:{family}"))
        slots.update(params)
    else:
        slots = dict(params)
    table = []
    state = {}

    def run():
        ok, rows, extra = check_exponent_table(family, acc._bound_ode(family, slots, s), s, slots)
        state["rows"], state["extra"] = rows, extra
        if ok:
            return True
        bad = [r.description for r in rows if not r.ok] + [f"unexpected point {p}" for p in extra]
        return "; ".join(bad)

    result = acc.run_check(f"exponent table {family}", {**slots, "s": s}, run)
    for row in state.get("rows", []):
        for point, exps in row.found:
            table.append({"point": point, "row": row.description,
                          "exponents": [format_rational(e) for e in exps],
                          "expected": [format_rational(e) for e in row.expected]})
    for point in state.get("extra", []):
        table.append({"point": point, "row": None, "exponents": None, "expected": None})
    return _report(f"exponents {args.family.lower()}", args.seed, None, [result], table=table), _status([result])


def cmd_discover(args) -> tuple:
    from . import acceptance as acc

    if _family(args.family) != "H5":
        raise UsageError("discovery is only implemented for h5")
    samples = parse_samples(args.samples) if args.samples else None
    kwargs = {"M": args.order}
    if samples:
        kwargs["samples"] = samples
    state = {}
    results = acc.criterion_discovery(state=state, **kwargs)
    out_path = None
    if args.out and "rel" in state:
        Path(args.out).write_text(str(state["rel"]) + "\n")
        out_path = str(args.out)
    return _report("discover h5", args.seed, args.order, results, relation_path=out_path), _status(results)


def cmd_all(args) -> tuple:
    from .acceptance import run_criterion, CRITERIA

    results = []
    summary = []
    for n in sorted(CRITERIA):
        outcome = run_criterion(n, args.seed)
        summary.append({"criterion": n, "title": outcome.title, "status": "pass" if outcome.passed else "fail"})
        for r in outcome.results:
            r.name = f"[{n}] {r.name}"
        results.extend(outcome.results)
        if not args.quiet:
            print(outcome.summary(), file=sys.stderr)
    return _report("all", args.seed, None, results, criteria=summary), _status(results)


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for parameter sampling (default 0)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--fixtures", help="directory of reference expressions (overrides HORN_FIXTURES)")

    parser = argparse.ArgumentParser(prog="horn-bailey", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="series check of one identity")
    p.add_argument("identity")
    p.add_argument("--order", type=int, default=8, help="total-degree cap (default 8)")
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--params", help="pin parameters, e.g. q0=2/5,q1=3/7")
    p.add_argument("--perturb", help="shift this parameter by 1/7 on the right-hand side")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", parents=[common], help="PDE residuals or the reduction pipeline")
    p.add_argument("what", choices=("pde", "reduction"))
    p.add_argument("family")
    p.add_argument("--order", type=int, default=10, help="series cap for the PDE check (default 10)")
    p.add_argument("--samples", type=int, default=3)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("exponents", parents=[common], help="local exponents along the reduced equation")
    p.add_argument("family")
    p.add_argument("--s", required=True, help="rational value of s")
    p.add_argument("--params", help="slot values, e.g. q=2/7")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("discover", parents=[common], help="rediscover the H5 algebraic relation")
    p.add_argument("family")
    p.add_argument("--order", type=int, default=30, help="series order M (default 30)")
    p.add_argument("--samples", help="constant terms, e.g. -10..-1,1..10")
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("all", parents=[common], help="run the full acceptance suite")
    p.add_argument("--quiet", action="store_true", help="no per-criterion lines on stderr")
    p.set_defaults(func=cmd_all)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if args.fixtures:
        os.environ["HORN_FIXTURES"] = args.fixtures
    try:
        report, code = args.func(args)
    except (UsageError, ExpressionSyntaxError, FileNotFoundError) as exc:
        print(f"horn-bailey: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, indent=2)
    if args.out and args.command != "discover":
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
