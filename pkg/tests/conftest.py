from fractions import Fraction
import sys

import pytest
from hypothesis import settings, strategies as st

from horn_bailey.exact import MultiPoly, Q, RationalFunction
from horn_bailey.parser import parse_ratfunc
from horn_bailey.series import TruncatedSeries

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rf(text: str) -> RationalFunction:
    return parse_ratfunc(text)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7).map(Q)
nonzero_rationals = rationals.filter(bool)
# non-integral rationals avoid the integer lattices where Pochhammer symbols vanish
generic_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=9).filter(
    lambda f: f.denominator > 1).map(Q)


@st.composite
def polys(draw, names=("s", "t", "x"), max_terms=4, max_deg=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in names)
        terms[exps] = draw(rationals)
    return MultiPoly(names, terms)


@st.composite
def series(draw, names=("u", "v"), cap=4, unit=False):
    terms = {}
    for d in range(cap + 1):
        for i in range(d + 1):
            e = (i, d - i) if len(names) == 2 else (d,)
            if len(names) == 1 and i:
                break
            terms[e] = draw(rationals)
    if unit:
        terms[(0,) * len(names)] = Q(1)
    return TruncatedSeries(names, cap, terms)


@pytest.fixture
def frac():
    return Fraction


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "SUMMARY_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
