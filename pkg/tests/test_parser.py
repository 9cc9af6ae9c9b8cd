import pytest
from hypothesis import given

from horn_bailey.exact import MultiPoly, RationalFunction, ratfunc_eq
from horn_bailey.fixtures import FIXTURE_NAMES, fixture_text, load_fixture
from horn_bailey.parser import ExpressionSyntaxError, parse_expression, parse_rational, parse_ratfunc, serialize

from conftest import polys, rf


def test_polynomial_with_two_terms():
    p = parse_expression("2*b*s^4*t^6 + c*s^4*t^6")
    assert isinstance(p, MultiPoly)
    assert len(p.terms) == 2


def test_division_by_polynomial_gives_rational_function():
    f = parse_expression("(t+1)^2/(2*t)")
    assert isinstance(f, RationalFunction)
    assert ratfunc_eq(f, rf("1 + (t + 1/t)/2"))


def test_division_by_number_stays_polynomial():
    assert parse_expression("(x + 1)/2") == parse_expression("x/2 + 1/2")


@pytest.mark.parametrize("text, expected", [
    ("-2^2", -4),        # unary minus applies after the power
    ("1 - 2 - 3", -4),
    ("12 / 3 / 2", 2),
    ("2 * (3 + 4)", 14),
    ("(2^3)^2", 64),
])
def test_precedence_and_associativity(text, expected):
    assert parse_expression(text) == MultiPoly.const(expected)


def test_exponent_is_not_chained():
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression("2^3^2")
    assert err.value.offset == 3


def test_whitespace_is_insignificant():
    assert parse_expression(" x *\n y\t+ 1 ") == parse_expression("x*y+1")


@pytest.mark.parametrize("text, offset", [
    ("x^", 2),
    ("(x+1", 4),
    ("x+*y", 2),
    ("x^-1", 2),
    ("x $ y", 2),
    ("", 0),
])
def test_syntax_errors_report_offset(text, offset):
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression(text)
    assert err.value.offset == offset


def test_error_carries_line_and_column():
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression("x + 1\n + * y")
    assert (err.value.line, err.value.column) == (2, 4)


def test_unknown_symbol():
    with pytest.raises(ExpressionSyntaxError, match="unknown symbol 'foo'"):
        parse_expression("foo + 1")


def test_division_by_zero_polynomial():
    with pytest.raises(ExpressionSyntaxError, match="division by zero"):
        parse_expression("x/(y - y)")


def test_parse_rational():
    assert parse_rational("-3/7") * 7 == -3
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(ValueError):
        parse_rational("0.5")


@given(polys(names=("a", "s", "t")), polys(names=("s", "t")))
def test_serialize_round_trip(p, q):
    assert parse_expression(serialize(p)) == p
    if not q.is_zero():
        f = RationalFunction(p, q)
        assert ratfunc_eq(parse_ratfunc(serialize(f)), f)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_round_trip(name):
    f = load_fixture(name)
    assert ratfunc_eq(parse_ratfunc(serialize(f)), f)
    assert ratfunc_eq(parse_ratfunc(fixture_text(name)), f)
