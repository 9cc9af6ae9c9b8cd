from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from horn_bailey.acceptance import H4_UV, H4_UV_FACTORED, uv_rates
from horn_bailey.exact import (MultiPoly, Q, QuadExtElement, RationalFunction, UnboundSymbolError,
                               UnknownSymbolError, format_rational, monomial_content, poly_eval,
                               ratfunc_diff, ratfunc_eq, symbol, total_derivative)
from horn_bailey.parser import parse_expression
from horn_bailey.reduce import PARAMETERIZATIONS, mixed_coefficient

from conftest import nonzero_rationals, polys, rationals, rf


class TestRationals:
    def test_coercions(self):
        assert Q("3/7") == Q(3, 7) == Q(Fraction(3, 7))

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            Q(0.5)

    def test_format_keeps_unit_denominator(self):
        assert format_rational(5) == "5/1"
        assert format_rational(Q(-6, 4)) == "-3/2"


class TestPolyEval:
    def test_direct_substitution(self):
        assert poly_eval(parse_expression("x^2 + 1"), {"x": 2}) == 5

    def test_zero_polynomial(self):
        assert poly_eval(MultiPoly(), {"x": 3}) == 0

    def test_constant_term_coefficients_at_one(self):
        p = parse_expression("4096*a^6 + 4096*a^5 + 1536*a^4 + 256*a^3 + 16*a^2")
        assert poly_eval(p, {"a": 1}) == 4096 + 4096 + 1536 + 256 + 16 == 10000

    def test_unbound_symbol_is_named(self):
        with pytest.raises(UnboundSymbolError, match="'x'"):
            poly_eval(parse_expression("x*y + 1"), {"y": 1})

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbolError):
            symbol("zeta")


class TestRatfuncEq:
    def test_scalar_scaled_pair(self):
        assert ratfunc_eq(rf("x/y"), rf("2*x/(2*y)"))

    def test_distinct_symbols(self):
        assert not ratfunc_eq(rf("x"), rf("y"))

    def test_unreduced_forms_compare_equal(self):
        assert ratfunc_eq(rf("(x^2 - 1)/(x - 1)"), rf("x + 1"))

    def test_h4_mixed_coefficient_factors_under_uv(self):
        lhs = mixed_coefficient("H4", rates=uv_rates(H4_UV))
        assert ratfunc_eq(lhs, rf(H4_UV_FACTORED))

    def test_factored_form_detects_a_changed_factor(self):
        lhs = mixed_coefficient("H4", rates=uv_rates(H4_UV))
        assert not ratfunc_eq(lhs, rf(H4_UV_FACTORED.replace("(u^2 + 1)^2", "(u^2 + 2)^2")))


class TestRatfuncDiff:
    def test_power_rule(self):
        assert ratfunc_eq(ratfunc_diff(rf("t^2"), "t"), rf("2*t"))

    def test_quotient_rule(self):
        assert ratfunc_eq(ratfunc_diff(rf("1/t"), "t"), rf("-1/t^2"))

    def test_h4_y_component(self):
        d = ratfunc_diff(PARAMETERIZATIONS["H4"].y, "t")
        assert ratfunc_eq(d, rf("(t^2 - 1)/(2*t^2)"))
        assert d.evaluate({"t": 2}) == Q(3, 8)

    def test_total_derivative_chain_rule(self):
        f = rf("u^2*v")
        rates = {"u": rf("udot"), "v": rf("vdot")}
        assert ratfunc_eq(total_derivative(f, rates), rf("2*u*v*udot + u^2*vdot"))


class TestMonomialContent:
    def test_minimum_exponents(self):
        assert monomial_content(parse_expression("u*v^2 + u^2*v^3")) == (1, 2)

    def test_trivial_content(self):
        assert monomial_content(parse_expression("3 + x")) == (0,)

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroDivisionError):
            monomial_content(MultiPoly())

    def test_substituted_denominator_has_content_v_squared(self):
        den = parse_expression("(s^2*t^2 - 1)^2").subs({
            symbol("s"): parse_expression("-1 + 2*u*v"),
            symbol("t"): parse_expression("1 + 2*v"),
        })
        assert [v.name for v in den.vars] == ["u", "v"]
        assert monomial_content(den) == (0, 2)


class TestQuadExt:
    minpoly = (Q(-4), Q(-1))  # theta^2 = -4 theta - 1, a root of t^2 + 4t + 1

    def test_defining_relation(self):
        th = QuadExtElement.theta(self.minpoly)
        assert th * th == QuadExtElement(-1, -4, self.minpoly)

    def test_inverse_of_one(self):
        assert QuadExtElement(1, 0, self.minpoly).inverse() == 1

    def test_inverse_of_theta(self):
        th = QuadExtElement.theta(self.minpoly)
        assert th.inverse() == QuadExtElement(-4, -1, self.minpoly)
        assert th * th.inverse() == 1

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            QuadExtElement(0, 0, self.minpoly).inverse()

    def test_mixed_extensions_rejected(self):
        with pytest.raises(ValueError):
            QuadExtElement.theta(self.minpoly) + QuadExtElement.theta((0, 2))

    @given(rationals, rationals, rationals, rationals)
    def test_field_inverse(self, a0, a1, b0, b1):
        x = QuadExtElement(a0, a1, self.minpoly)
        y = QuadExtElement(b0, b1, self.minpoly)
        if x:
            assert x * x.inverse() == 1
            assert (y / x) * x == y


class TestPolynomialRing:
    @given(polys(), polys(), polys())
    def test_ring_axioms(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert (p - p).is_zero()

    @given(polys(), st.dictionaries(st.sampled_from(["s", "t", "x"]), rationals, min_size=3))
    def test_evaluation_is_a_homomorphism(self, p, bind):
        q = p * p + p
        assert poly_eval(q, bind) == poly_eval(p, bind) ** 2 + poly_eval(p, bind)

    @given(polys(), polys())
    def test_product_rule(self, p, q):
        assert (p * q).diff("t") == p.diff("t") * q + p * q.diff("t")


class TestRationalFunctions:
    @given(polys(), polys(), polys(), nonzero_rationals)
    def test_field_operations(self, p, q, r, c):
        den = q * q + MultiPoly.const(1) if not q.is_zero() else MultiPoly.const(c)
        f = RationalFunction(p, den)
        g = RationalFunction(r + MultiPoly.const(c), den + MultiPoly.const(c * c))
        assert ratfunc_eq((f + g) - g, f)
        if not g.is_zero():
            assert ratfunc_eq((f / g) * g, f)

    @given(polys(), polys())
    def test_quotient_rule_matches_product_rule(self, p, q):
        den = q * q + MultiPoly.const(1)
        f = RationalFunction(p, den)
        # (f * den)' = p'
        lhs = ratfunc_diff(f, "t") * RationalFunction(den) + f * RationalFunction(den.diff("t"))
        assert ratfunc_eq(lhs, RationalFunction(p.diff("t")))

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(MultiPoly.const(1), MultiPoly())
