import random

import pytest
from hypothesis import given

from horn_bailey.acceptance import _bound_ode, sample_slots
from horn_bailey.exact import Q, RationalFunction, symbol
from horn_bailey.fuchs import (COVERINGS, FactorizationError, FuchsError, GaugeFactor, IrregularSingularityError,
                               SingularPoint, UPoly, check_exponent_table, exponent_table, factor_degree_two,
                               gauss_pullback, hypergeometric_ode, indicial_exponents, local_data, pullback_ode,
                               singular_points, solve_gauss_parameters, squarefree_part, upoly_gcd)
from horn_bailey.reduce import ODE2

from conftest import generic_rationals, rf


def P(*coeffs):
    """UPoly from coefficients, constant term first."""
    return UPoly([Q(c) for c in coeffs])


def fuchs_sum(ode):
    """Sum of all exponents minus (number of singular points - 2), counting
    both roots of a quadratic point."""
    total, count = Q(0), 0
    for p, (e1, e2) in exponent_table(ode):
        k = 2 if p.kind == "quadratic" else 1
        total += k * (e1 + e2)
        count += k
    return total - (count - 2)


class TestUnivariate:
    def test_gcd(self):
        a = P(-1, 0, 1)           # t^2 - 1
        b = P(1, 2, 1)            # (t + 1)^2
        assert upoly_gcd(a, b) == P(1, 1)

    def test_squarefree_part(self):
        p = P(1, 2, 1) * P(-2, 1)
        assert squarefree_part(p * P(-2, 1)) == (P(1, 1) * P(-2, 1)).monic()

    def test_factor_into_linear_and_quadratic(self):
        p = P(1, 6, 1) * P(-1, 1) * P(3, 2)
        factors = factor_degree_two(p)
        assert sorted(f.degree for f in factors) == [1, 1, 2]
        prod = P(1)
        for f in factors:
            prod = prod * f
        assert prod == p.monic()

    def test_irreducible_cubic_rejected(self):
        with pytest.raises(FactorizationError):
            factor_degree_two(P(-2, 0, 0, 1))


class TestSingularPoints:
    def test_h4_set_at_one_third(self):
        ode = _bound_ode("H4", {"q0": Q(2, 5), "q1": Q(3, 7)}, Q(1, 3))
        points = singular_points(ode)
        rational = {p.value for p in points if p.kind == "rational"}
        quadratic = {p.value for p in points if p.kind == "quadratic"}
        assert rational == {0, 1, -1}
        assert quadratic == {(6, 1), (Q(2, 3), 1)}
        assert any(p.kind == "infinity" for p in points)
        assert len(points) == 6

    def test_h5_at_one_half(self):
        ode = _bound_ode("H5", {"q": Q(2, 7)}, Q(1, 2))
        points = singular_points(ode)
        assert SingularPoint("rational", Q(-1, 2)) in points
        # 144 s^2 t^2 + 4 s^2 + 32 s t + 4 t^2 + 1 at s = 1/2, made monic
        assert SingularPoint("quadratic", (Q(2, 5), Q(1, 20))) in points

    def test_trivial_equation(self):
        # y'' = 0 has the solutions 1 and t; at infinity they behave like w^0, w^-1
        ode = ODE2(RationalFunction(0), RationalFunction(0))
        assert singular_points(ode) == [SingularPoint.infinity()]
        assert indicial_exponents(ode, SingularPoint.infinity()) == (-1, 0)

    def test_quadratic_point_must_be_irreducible(self):
        with pytest.raises(ValueError):
            SingularPoint("quadratic", (0, -1))


class TestIndicialExponents:
    q0, q1, q = Q(2, 5), Q(3, 7), Q(2, 7)

    def test_h4_origin(self):
        ode = _bound_ode("H4", {"q0": self.q0, "q1": self.q1}, Q(1, 3))
        assert indicial_exponents(ode, SingularPoint("rational", 0)) == (self.q0, self.q0 + 1)

    def test_h4_minus_one(self):
        ode = _bound_ode("H4", {"q0": self.q0, "q1": self.q1}, Q(1, 3))
        assert indicial_exponents(ode, SingularPoint("rational", -1)) == (0, 2 - 4 * self.q1)

    def test_h5_minus_s(self):
        s = Q(1, 2)
        ode = _bound_ode("H5", {"q": self.q}, s)
        assert indicial_exponents(ode, SingularPoint("rational", -s)) == (0, 1 - 2 * self.q)

    def test_h1_quadratic_point(self):
        s = Q(1, 3)
        ode = _bound_ode("H1", {"q0": self.q0}, s)
        point = SingularPoint("quadratic", (2 * s, 1))   # t^2 + 2 t s + 1
        assert indicial_exponents(ode, point) == (0, 1 - 2 * self.q0)

    def test_gauss_riemann_scheme(self):
        a, b, c = Q(1, 3), Q(1, 5), Q(2, 7)
        ode = hypergeometric_ode(a, b, c)
        assert indicial_exponents(ode, SingularPoint("rational", 0)) == (0, 1 - c)
        assert indicial_exponents(ode, SingularPoint("rational", 1)) == tuple(sorted((0, c - a - b)))
        assert indicial_exponents(ode, SingularPoint.infinity()) == tuple(sorted((a, b)))

    def test_irregular(self):
        ode = ODE2(rf("1/t^2"), RationalFunction(0))
        with pytest.raises(IrregularSingularityError):
            local_data(ode, SingularPoint("rational", 0))

    def test_irrational_roots(self):
        ode = ODE2(RationalFunction(0), rf("-1/t^2"))
        with pytest.raises(FuchsError, match="irrational"):
            indicial_exponents(ode, SingularPoint("rational", 0))

    @given(generic_rationals, generic_rationals, generic_rationals)
    def test_fuchs_relation_for_gauss(self, a, b, c):
        assert fuchs_sum(hypergeometric_ode(a, b, c)) == 0

    def test_fuchs_relation_for_h4(self):
        assert fuchs_sum(_bound_ode("H4", {"q0": self.q0, "q1": self.q1}, Q(1, 3))) == 0


class TestPullback:
    def test_identity_covering(self):
        ode = hypergeometric_ode(Q(1, 3), Q(1, 5), Q(2, 7), var="t")
        assert pullback_ode(ode, rf("t")) == ode

    def test_constant_covering(self):
        with pytest.raises(FuchsError):
            pullback_ode(hypergeometric_ode(1, 2, 3), rf("5"))

    def test_gauge_by_power_of_t(self):
        # if g solves y'' = 0 then h = t^e g solves the gauged equation
        ode = pullback_ode(ODE2(RationalFunction(0), RationalFunction(0), "t"), rf("t"),
                           GaugeFactor.parse([("t", "3/2")]))
        assert indicial_exponents(ode, SingularPoint("rational", 0)) == (Q(3, 2), Q(5, 2))

    @pytest.mark.parametrize("family", ["H4", "H1", "H5"])
    def test_equals_reduced_equation(self, family):
        rng = random.Random(f"pullback:{family}")
        slots = sample_slots(family, rng)
        for s in (Q(1, 3), Q(2, 5)):
            assert gauss_pullback(family, s, slots) == _bound_ode(family, slots, s)

    def test_wrong_gauge_exponent_breaks_equality(self):
        slots, s = {"q": Q(2, 7)}, Q(1, 3)
        data = COVERINGS["H5"]
        a, b, c = solve_gauss_parameters(data.constraints, slots)
        binding = {symbol("s"): s, symbol("q"): slots["q"]}
        cov = rf(data.covering).subs(binding)
        gauge = GaugeFactor.parse([("12*s*t + 1", "1 - 3*q"), ("t", "2*q")]).subs(binding)
        assert pullback_ode(hypergeometric_ode(a, b, c), cov, gauge) != _bound_ode("H5", slots, s)


class TestGaussParameters:
    q0, q1, q = Q(2, 5), Q(3, 7), Q(2, 7)

    def test_h4(self):
        got = solve_gauss_parameters(COVERINGS["H4"].constraints, {"q0": self.q0, "q1": self.q1})
        assert got == (self.q0 / 2 + Q(1, 2), self.q0 / 2, self.q1 + Q(1, 2))

    def test_h1(self):
        got = solve_gauss_parameters(COVERINGS["H1"].constraints, {"q0": self.q0})
        assert got == (self.q0 - Q(1, 4), self.q0, Q(3, 4))

    def test_h5(self):
        got = solve_gauss_parameters(COVERINGS["H5"].constraints, {"q": self.q})
        assert got == (3 * self.q / 2 - Q(1, 2), 3 * self.q / 2, self.q + Q(1, 2))

    def test_underdetermined(self):
        with pytest.raises(FuchsError):
            solve_gauss_parameters(["a + b = 1", "2*a + 2*b = 2", "c = 1"])

    def test_inconsistent(self):
        with pytest.raises(FuchsError):
            solve_gauss_parameters(["a + b = 1", "a + b = 2", "c = 1"])

    def test_malformed(self):
        with pytest.raises(FuchsError):
            solve_gauss_parameters(["a + b", "a = 1", "c = 1"])


@pytest.mark.parametrize("family", ["H4", "H1", "H5"])
def test_exponent_tables(family):
    rng = random.Random(f"table:{family}")
    slots = sample_slots(family, rng)
    for s in (Q(1, 3), Q(2, 5)):
        ok, rows, extra = check_exponent_table(family, _bound_ode(family, slots, s), s, slots)
        assert ok, [r for r in rows if not r.ok]
        assert not extra


def test_exponent_table_detects_wrong_parameters():
    slots, s = {"q": Q(2, 7)}, Q(1, 3)
    ok, rows, _ = check_exponent_table("H5", _bound_ode("H5", slots, s), s, {"q": Q(3, 7)})
    assert not ok
