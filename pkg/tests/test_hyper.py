import random

import pytest
from hypothesis import given, strategies as st

from horn_bailey.exact import Q, ratfunc_eq, symbol
from horn_bailey.hyper import (HypergeometricSpec, PDESystem, PochhammerPoleError, family_params_ok,
                               hyper_series, pde_residual, pde_system, pochhammer, sample_params)
from horn_bailey.parser import parse_ratfunc
from horn_bailey.series import TruncatedSeries

from conftest import generic_rationals, rf


class TestPochhammer:
    def test_rising_factorial(self):
        assert pochhammer(3, 4) == 360

    def test_empty_product(self):
        assert pochhammer(Q(2, 7), 0) == 1

    def test_negative_index(self):
        assert pochhammer(5, -2) == Q(1, 12)

    def test_half(self):
        assert pochhammer(Q(1, 2), 3) == Q(15, 8)

    def test_negative_pole(self):
        with pytest.raises(PochhammerPoleError):
            pochhammer(3, -3)

    @given(generic_rationals, st.integers(-6, 6))
    def test_backward_recurrence(self, a, k):
        # (a)_{k-1} = (a)_k / (a + k - 1) across the sign change
        assert pochhammer(a, k - 1) == pochhammer(a, k) / (a + k - 1)

    @given(generic_rationals, st.integers(0, 5), st.integers(0, 5))
    def test_shift_rule(self, a, m, n):
        assert pochhammer(a, m + n) == pochhammer(a, m) * pochhammer(a + m, n)


class TestSeriesCoefficients:
    a, b, c, d = Q(2, 7), Q(3, 5), Q(5, 11), Q(7, 3)

    def test_geometric(self):
        F = hyper_series(HypergeometricSpec("2F1", (1, 1, 1)), 6)
        assert all(F.coefficient((k,)) == 1 for k in range(7))

    def test_h4_first_x_coefficient(self):
        F = hyper_series(HypergeometricSpec("H4", (self.a, self.b, self.c, self.d)), 3)
        assert F.coefficient((1, 0)) == self.a * (self.a + 1) / self.c

    def test_h1_first_y_coefficient(self):
        F = hyper_series(HypergeometricSpec("H1", (self.a, self.b, self.c, self.d)), 3)
        assert F.coefficient((0, 1)) == self.b * self.c / (self.a - 1)

    def test_h5_first_x_coefficient(self):
        F = hyper_series(HypergeometricSpec("H5", (self.a, self.b, self.c)), 3)
        assert F.coefficient((1, 0)) == self.a * (self.a + 1) / (self.b - 1)

    def test_f4_double_sum(self):
        F = hyper_series(HypergeometricSpec("F4", (self.a, self.b, self.c, self.d)), 4)
        expected = (pochhammer(self.a, 3) * pochhammer(self.b, 3)
                    / (pochhammer(self.c, 1) * pochhammer(self.d, 2) * 2))
        assert F.coefficient((1, 2)) == expected

    def test_pole_is_located(self):
        with pytest.raises(PochhammerPoleError, match=r"\(3, 0\)"):
            hyper_series(HypergeometricSpec("H5", (Q(1, 2), 3, Q(1, 3))), 5)

    def test_lower_parameter_validation(self):
        with pytest.raises(ValueError):
            HypergeometricSpec("2F1", (1, 1, -2))
        with pytest.raises(ValueError, match="takes 4 parameters"):
            HypergeometricSpec("H4", (1, 2, 3))

    def test_admissibility(self):
        assert not HypergeometricSpec("H1", (3, Q(1, 2), Q(1, 3), Q(1, 5))).admissible(8)
        assert HypergeometricSpec("H1", (Q(5, 2), Q(1, 2), Q(1, 3), Q(1, 5))).admissible(8)


class TestPDESystems:
    def test_h4_first_operator_fxx(self):
        assert ratfunc_eq(pde_system("H4", [1, 2, 3, 4]).coefficient(0, "Fxx"), rf("x*(1 - 4*x)"))

    def test_h1_second_operator_fy(self):
        sys = pde_system("H1", ["a", "b", "c", "d"])
        assert ratfunc_eq(sys.coefficient(1, "Fy"), rf("a - 1 - (b + c + 1)*y"))

    def test_h5_second_operator_fxx(self):
        assert ratfunc_eq(pde_system("H5", [1, 2, 3]).coefficient(1, "Fxx"), rf("2*x^2"))

    def test_arity(self):
        with pytest.raises(ValueError, match="takes 3 parameters"):
            pde_system("H5", [1, 2, 3, 4])

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            pde_system("F4", [1, 2, 3, 4])


def _residuals_vanish(family, params, cap=10):
    F = hyper_series(HypergeometricSpec(family, tuple(params)), cap)
    r1, r2 = pde_residual(F, pde_system(family, params))
    return r1.is_zero() and r2.is_zero() and r1.cap == cap - 2


class TestResiduals:
    def test_h4_reference_parameters(self):
        assert _residuals_vanish("H4", [Q(1, 3), Q(1, 5), Q(4, 7), Q(6, 5)])

    def test_constant_series_leaves_only_f_slot(self):
        a, b, c, d = Q(1, 3), Q(1, 5), Q(4, 7), Q(6, 5)
        r1, r2 = pde_residual(TruncatedSeries.const(("x", "y"), 4), pde_system("H4", [a, b, c, d]))
        assert r1.to_poly().constant_value() == -a * (a + 1)
        assert r2.to_poly().constant_value() == -a * b

    @pytest.mark.parametrize("family", ["H1", "H4", "H5"])
    def test_sampled_parameters(self, family):
        rng = random.Random(f"residual:{family}")
        names = "abc" if family == "H5" else "abcd"
        for _ in range(3):
            b = sample_params(rng, list(names), lambda p: family_params_ok(family, [p[n] for n in names], 10))
            assert _residuals_vanish(family, [b[n] for n in names])

    @pytest.mark.parametrize("family", ["H1", "H4", "H5"])
    def test_wrong_parameters_leave_residual(self, family):
        params = [Q(1, 3), Q(2, 7), Q(3, 5), Q(5, 9)][: 3 if family == "H5" else 4]
        F = hyper_series(HypergeometricSpec(family, tuple(params)), 8)
        shifted = list(params)
        shifted[-1] += Q(1, 3)
        r1, r2 = pde_residual(F, pde_system(family, shifted))
        assert not (r1.is_zero() and r2.is_zero())

    def test_cap_too_small(self):
        with pytest.raises(ValueError):
            pde_residual(TruncatedSeries.const(("x", "y"), 1), pde_system("H4", [1, 2, 3, 4]))


SIGN_VARIANT_H1_SECOND = {"Fyy": "y*(1 + y)", "Fxy": "-x*(1 - y)",
                     "Fy": "a - 1 - (b + c + 1)*y", "Fx": "-c*x", "F": "-b*c"}
SIGN_VARIANT_H5_FIRST = {"Fxx": "x*(1 + 4*x)", "Fxy": "-y*(4*x - 1)", "Fyy": "-y^2",
                    "Fx": "1 - b + (4*a - 6)*x", "Fy": "2*(a + 1)*y", "F": "a*(a + 1)"}


def _bound(table, names, params):
    binding = {symbol(n): Q(v) for n, v in zip(names, params)}
    return {slot: parse_ratfunc(text).subs(binding) for slot, text in table.items()}


@pytest.mark.parametrize("family, index, table", [
    ("H1", 1, SIGN_VARIANT_H1_SECOND),
    ("H5", 0, SIGN_VARIANT_H5_FIRST),
])
def test_operator_variants_with_other_signs_do_not_annihilate(family, index, table):
    names = "abc" if family == "H5" else "abcd"
    params = [Q(1, 3), Q(2, 7), Q(3, 5), Q(5, 9)][: len(names)]
    F = hyper_series(HypergeometricSpec(family, tuple(params)), 8)
    ops = list(pde_system(family, params).operators)
    ops[index] = _bound(table, names, params)
    residuals = pde_residual(F, PDESystem(family, tuple(ops)))
    assert not residuals[index].is_zero()
    assert residuals[1 - index].is_zero()
