import pytest
from hypothesis import given, strategies as st

from horn_bailey.discover import (DEFAULT_GRID, DEFAULT_SAMPLES, DiscoveryError, ExactMatrix, KernelRelation,
                                  discover_relation, kernel_samples, left_kernel, monomial_matrix, ode_residual,
                                  ode_series_solution, projective_ratio, rational_reconstruction,
                                  reconstruct_relation, verify_relation)
from horn_bailey.exact import MultiPoly, Q, symbol
from horn_bailey.fixtures import load_fixture_expression
from horn_bailey.parser import parse_expression

from conftest import generic_rationals, rationals


@pytest.fixture(scope="module")
def discovered():
    return discover_relation()


@pytest.fixture(scope="module")
def reference():
    return KernelRelation.from_polynomial(load_fixture_expression("h5_relation"))


class TestSeriesSolution:
    def test_first_coefficient_at_one(self):
        assert ode_series_solution(1, 5).coefficient((1,)) == Q(-11, 10)

    def test_first_coefficient_vanishes_at_one_twelfth(self):
        assert ode_series_solution(Q(1, 12), 5).coefficient((1,)) == 0

    @given(generic_rationals.filter(lambda a: a != Q(-1, 4)))
    def test_first_coefficient_formula(self, x0):
        x1 = ode_series_solution(x0, 1).coefficient((1,))
        assert x1 == -x0 * (12 * x0 - 1) / (2 * (4 * x0 + 1))

    @pytest.mark.parametrize("x0", [Q(3), Q(-2, 7), Q(5, 3)])
    def test_residual_vanishes(self, x0):
        sol = ode_series_solution(x0, 12)
        assert all(c == 0 for c in ode_residual(sol)[:11])

    @pytest.mark.parametrize("x0", [0, Q(-1, 4)])
    def test_singular_start(self, x0):
        with pytest.raises(DiscoveryError, match="order 0"):
            ode_series_solution(x0, 4)


class TestMonomialMatrix:
    def test_leading_rows(self):
        m = monomial_matrix(ode_series_solution(1, 30), DEFAULT_GRID, 30)
        assert (m.rows, m.cols) == (12, 30)
        assert m.row(0)[:3] == (1, 0, 0)            # (u, v) = (0, 0)
        assert m.row(1)[:3] == (0, 1, 0)            # (0, 1)
        assert m.row(3)[:2] == (1, Q(-11, 10))      # (1, 0)

    def test_cap_too_small(self):
        with pytest.raises(ValueError):
            monomial_matrix(ode_series_solution(1, 10), DEFAULT_GRID, 30)


class TestLeftKernel:
    def test_identity(self):
        assert left_kernel(ExactMatrix.from_rows([[1, 0], [0, 1]])) == []

    def test_equal_rows(self):
        assert left_kernel(ExactMatrix.from_rows([[2, 3], [2, 3]])) == [(1, -1)]

    def test_rational_entries(self):
        m = ExactMatrix.from_rows([[Q(1, 2), Q(1, 3)], [Q(3, 2), 1], [1, 1]])
        assert left_kernel(m) == [(3, -1, 0)]

    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    def test_kernel_property(self, n, k, data):
        rows = [[data.draw(rationals) for _ in range(k)] for _ in range(n)]
        m = ExactMatrix.from_rows(rows)
        basis = left_kernel(m)
        for c in basis:
            assert any(c)
            assert next(x for x in c if x) > 0
            assert all(sum(c[i] * rows[i][j] for i in range(n)) == 0 for j in range(k))
        rank = _rank(rows)
        assert len(basis) == n - rank

    def test_kernel_is_one_dimensional_for_sample_constants(self):
        for a, basis in kernel_samples([-10, -1, 1, 7], 30):
            assert len(basis) == 1, a


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    for col in range(len(rows[0])):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


class TestReconstruction:
    def test_recovers_rational_function(self):
        f = lambda a: (a * a + 1) / (a - 3)
        points = [(Q(a), f(Q(a))) for a in (-4, -2, -1, 1, 2, 5, 6)]
        N, D = rational_reconstruction(points, 2, 1)
        assert all(N(a) / D(a) == v for a, v in points)
        assert D.degree == 1

    def test_prefers_smallest_denominator(self):
        points = [(Q(a), Q(a) ** 2) for a in range(1, 8)]
        N, D = rational_reconstruction(points, 2, 2)
        assert D.degree == 0

    def test_too_few_samples(self):
        with pytest.raises(DiscoveryError, match="at least"):
            rational_reconstruction([(Q(1), Q(1))], 2, 2)

    def test_bounds_too_small(self):
        samples = [(a, basis[0]) for a, basis in kernel_samples(DEFAULT_SAMPLES, 30)]
        with pytest.raises(DiscoveryError, match="degree bounds too small"):
            reconstruct_relation(samples, DEFAULT_GRID, (3, 0), (2, 2))

    def test_pivot_outside_grid(self):
        with pytest.raises(DiscoveryError):
            reconstruct_relation([(1, (1,) * 12)], DEFAULT_GRID, (4, 0), (1, 1))


class TestDiscoveredRelation:
    def test_matches_reference_exactly(self, discovered, reference):
        rel, kernels = discovered
        assert projective_ratio(dict(rel.coefficients), dict(reference.coefficients)) == 1
        assert all(len(basis) == 1 for _, basis in kernels)

    def test_spot_coefficients(self, discovered):
        rel, _ = discovered
        x2y2 = parse_expression("2985984*a^6 - 1492992*a^5 + 311040*a^4 - 34560*a^3 + 2160*a^2 - 72*a + 1")
        c00 = parse_expression("4096*a^6 + 4096*a^5 + 1536*a^4 + 256*a^3 + 16*a^2")
        assert rel.coefficient(2, 2) == x2y2
        assert rel.coefficient(0, 0) == c00

    def test_pivot_sign(self, discovered):
        rel, _ = discovered
        assert rel.coefficient(3, 0).leading_coefficient() < 0

    def test_stable_under_extra_samples(self, discovered):
        rel, _ = discovered
        extra = sorted(DEFAULT_SAMPLES + (-12, -11, 11, 12))
        again, _ = discover_relation(extra)
        assert again == rel

    def test_each_kernel_matches_reference(self, discovered, reference):
        _, kernels = discovered
        for a, basis in kernels:
            vec = dict(zip(sorted(DEFAULT_GRID), [Q(x) for x in basis[0]]))
            assert projective_ratio(vec, reference.at(a)) is not None

    def test_vanishes_on_curve(self, discovered):
        assert verify_relation(discovered[0])


class TestVerifyRelation:
    def test_reference(self, reference):
        assert verify_relation(reference)

    def test_shifted_y(self, reference):
        f = reference.to_polynomial()
        shifted = f.subs({symbol("y"): MultiPoly.var("y") + MultiPoly.const(1)})
        assert not verify_relation(KernelRelation.from_polynomial(shifted))

    def test_single_point_evaluation_of_shift_is_nonzero(self, reference):
        from horn_bailey.reduce import PARAMETERIZATIONS
        P = PARAMETERIZATIONS["H5"]
        s, t = Q(1, 2), Q(1, 3)
        bind = {symbol("s"): s, symbol("t"): t}
        x, y = P.x.evaluate(bind), P.y.evaluate(bind)
        f = reference.to_polynomial()
        assert f.evaluate({"a": s * s, "x": x, "y": y}) == 0
        assert f.evaluate({"a": s * s, "x": x, "y": y + 1}) != 0


def test_projective_ratio():
    assert projective_ratio({1: Q(2), 2: Q(4)}, {1: Q(1), 2: Q(2)}) == 2
    assert projective_ratio({1: Q(2), 2: Q(4)}, {1: Q(1), 2: Q(3)}) is None
    assert projective_ratio({1: Q(2)}, {2: Q(2)}) is None
