import math

import numpy as np
import pytest

from polarsl.errors import DerivativeUnavailableError, DomainError, InsufficientGridError
from polarsl.liouville import (
    DerivativeMode,
    EffectivePotential,
    SturmLiouvilleProblem,
    WeightSpec,
    curvature_term,
    finite_difference_derivatives,
    schrodinger_eigenvalue,
    sturm_liouville_eigenvalue,
    theta_to_y,
    transform,
    y_to_theta,
)
from polarsl.polar import GridSpec, exact_W


def _identity_error(m, N, mode=DerivativeMode.ANALYTIC, window=False):
    theta = GridSpec(N).nodes
    U = transform(SturmLiouvilleProblem.polar(m, theta), mode)
    diff = np.abs(U.values + 0.125 - (m * m - 0.25) / (2 * np.sin(theta) ** 2))
    if window:
        diff = diff[(theta >= math.pi / 4) & (theta <= 3 * math.pi / 4)]
    return float(diff.max())


class TestTransform:
    def test_m1_at_equator(self):
        U = transform(SturmLiouvilleProblem.polar(1, [math.pi / 2]))
        assert U.values[0] == pytest.approx(0.25)
        assert U.values[0] + 0.125 == pytest.approx(0.375)

    def test_m0_at_equator(self):
        U = transform(SturmLiouvilleProblem.polar(0, [math.pi / 2]))
        assert U.values[0] + 0.125 == pytest.approx(-0.125)

    def test_constant_weight_free_problem(self):
        theta = GridSpec(32).nodes
        problem = SturmLiouvilleProblem(WeightSpec.constant(theta, 2.5), 0.0)
        np.testing.assert_array_equal(transform(problem).values, 0.0)

    @pytest.mark.parametrize("m", [0, 1, 2, 3])
    @pytest.mark.parametrize("N", [64, 256])
    def test_sin_weight_identity(self, m, N):
        assert _identity_error(m, N) < 1e-10

    def test_m0_potential_is_negative(self):
        theta = GridSpec(64).nodes
        U = transform(SturmLiouvilleProblem.polar(0, theta))
        assert np.all(U.shifted(0.125) < 0)

    def test_finite_differences_converge_in_the_interior(self):
        errs = [_identity_error(2, N, DerivativeMode.FINITE_DIFFERENCE, window=True) for N in (64, 128, 256)]
        assert errs[0] / errs[1] >= 3.0
        assert errs[1] / errs[2] >= 3.0

    def test_sampled_weight_needs_explicit_mode(self):
        theta = GridSpec(32).nodes
        problem = SturmLiouvilleProblem(WeightSpec.sampled(theta, np.sin(theta)), 1.0)
        with pytest.raises(DerivativeUnavailableError):
            transform(problem)
        fd = transform(problem, DerivativeMode.FINITE_DIFFERENCE)
        assert np.all(np.isfinite(fd.values))

    def test_sampled_weight_with_derivatives_matches_analytic(self):
        theta = GridSpec(64).nodes
        s = np.sin(theta)
        sampled = SturmLiouvilleProblem(WeightSpec.sampled(theta, s, np.cos(theta), -s), 4.0)
        np.testing.assert_allclose(
            transform(sampled).values, transform(SturmLiouvilleProblem.polar(2, theta)).values, atol=1e-9
        )

    def test_fd_needs_three_nodes(self):
        theta = [1.0, 1.5]
        problem = SturmLiouvilleProblem(WeightSpec.sampled(theta, [1.0, 1.0]), 0.0)
        with pytest.raises(InsufficientGridError):
            transform(problem, DerivativeMode.FINITE_DIFFERENCE)


class TestWeightSpec:
    def test_nonpositive_weight(self):
        with pytest.raises(DomainError):
            WeightSpec.sampled([0.5, 1.0, 1.5], [1.0, 0.0, 1.0])

    def test_nodes_outside_domain(self):
        with pytest.raises(DomainError):
            WeightSpec.analytic_sin([0.0, 1.0])

    def test_nodes_not_increasing(self):
        with pytest.raises(DomainError):
            WeightSpec.sampled([1.0, 0.5], [1.0, 1.0])

    def test_negative_singular_coefficient(self):
        with pytest.raises(DomainError):
            SturmLiouvilleProblem(WeightSpec.analytic_sin([1.0]), -1.0)


class TestCurvature:
    def test_equator(self):
        w = WeightSpec.analytic_sin([math.pi / 2])
        assert curvature_term(w, 0) == pytest.approx(0.5)

    def test_closed_form_matches_general_formula(self):
        theta = GridSpec(64).nodes
        s = np.sin(theta)
        general = WeightSpec.sampled(theta, s, np.cos(theta), -s)
        analytic = WeightSpec.analytic_sin(theta)
        for j in (0, 10, 31, -1):
            assert curvature_term(general, j) == pytest.approx(curvature_term(analytic, j), rel=1e-12)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            curvature_term(WeightSpec.analytic_sin([1.0]), 3)


def test_finite_difference_derivatives_of_quadratic_are_exact():
    theta = np.linspace(0.1, 3.0, 30)
    w1, w2 = finite_difference_derivatives(theta, theta**2)
    np.testing.assert_allclose(w1, 2 * theta, atol=1e-10)
    np.testing.assert_allclose(w2, 2.0, atol=1e-8)


def test_finite_difference_rejects_nonuniform_grid():
    with pytest.raises(DomainError):
        finite_difference_derivatives(np.array([0.1, 0.2, 0.4, 0.5]), np.ones(4))


class TestThetaToY:
    def test_equator(self):
        w = WeightSpec.analytic_sin([math.pi / 2])
        assert theta_to_y([math.pi / 2], [1.0], w)[0] == pytest.approx(1.0)

    def test_cos_theta(self):
        w = WeightSpec.analytic_sin([math.pi / 4])
        y = theta_to_y([math.pi / 4], [math.cos(math.pi / 4)], w)[0]
        assert y == pytest.approx(0.5946035575, rel=1e-9)

    def test_inverse(self):
        rng = np.random.default_rng(2)
        theta = np.sort(rng.uniform(1e-3, math.pi - 1e-3, 200))
        theta = np.unique(theta)
        w = WeightSpec.analytic_sin(theta)
        Theta = rng.normal(size=theta.size)
        back = y_to_theta(theta, theta_to_y(theta, Theta, w), w)
        np.testing.assert_allclose(back, Theta, rtol=1e-12)

    def test_sampled_weight_off_nodes(self):
        w = WeightSpec.sampled([1.0, 2.0], [1.0, 1.0])
        with pytest.raises(DomainError):
            theta_to_y([1.5], [1.0], w)


def test_effective_potential_rejects_non_finite():
    with pytest.raises(DomainError):
        EffectivePotential(np.array([1.0]), np.array([np.inf]))


@pytest.mark.parametrize("l", range(6))
def test_eigenvalue_relation(l):
    assert schrodinger_eigenvalue(l * (l + 1)) == pytest.approx(exact_W(l))
    assert sturm_liouville_eigenvalue(exact_W(l)) == pytest.approx(l * (l + 1))


def test_derivative_mode_parse():
    assert DerivativeMode.parse("fd") is DerivativeMode.FINITE_DIFFERENCE
    assert DerivativeMode.parse("analytic") is DerivativeMode.ANALYTIC
    with pytest.raises(DomainError):
        DerivativeMode.parse("spline")
