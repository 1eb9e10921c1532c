import math

import numpy as np
import pytest

from polarsl.errors import DivergenceError, PreconditionError, UnphysicalCouplingError
from polarsl.hft import (
    analytic_dW_dlambda,
    analytic_dW_dlambda_at,
    default_delta,
    dW_dlambda_fd,
    expectation_growth,
    expectation_inv_sin2,
    hft_verify,
)
from polarsl.polar import GridSpec, eigenstate, exact_W_at_coupling, lambda_from_m


class TestAnalytic:
    @pytest.mark.parametrize(
        "m, n, value", [(1, 0, 1.5), (2, 0, 1.25), (3, 0, 3.5 / 3), (1, 1, 2.5), (2, 1, 1.75)]
    )
    def test_closed_form(self, m, n, value):
        assert analytic_dW_dlambda(m, n) == pytest.approx(value)
        assert analytic_dW_dlambda(-m, n) == pytest.approx(value)

    def test_m0_diverges(self):
        with pytest.raises(DivergenceError, match="diverges"):
            analytic_dW_dlambda(0, 0)

    def test_at_coupling_is_derivative_of_law(self):
        lam, n, d = 0.7, 2, 1e-6
        fd = (exact_W_at_coupling(lam + d, n) - exact_W_at_coupling(lam - d, n)) / (2 * d)
        assert analytic_dW_dlambda_at(lam, n) == pytest.approx(fd, rel=1e-8)

    def test_at_coupling_limits(self):
        with pytest.raises(DivergenceError):
            analytic_dW_dlambda_at(-0.125, 0)
        with pytest.raises(UnphysicalCouplingError):
            analytic_dW_dlambda_at(-0.2, 0)

    def test_positive_everywhere_defined(self):
        for lam in np.linspace(-0.12, 5.0, 40):
            for n in range(4):
                assert analytic_dW_dlambda_at(lam, n) > 0


def test_default_delta():
    assert default_delta(0.375) == pytest.approx(1e-4)
    assert default_delta(4.375) == pytest.approx(4.375e-4)


class TestExpectation:
    def test_narrow_support_near_equator(self):
        g = GridSpec(1024)
        y = np.zeros(g.order)
        mid = g.order // 2
        y[mid - 2 : mid + 3] = 1.0
        y /= math.sqrt(float(y @ y) * g.h)
        assert expectation_inv_sin2(y, g) == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("m, limit", [(1, 1.5), (2, 1.25)])
    def test_ground_state_limit(self, m, limit):
        g = GridSpec(2048)
        value = expectation_inv_sin2(eigenstate(lambda_from_m(m), g, 0).y, g)
        assert value == pytest.approx(limit, rel=1e-3)
        assert value >= 1.0

    def test_unnormalized_vector(self):
        g = GridSpec(64)
        with pytest.raises(PreconditionError):
            expectation_inv_sin2(np.ones(g.order), g)

    def test_wrong_length(self):
        with pytest.raises(PreconditionError):
            expectation_inv_sin2(np.ones(5), GridSpec(64))

    def test_m0_grows_without_limit(self):
        values = expectation_growth(0, 0, [GridSpec(N) for N in (512, 1024, 2048, 4096)])
        assert all(b > a for a, b in zip(values, values[1:]))


class TestFiniteDifference:
    @pytest.mark.parametrize("m, n, value", [(1, 0, 1.5), (1, 1, 2.5), (2, 1, 1.75)])
    def test_matches_closed_form(self, m, n, value):
        assert dW_dlambda_fd(m, n, delta=1e-4, grid=GridSpec(1024)) == pytest.approx(value, rel=1e-3)

    def test_m0_refused(self):
        with pytest.raises(DivergenceError):
            dW_dlambda_fd(0, 0)

    def test_step_below_critical_coupling(self):
        with pytest.raises(UnphysicalCouplingError):
            dW_dlambda_fd(1, 0, delta=1.0, grid=GridSpec(64))

    def test_nonpositive_step(self):
        with pytest.raises(PreconditionError):
            dW_dlambda_fd(1, 0, delta=0.0, grid=GridSpec(64))


class TestVerify:
    @pytest.mark.slow
    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_three_way_agreement(self, m, n):
        report = hft_verify(m, n, GridSpec(4096))
        assert report.passed, report.to_dict()
        value = (n + m + 0.5) / m
        for estimate in (report.dW_dlambda_fd, report.expectation, report.analytic):
            assert estimate == pytest.approx(value, rel=1e-3)
        assert report.expectation >= 1.0 - 1e-3

    def test_default_grid_runs(self):
        report = hft_verify(1, 0, richardson_levels=1)
        assert report.grid.N == 4096
        assert report.expectation == pytest.approx(1.5, rel=1e-3)

    @pytest.mark.parametrize("n", [0, 3])
    def test_m0_refused(self, n):
        with pytest.raises(DivergenceError, match="grows monotonically"):
            hft_verify(0, n)

    def test_report_payload(self):
        report = hft_verify(1, 0, GridSpec(512))
        payload = report.to_dict()
        assert list(payload) == [
            "m",
            "n",
            "lambda",
            "dW_dlambda_fd",
            "expectation",
            "analytic",
            "discrepancies",
            "grid",
            "delta",
            "tolerance",
            "passed",
        ]
        assert payload["grid"] == {"N": 512, "h": math.pi / 512}
        assert payload["delta"] == pytest.approx(1e-4)

    def test_tight_tolerance_fails(self):
        report = hft_verify(1, 0, GridSpec(256), tolerance=1e-15)
        assert not report.passed
