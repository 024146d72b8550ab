"""
Unit tests for the tanh-sinh quadrature engine.
"""
import math

import numpy as np
import pytest

from src.errors import IntegrandEvaluationError, ParameterDomainError
from src.quadrature import (
    IntegralResult,
    integrate_halfline,
    integrate_interval,
    integrate_unit,
    order_stat_moment,
    order_stat_moment_integral,
)


class TestIntegrateUnit:
    """Test suite for integrals over (0, 1)."""

    def test_polynomial(self):
        """Test a smooth integrand."""
        result = integrate_unit(lambda u: 3.0 * u * u)
        assert result.value == pytest.approx(1.0, abs=1e-12)
        assert result.converged

    def test_endpoint_singularity(self):
        """Test an inverse square root singularity at 0."""
        result = integrate_unit(lambda u: 1.0 / np.sqrt(u))
        assert result.value == pytest.approx(2.0, rel=1e-9)
        assert result.converged

    def test_log_singularity_at_one(self):
        """Test ln(1 - u) at the right end."""
        result = integrate_unit(lambda u: np.log1p(-u))
        assert result.value == pytest.approx(-1.0, rel=1e-9)

    def test_budget_exhaustion_reports_not_converged(self):
        """Test a tiny evaluation budget yields converged=False instead of raising."""
        result = integrate_unit(lambda u: 1.0 / np.sqrt(u), max_evaluations=20)
        assert not result.converged
        assert result.evaluations <= 20

    def test_nan_integrand_raises(self):
        """Test NaN values raise IntegrandEvaluationError with the abscissa."""
        with pytest.raises(IntegrandEvaluationError) as exc_info:
            integrate_unit(lambda u: np.where(u > 0.5, np.nan, u))
        assert exc_info.value.abscissa > 0.5


class TestOtherDomains:
    """Test suite for half-line and interval integrals."""

    def test_halfline_exponential(self):
        """Test the exponential density integrates to 1."""
        assert integrate_halfline(lambda x: np.exp(-x)).value == pytest.approx(1.0, rel=1e-9)

    def test_halfline_with_lower(self):
        """Test a shifted half-line."""
        assert integrate_halfline(lambda x: np.exp(-x), lower=1.0).value == pytest.approx(math.exp(-1.0), rel=1e-9)

    def test_whole_line_gaussian(self):
        """Test the Gaussian integral over the real line."""
        result = integrate_interval(lambda x: np.exp(-x * x), -math.inf, math.inf)
        assert result.value == pytest.approx(math.sqrt(math.pi), rel=1e-9)

    def test_finite_interval(self):
        """Test a finite interval is rescaled."""
        assert integrate_interval(lambda x: x, 1.0, 3.0).value == pytest.approx(4.0, rel=1e-12)

    def test_empty_interval(self):
        """Test equal bounds give zero."""
        assert integrate_interval(lambda x: x, 2.0, 2.0) == IntegralResult(0.0, 0.0, 0, True)

    def test_reversed_bounds(self):
        """Test reversed bounds raise ParameterDomainError."""
        with pytest.raises(ParameterDomainError):
            integrate_interval(lambda x: x, 2.0, 1.0)

    def test_results_add(self):
        """Test IntegralResult addition combines errors and convergence."""
        total = IntegralResult(1.0, 1e-12, 10, True) + IntegralResult(2.0, 1e-12, 5, False)
        assert total.value == 3.0
        assert total.evaluations == 15
        assert not total.converged


class TestOrderStatMoment:
    """Test suite for moments of exponential order statistics."""

    def test_minimum_of_two_mean(self):
        """Test E W_{1:2} = 1/2."""
        assert order_stat_moment(1, 1, 1) == pytest.approx(0.5, rel=1e-9)

    def test_minimum_of_two_second_moment(self):
        """Test E W_{1:2}^2 = 2/4."""
        assert order_stat_moment(1, 1, 2) == pytest.approx(0.5, rel=1e-9)

    def test_third_of_four_mean(self):
        """Test E W_{3:4} = 1/4 + 1/3 + 1/2."""
        assert order_stat_moment(2, 2, 1) == pytest.approx(13.0 / 12.0, rel=1e-9)

    def test_nonpositive_exponent(self):
        """Test m <= 0 is rejected."""
        with pytest.raises(ParameterDomainError):
            order_stat_moment_integral(1, 1, 0.0)

    def test_budget_reaches_moment_integral(self):
        """Test the evaluation budget is honoured by the moment integral."""
        assert not order_stat_moment_integral(1, 1, 1.0, max_evaluations=20).converged
        assert order_stat_moment_integral(1, 1, 1.0).converged


# (integrand, lower, upper, exact value)
KNOWN_INTEGRALS = [
    (lambda u: 3.0 * u * u, 0.0, 1.0, 1.0),
    (lambda u: 1.0 / np.sqrt(u), 0.0, 1.0, 2.0),
    (lambda u: np.log1p(-u), 0.0, 1.0, -1.0),
    (lambda u: -np.log(u), 0.0, 1.0, 1.0),
    (lambda u: np.sqrt(u * (1.0 - u)), 0.0, 1.0, math.pi / 8.0),
    (lambda x: np.cos(x), 0.0, math.pi / 2.0, 1.0),
    (lambda x: np.exp(-x), 0.0, math.inf, 1.0),
    (lambda x: x * x * np.exp(-x), 0.0, math.inf, 2.0),
    (lambda x: 1.0 / (1.0 + x * x), 0.0, math.inf, math.pi / 2.0),
    (lambda x: np.exp(-x * x), -math.inf, math.inf, math.sqrt(math.pi)),
    (lambda x: 2.0 * np.power(x, -3.0), 1.0, math.inf, 1.0),
]


class TestAccuracy:
    """Test suite for linearity and the reported error estimate."""

    @pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.5, -0.5), (-3.0, 4.0)])
    def test_linearity(self, a, b):
        """Test the integral of a f + b g equals a times the integral of f plus b times that of g."""
        f = lambda u: 1.0 / np.sqrt(u)  # noqa: E731
        g = lambda u: np.log1p(-u)  # noqa: E731
        combined = integrate_unit(lambda u: a * f(u) + b * g(u)).value
        separate = a * integrate_unit(f).value + b * integrate_unit(g).value
        assert combined == pytest.approx(separate, abs=1e-10)

    def test_linearity_on_halfline(self):
        """Test linearity for a half-line integral."""
        f = lambda x: np.exp(-x)  # noqa: E731
        g = lambda x: 1.0 / (1.0 + x * x)  # noqa: E731
        combined = integrate_halfline(lambda x: 3.0 * f(x) - 2.0 * g(x)).value
        assert combined == pytest.approx(3.0 * integrate_halfline(f).value - 2.0 * integrate_halfline(g).value,
                                         abs=1e-10)

    @pytest.mark.parametrize("f,lower,upper,exact", KNOWN_INTEGRALS)
    def test_error_estimate_bounds_true_error(self, f, lower, upper, exact):
        """Test |value - exact| stays within the reported estimate, up to rounding."""
        result = integrate_interval(f, lower, upper)
        assert result.converged
        rounding = 1e-14 * max(1.0, abs(exact))
        assert abs(result.value - exact) <= result.abs_error_estimate + rounding
