"""
Unit tests for weight functions.
"""
import numpy as np
import pytest

from src.errors import ConfigError, ParameterDomainError
from src.weights import (
    WeightSpec,
    identity_weight,
    odd_custom_weight,
    power_weight,
    tabulated_weight,
    weight_from_dict,
)


class TestPowerWeight:
    """Test suite for w(x) = x^m."""

    def test_evaluate_integer_exponent(self):
        """Test integer exponents are exact."""
        np.testing.assert_array_equal(power_weight(2).evaluate([1.0, 2.0, 3.0]), [1.0, 4.0, 9.0])

    def test_fractional_exponent_undefined_for_negative_x(self):
        """Test a fractional power is NaN left of zero."""
        values = power_weight(0.5).evaluate([-1.0, 4.0])
        assert np.isnan(values[0])
        assert values[1] == pytest.approx(2.0)

    def test_nonpositive_exponent_rejected(self):
        """Test m <= 0 raises ParameterDomainError."""
        with pytest.raises(ParameterDomainError):
            power_weight(0)

    def test_label(self):
        """Test power weight label."""
        assert power_weight(2).label == "x^2"
        assert identity_weight().label == "x"

    def test_callable(self):
        """Test WeightSpec can be called like a function."""
        assert float(power_weight(3)(2.0)) == 8.0

    def test_odd_metadata(self):
        """Test odd integer exponents are declared odd."""
        assert power_weight(1).is_odd
        assert not power_weight(2).is_odd


class TestWeightShapeChecks:
    """Test suite for grid shape checks."""

    def test_identity_is_odd_on_grid(self):
        """Test w(x) = x passes the oddness check."""
        assert identity_weight().is_odd_on_grid()

    def test_square_is_not_odd_on_grid(self):
        """Test w(x) = x^2 fails the oddness check."""
        assert not power_weight(2).is_odd_on_grid()

    def test_custom_odd_weight(self):
        """Test a user supplied odd weight such as tanh."""
        weight = odd_custom_weight(np.tanh, name="tanh")
        assert weight.is_odd_on_grid()
        assert weight.label == "tanh"

    def test_is_increasing_on(self):
        """Test monotonicity check."""
        assert power_weight(2).is_increasing_on(0.0, 5.0)
        assert not power_weight(2).is_increasing_on(-5.0, 5.0)

    def test_is_nonnegative_on(self):
        """Test sign check."""
        assert identity_weight().is_nonnegative_on(0.0, 1.0)
        assert not identity_weight().is_nonnegative_on(-1.0, 1.0)


class TestTabulatedWeight:
    """Test suite for interpolated weights."""

    def test_passes_through_knots(self):
        """Test the interpolant reproduces the knot values."""
        weight = tabulated_weight([0.0, 1.0, 2.0], [0.0, 1.0, 4.0])
        np.testing.assert_allclose(weight.evaluate([0.0, 1.0, 2.0]), [0.0, 1.0, 4.0], atol=1e-12)

    def test_metadata_from_knots(self):
        """Test sign and monotonicity are derived from the table."""
        weight = tabulated_weight([0.0, 1.0, 2.0], [0.0, 1.0, 4.0])
        assert weight.is_increasing
        assert weight.is_nonnegative_on_support

    def test_unsorted_knots_rejected(self):
        """Test decreasing knots raise ParameterDomainError."""
        with pytest.raises(ParameterDomainError):
            tabulated_weight([1.0, 0.0], [0.0, 1.0])


class TestWeightFromDict:
    """Test suite for JSON weight specs."""

    def test_power_weight(self):
        """Test power weight round trip."""
        assert weight_from_dict({"kind": "power_weight", "m": 2}) == power_weight(2)
        assert power_weight(2).to_dict() == {"kind": "power_weight", "m": 2.0}

    def test_identity(self):
        """Test identity weight."""
        assert weight_from_dict({"kind": "identity"}).kind == "identity"

    def test_odd_custom_not_buildable(self):
        """Test callables cannot come from JSON."""
        with pytest.raises(ConfigError):
            weight_from_dict({"kind": "odd_custom"})

    def test_unknown_kind(self):
        """Test unknown kinds are rejected."""
        with pytest.raises(ParameterDomainError):
            WeightSpec(kind="logistic")
