"""
Unit tests for the stochastic-order and comparison verifiers.
"""
import math

import numpy as np
import pytest

from src import order_checks
from src.distributions import (
    ExponentialDistribution,
    MonotoneTransform,
    PowerDistribution,
    TriangularDownDistribution,
    TriangularUpDistribution,
    UniformDistribution,
    exp_minus_one_transform,
    identity_transform,
)
from src.errors import DegenerateRatioError, DomainError, ParameterDomainError
from src.extropy_engine import GweResult
from src.order_checks import (
    check_exponential_characterization,
    check_order,
    check_symmetry_characterization,
    delta_analysis,
    unit_grid,
    verify_bound_theorem_3_2,
    verify_corollaries,
    verify_theorem_5_1,
    verify_theorem_5_2,
    verify_theorem_5_3,
    verify_transform_theorem_3_1,
)
from src.weights import identity_weight, power_weight, tabulated_weight

GRID = 512


@pytest.fixture
def rising():
    """f(x) = 2x on [0, 1]."""
    return TriangularUpDistribution()


@pytest.fixture
def falling():
    """g(x) = 2(1 - x) on [0, 1]."""
    return TriangularDownDistribution()


class TestUnitGrid:
    """Test suite for the log-spaced unit grid."""

    def test_size_and_range(self):
        """Test the grid stays strictly inside (0, 1) and reaches both ends."""
        u = unit_grid(300)
        assert u.size == 300
        assert np.all((u > 0) & (u < 1))
        assert u[0] == pytest.approx(1e-10, rel=1e-6)
        assert 1.0 - u[-1] == pytest.approx(1e-10, rel=1e-3)

    def test_increasing(self):
        """Test the grid is strictly increasing."""
        assert np.all(np.diff(unit_grid(GRID)) > 0)


class TestCheckOrder:
    """Test suite for check_order."""

    def test_faster_exponential_is_less_dispersed(self):
        """Test Exp(2) <=_disp Exp(1)."""
        report = check_order("disp", ExponentialDistribution(2.0), ExponentialDistribution(1.0), GRID)
        assert report.holds == "yes"
        assert report.witness_grid == []

    def test_reverse_dispersive_order_fails_with_witness(self):
        """Test Exp(1) <=_disp Exp(2) is rejected with witness points."""
        report = check_order("disp", ExponentialDistribution(1.0), ExponentialDistribution(2.0), GRID)
        assert report.holds == "no"
        assert report.witness_grid
        assert report.max_violation > report.tolerance

    def test_usual_stochastic_order(self):
        """Test U(0, 1) <=_st U(0, 2)."""
        report = check_order("st", UniformDistribution(0.0, 1.0), UniformDistribution(0.0, 2.0), GRID)
        assert report.holds == "yes"

    def test_hazard_rate_order(self):
        """Test Exp(2) <=_hr Exp(1)."""
        report = check_order("hr", ExponentialDistribution(2.0), ExponentialDistribution(1.0), GRID)
        assert report.holds == "yes"

    def test_hazard_rate_order_needs_nested_right_ends(self):
        """Test X <=_hr Y fails outright when X reaches beyond Y."""
        report = check_order("hr", UniformDistribution(0.0, 2.0), UniformDistribution(0.0, 1.0), GRID)
        assert report.holds == "no"
        assert len(report.witness_grid) == 1

    def test_shape_orders_for_exponential_scale_family(self):
        """Test star, convex-transform and superadditive orders for Exp(2) vs Exp(1)."""
        fast, slow = ExponentialDistribution(2.0), ExponentialDistribution(1.0)
        for order in ("star", "convex_transform", "superadditive"):
            assert check_order(order, fast, slow, GRID).holds == "yes", order

    def test_shape_order_rejects_negative_support(self):
        """Test shape orders need nonnegative variables."""
        with pytest.raises(DomainError):
            check_order("star", UniformDistribution(-1.0, 1.0), UniformDistribution(0.0, 1.0), GRID)

    def test_unknown_order(self):
        """Test unknown order names are rejected."""
        with pytest.raises(ParameterDomainError):
            check_order("bogus", UniformDistribution(), UniformDistribution(), GRID)

    def test_report_serializes(self):
        """Test to_dict carries the verdict and grid size."""
        data = check_order("st", UniformDistribution(), UniformDistribution(), GRID).to_dict()
        assert data["order"] == "st"
        assert data["holds"] == "yes"
        assert data["witness_grid"] == []


class TestDispersiveComparison:
    """Test suite for verify_theorem_5_1."""

    def test_narrow_uniform_has_smaller_gwe(self):
        """Test U(0.5, 1) <=_disp U(0, 1) gives J(X_ERSS) <= J(Y_ERSS)."""
        w = identity_weight()
        record = verify_theorem_5_1(UniformDistribution(0.5, 1.0), UniformDistribution(0.0, 1.0), w, w, 2,
                                    grid=GRID)
        assert record.verdict == "holds"
        assert all(record.hypotheses.values())
        assert record.checks == {"lambda_domination": True, "dispersive_implies_st": True}
        assert record.values["j_x"] < record.values["j_y"]

    def test_different_right_ends_not_applicable(self):
        """Test a mismatched right endpoint makes the result inapplicable."""
        w = identity_weight()
        record = verify_theorem_5_1(UniformDistribution(0.0, 0.5), UniformDistribution(0.0, 1.0), w, w, 2,
                                    grid=GRID)
        assert record.verdict == "not_applicable"
        assert "right endpoints" in record.reasons[0]

    def test_unbounded_support_not_applicable(self):
        """Test an infinite right end makes the result inapplicable."""
        w = identity_weight()
        record = verify_theorem_5_1(ExponentialDistribution(2.0), ExponentialDistribution(1.0), w, w, 3,
                                    grid=GRID)
        assert record.verdict == "not_applicable"

    def test_failed_hypothesis_is_reported(self):
        """Test the reverse direction lists the failing dispersive hypothesis."""
        w = identity_weight()
        record = verify_theorem_5_1(UniformDistribution(0.5, 1.0), UniformDistribution(0.0, 1.0), w, w, 2,
                                    direction="ge", grid=GRID)
        assert record.verdict == "not_applicable"
        assert record.hypotheses["dispersive_order"] is False

    def test_invalid_direction(self):
        """Test only 'le' and 'ge' are accepted."""
        w = identity_weight()
        with pytest.raises(ParameterDomainError):
            verify_theorem_5_1(UniformDistribution(), UniformDistribution(), w, w, 2, direction="lt")


class TestShapeComparison:
    """Test suite for verify_theorem_5_2."""

    def test_reflexive_star_order(self):
        """Test a law compared with itself under the star order."""
        w = identity_weight()
        dist = UniformDistribution(0.0, 1.0)
        record = verify_theorem_5_2(dist, dist, w, w, 3, "star", "le", GRID)
        assert record.verdict == "holds"
        assert record.checks["shape_implies_dispersive"] is True
        assert record.values["gap"] == pytest.approx(0.0, abs=1e-12)

    def test_rejects_non_shape_order(self):
        """Test the order argument must be a shape order."""
        w = identity_weight()
        with pytest.raises(ParameterDomainError):
            verify_theorem_5_2(UniformDistribution(), UniformDistribution(), w, w, 2, order="disp")


class TestDeltaAnalysis:
    """Test suite for delta_analysis."""

    def test_triangles_have_empty_negative_set(self, rising, falling):
        """Test Delta >= 0 for the rising against the falling triangle."""
        w = identity_weight()
        analysis = delta_analysis(rising, falling, w, w, n=3, i=1, grid=GRID)
        assert analysis.a2_fraction == 0.0
        assert analysis.a1_fraction > 0.8
        assert analysis.sup_phi_on_a2 == -math.inf
        assert analysis.condition_holds is True
        assert analysis.j_x == pytest.approx(-0.5, abs=1e-9)
        assert analysis.j_y == pytest.approx(-1.0 / 6.0, abs=1e-9)
        assert analysis.premise_holds is True

    def test_identical_laws_give_zero_delta(self, rising):
        """Test X = Y puts every grid point in the zero set."""
        w = identity_weight()
        analysis = delta_analysis(rising, rising, w, w, n=2, i=1, grid=GRID)
        assert np.all(analysis.delta == 0.0)
        assert analysis.zero_fraction == 1.0
        assert analysis.condition_holds is True

    def test_small_grid_rejected(self, rising, falling):
        """Test grids below 256 points are refused."""
        w = identity_weight()
        with pytest.raises(ParameterDomainError):
            delta_analysis(rising, falling, w, w, n=2, i=1, grid=128)

    def test_rank_out_of_range(self, rising, falling):
        """Test i must lie in 1..n."""
        w = identity_weight()
        with pytest.raises(ParameterDomainError):
            delta_analysis(rising, falling, w, w, n=2, i=3, grid=GRID)

    def test_literal_index_undefined(self, rising, falling):
        """Test the literal density index leaves the condition undecided when it has no meaning."""
        w = identity_weight()
        analysis = delta_analysis(rising, falling, w, w, n=2, i=2, grid=GRID, literal_index=True)
        assert analysis.condition_holds is None

    def test_to_dict(self, rising, falling):
        """Test the serialized analysis carries fractions and the verdict."""
        w = identity_weight()
        data = delta_analysis(rising, falling, w, w, n=2, i=1, grid=GRID).to_dict()
        assert data["grid_size"] == GRID
        assert data["a2_fraction"] == 0.0
        assert data["condition_holds"] is True


class TestDeltaComparison:
    """Test suite for verify_theorem_5_3 and the equal-weight corollaries."""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_triangles(self, rising, falling, n):
        """Test J(X_ERSS) <= J(Y_ERSS) for the triangle pair."""
        w = identity_weight()
        record = verify_theorem_5_3(rising, falling, w, w, n, grid=GRID)
        assert record.verdict == "holds"
        assert record.values["j_x"] <= record.values["j_y"]

    def test_literal_index_not_applicable(self, rising, falling):
        """Test an undefined literal index makes the comparison inapplicable."""
        w = identity_weight()
        record = verify_theorem_5_3(rising, falling, w, w, 2, grid=GRID, literal_index=True)
        assert record.verdict == "not_applicable"

    def test_corollaries_never_violated(self):
        """Test the equal-weight readings on the uniform pair."""
        w = identity_weight()
        records = verify_corollaries(UniformDistribution(0.5, 1.0), UniformDistribution(0.0, 1.0), w, 2, GRID)
        assert len(records) == 9
        assert all(r.name.startswith("equal_weight_") for r in records)
        assert records[0].verdict == "holds"
        assert not any(r.verdict == "violated" for r in records)


class TestBound:
    """Test suite for verify_bound_theorem_3_2."""

    def test_uniform_ratio(self):
        """Test the uniform ERSS/SRS ratio at n = 2 is 4/3 under a bound of 16."""
        record = verify_bound_theorem_3_2(PowerDistribution(1.0), identity_weight(), 2, GRID)
        assert record.verdict == "holds"
        assert record.values["ratio"] == pytest.approx(4.0 / 3.0, rel=1e-8)
        assert record.values["bound"] == pytest.approx(16.0)
        assert record.checks["sup_density_bound"] is True

    def test_odd_n_bound(self):
        """Test the odd-n bound n^(2n) / ((n-1)!)^2 at n = 3."""
        record = verify_bound_theorem_3_2(PowerDistribution(2.0), power_weight(1), 3, GRID)
        assert record.verdict == "holds"
        assert record.values["bound"] == pytest.approx(182.25)
        assert record.values["ratio"] <= 182.25

    def test_negative_weight_not_applicable(self):
        """Test a weight taking negative values makes the bound inapplicable."""
        record = verify_bound_theorem_3_2(UniformDistribution(-1.0, 1.0), identity_weight(), 2, GRID)
        assert record.verdict == "not_applicable"

    def test_zero_srs_value(self):
        """Test a vanishing SRS value raises DegenerateRatioError."""
        zero = tabulated_weight([0.0, 1.0], [0.0, 0.0])
        with pytest.raises(DegenerateRatioError):
            verify_bound_theorem_3_2(UniformDistribution(0.0, 1.0), zero, 2, GRID)


class TestTransform:
    """Test suite for verify_transform_theorem_3_1."""

    def test_exp_minus_one_with_square_weight(self):
        """Test V = e^X - 1 with w = x^2 lowers the GWE."""
        record = verify_transform_theorem_3_1(ExponentialDistribution(1.0), power_weight(2),
                                              exp_minus_one_transform(), 2, GRID)
        assert record.verdict == "holds"
        assert record.values["direction"] == "ge"
        assert record.values["j_x"] >= record.values["j_y"]

    def test_exp_minus_one_with_identity_weight(self):
        """Test V = e^X - 1 with w = x raises the GWE."""
        record = verify_transform_theorem_3_1(ExponentialDistribution(1.0), identity_weight(),
                                              exp_minus_one_transform(), 2, GRID)
        assert record.verdict == "holds"
        assert record.values["direction"] == "le"

    def test_identity_transform_is_equality(self):
        """Test the identity map gives equal values."""
        record = verify_transform_theorem_3_1(PowerDistribution(2.0), identity_weight(),
                                              identity_transform(), 3, GRID)
        assert record.verdict == "holds"
        assert record.values["direction"] == "eq"
        assert record.values["j_x"] == pytest.approx(record.values["j_y"], abs=1e-12)

    def test_transform_must_fix_zero(self):
        """Test eta(0) != 0 makes the comparison inapplicable."""
        shift = MonotoneTransform("plus_one", lambda x: np.asarray(x, dtype=float) + 1.0,
                                  lambda y: np.asarray(y, dtype=float) - 1.0,
                                  lambda x: np.ones_like(np.asarray(x, dtype=float)))
        record = verify_transform_theorem_3_1(ExponentialDistribution(1.0), identity_weight(), shift, 2, GRID)
        assert record.verdict == "not_applicable"
        assert record.hypotheses["eta_zero"] is False


class TestSymmetry:
    """Test suite for check_symmetry_characterization."""

    def test_symmetric_uniform(self):
        """Test the odd weight on U(-1, 1) gives zero for odd n."""
        record = check_symmetry_characterization(UniformDistribution(-1.0, 1.0), identity_weight(), grid=GRID)
        assert record.verdict == "holds"
        assert record.checks["gwe_vanishes"] is True
        assert record.checks["density_quantile_symmetric"] is True

    def test_asymmetric_mean_zero_control(self):
        """Test the centred rising triangle keeps a non-zero GWE."""
        control = TriangularUpDistribution(shift=-2.0 / 3.0)
        record = check_symmetry_characterization(control, identity_weight(), grid=GRID)
        assert record.verdict == "holds"
        assert record.checks["gwe_vanishes"] is False
        assert record.values["gwe"]["1"] == pytest.approx(-1.0 / 18.0, abs=1e-9)

    def test_even_weight_not_applicable(self):
        """Test an even weight is refused."""
        record = check_symmetry_characterization(UniformDistribution(-1.0, 1.0), power_weight(2), grid=GRID)
        assert record.verdict == "not_applicable"

    def test_nonzero_mean_not_applicable(self, rising):
        """Test a law with non-zero mean is refused."""
        record = check_symmetry_characterization(rising, identity_weight(), grid=GRID)
        assert record.verdict == "not_applicable"

    def test_even_n_rejected(self):
        """Test even set sizes are rejected."""
        with pytest.raises(ParameterDomainError):
            check_symmetry_characterization(UniformDistribution(-1.0, 1.0), identity_weight(), (1, 2))


class TestExponentialCharacterization:
    """Test suite for check_exponential_characterization."""

    def test_standard_exponential(self):
        """Test the standard exponential law reproduces -1/8 for both weights."""
        record = check_exponential_characterization(ExponentialDistribution(1.0))
        assert record.verdict == "holds"
        assert record.checks["closed_form_n2"] is True
        assert record.checks["closed_form_n3"] is True

    def test_closed_form_disagreement_violates(self, monkeypatch):
        """Test a closed form that disagrees with quadrature turns the verdict to violated."""
        monkeypatch.setattr(order_checks, "closed_form_exponential",
                            lambda rate, m, n, *args: GweResult(1.0, "erss", n, "closed_form"))
        record = check_exponential_characterization(ExponentialDistribution(1.0))
        assert record.checks["fingerprint_w_x"] is True
        assert record.checks["closed_form_n2"] is False
        assert record.verdict == "violated"
        assert any("closed_form_n2" in reason for reason in record.reasons)

    def test_uniform_control(self):
        """Test U(0, 1) is not mistaken for the standard exponential."""
        record = check_exponential_characterization(UniformDistribution(0.0, 1.0))
        assert record.verdict == "violated"
        assert record.values["gwe_w_x"] == pytest.approx(-0.25, abs=1e-9)

    def test_rate_two_control(self):
        """Test Exp(2) matches for w = x only."""
        record = check_exponential_characterization(ExponentialDistribution(2.0))
        assert record.verdict == "violated"
        assert record.checks["fingerprint_w_x"] is True
        assert record.values["gwe_w_x2"] == pytest.approx(-1.0 / 16.0, abs=1e-9)

    def test_negative_support_not_applicable(self):
        """Test a law with negative support is refused."""
        record = check_exponential_characterization(UniformDistribution(-1.0, 1.0))
        assert record.verdict == "not_applicable"
