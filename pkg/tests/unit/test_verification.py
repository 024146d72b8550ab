"""
Unit tests for the verification suites.
"""
from dataclasses import replace

import pytest

from src import extropy_engine, verification
from src.config import RunConfig
from src.distributions import ExponentialDistribution, PowerDistribution
from src.errors import ConfigError
from src.order_checks import VerdictRecord
from src.verification import (
    STATUS_FAIL,
    STATUS_PASS,
    SUITES,
    CheckResult,
    SuiteReport,
    VerificationRunner,
    agreement_matrix,
    inject_fault,
)


@pytest.fixture
def run_config():
    """Small, fast configuration."""
    return RunConfig(
        abs_tol=1e-11,
        rel_tol=1e-9,
        max_evaluations=1_000_000,
        seed=20240101,
        ks_alpha=0.01,
        grid_size=512,
        mc_draws=20_000,
        cycles=1000,
        output_format="json",
        log_level="INFO",
        fault_injection_enabled=False,
        result_storage_type="local",
        results_dir="results",
        command="verify",
    )


@pytest.fixture
def small_matrix(monkeypatch):
    """Restrict the family matrix to the uniform law with w = x."""
    monkeypatch.setattr(verification, "agreement_matrix", lambda: [(PowerDistribution(1.0), 1.0)])


class TestSuiteReport:
    """Test suite for SuiteReport bookkeeping."""

    def test_counts_and_failing(self):
        """Test counts per status and the failing list."""
        report = SuiteReport([
            CheckResult("bound", "a", STATUS_PASS),
            CheckResult("bound", "b", STATUS_FAIL),
            CheckResult("symmetry", "c", "not_applicable"),
            CheckResult("comparison", "d", "inconclusive"),
        ])
        assert not report.passed
        assert report.failing() == ["bound/b"]
        assert report.counts() == {"pass": 1, "fail": 1, "not_applicable": 1, "inconclusive": 1}

    def test_inconclusive_does_not_fail(self):
        """Test only 'fail' rows fail a run."""
        report = SuiteReport([CheckResult("bound", "a", "inconclusive")])
        assert report.passed

    def test_check_result_to_dict(self):
        """Test the serialized row."""
        row = CheckResult("bound", "a", STATUS_PASS, {"ratio": 1.0})
        assert row.to_dict() == {"suite": "bound", "name": "a", "status": "pass", "detail": {"ratio": 1.0}}


class TestAgreementMatrix:
    """Test suite for the family matrix."""

    def test_covers_every_family_and_weight(self):
        """Test all ten laws appear with w = x and w = x^2."""
        pairs = agreement_matrix()
        labels = {(dist.family, dist.params, m) for dist, m in pairs}
        assert ("power", (1.0,), 1.0) in labels
        assert ("exponential", (2.0,), 2.0) in labels
        assert ("pareto", (1.0,), 2.0) in labels
        assert len(pairs) == len(labels) == 20


class TestRunner:
    """Test suite for VerificationRunner."""

    def test_agreement_suite(self, run_config, small_matrix):
        """Test the three routes agree for n = 1..6."""
        report = VerificationRunner(run_config).run(["agreement"])
        assert len(report.results) == 6
        assert report.passed

    def test_bound_suite(self, run_config, small_matrix):
        """Test the ratio bound holds for the uniform law."""
        report = VerificationRunner(run_config).run(["bound"])
        assert [r.status for r in report.results] == [STATUS_PASS] * 6

    def test_fingerprint_suite(self, run_config):
        """Test the known exact values, Monte Carlo included."""
        report = VerificationRunner(run_config).run(["fingerprint"])
        assert report.passed, report.failing()
        names = [r.name for r in report.results]
        assert "exponential_erss1_monte_carlo" in names
        assert "pareto2_erss1_closed_form" in names

    @pytest.mark.parametrize("suite", ["symmetry", "characterization", "transform", "comparison"])
    def test_deterministic_suites_pass(self, run_config, suite):
        """Test each deterministic suite passes."""
        report = VerificationRunner(run_config).run([suite])
        assert report.results
        assert report.passed, report.failing()
        assert all(r.suite == suite for r in report.results)

    def test_protocol_suite(self, run_config):
        """Test simulated positions match their laws and the wrong-law control is rejected."""
        report = VerificationRunner(run_config).run(["protocol"])
        assert report.passed, report.failing()
        control = [r for r in report.results if r.name == "wrong_cdf_control"]
        assert control[0].detail["verdict"] == "fail"

    def test_unknown_suite(self, run_config):
        """Test unknown suite names are rejected."""
        with pytest.raises(ConfigError):
            VerificationRunner(run_config).run(["bogus"])

    def test_suite_order_follows_registry(self, run_config, small_matrix):
        """Test suites run in registry order whatever order they are requested in."""
        report = VerificationRunner(run_config).run(["bound", "agreement"])
        suites = [r.suite for r in report.results]
        assert suites.index("agreement") < suites.index("bound")
        assert SUITES.index("agreement") < SUITES.index("bound")

    @pytest.mark.parametrize("suite,targets", [
        ("bound", ["verify_bound_theorem_3_2"]),
        ("symmetry", ["check_symmetry_characterization"]),
        ("characterization", ["check_exponential_characterization"]),
        ("comparison", ["verify_theorem_5_1", "verify_theorem_5_2", "verify_theorem_5_3"]),
        ("transform", ["verify_transform_theorem_3_1"]),
    ])
    def test_suites_pass_configured_tolerances(self, run_config, small_matrix, monkeypatch, suite, targets):
        """Test each suite hands the configured quadrature settings to its checks."""
        config = replace(run_config, abs_tol=1e-7, rel_tol=1e-5, max_evaluations=4321)
        seen = []

        def recorder(name):
            def spy(*args, **kwargs):
                seen.append((name, kwargs))
                return VerdictRecord(name=name)
            return spy

        for target in targets:
            monkeypatch.setattr(verification, target, recorder(target))
        VerificationRunner(config).run([suite])
        assert {name for name, _ in seen} == set(targets)
        for _, kwargs in seen:
            assert kwargs["abs_tol"] == 1e-7
            assert kwargs["rel_tol"] == 1e-5
            assert kwargs["max_evaluations"] == 4321


class TestFaultInjection:
    """Test suite for the fault injection hook."""

    def test_disabled_by_default(self, run_config):
        """Test a fault cannot be injected unless enabled."""
        with pytest.raises(ConfigError):
            VerificationRunner(run_config, fault="q2")

    def test_unknown_fault(self, run_config):
        """Test unknown faults are rejected."""
        with pytest.raises(ConfigError):
            VerificationRunner(replace(run_config, fault_injection_enabled=True), fault="nope")

    def test_q2_fault_breaks_agreement(self, run_config, small_matrix):
        """Test a perturbed odd-n constant is caught by the direct route."""
        runner = VerificationRunner(replace(run_config, fault_injection_enabled=True), fault="q2")
        report = runner.run(["agreement"])
        assert not report.passed
        assert "agreement/power(1)/m=1/n=3" in report.failing()
        assert all(name.endswith(("n=1", "n=3", "n=5")) for name in report.failing())

    def test_fault_is_restored(self):
        """Test the engine constants are restored after the context exits."""
        original = extropy_engine.q_constants
        with inject_fault("q2"):
            assert extropy_engine.q_constants is not original
        assert extropy_engine.q_constants is original

    def test_fault_leaves_even_n_alone(self):
        """Test only the odd-n product constant is perturbed."""
        with inject_fault("q2"):
            perturbed = extropy_engine.q_constants(2)
        assert perturbed == extropy_engine.q_constants(2)


def test_exponential_in_matrix():
    """Test the matrix covers the exponential family with both weights."""
    rates = {dist.rate for dist, _ in agreement_matrix() if isinstance(dist, ExponentialDistribution)}
    assert rates == {0.5, 1.0, 2.0}


@pytest.mark.slow
class TestFullMatrix:
    """Full family matrix at production settings."""

    def test_agreement_and_bound(self, run_config):
        """Test every feasible (family, m, n) agrees three ways and respects the ratio bound."""
        report = VerificationRunner(replace(run_config, grid_size=2048)).run(["agreement", "bound"])
        assert len(report.results) == 2 * 20 * 6
        assert report.passed, report.failing()

    def test_monte_carlo_fingerprint(self, run_config):
        """Test the Monte Carlo fingerprint at one million draws."""
        report = VerificationRunner(replace(run_config, mc_draws=1_000_000)).run(["fingerprint"])
        assert report.passed, report.failing()
