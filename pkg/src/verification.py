"""
Named verification suites for the GWE toolkit.

Each suite produces CheckResult rows; a run passes when no row failed.
Suites:

- agreement: closed form, quantile quadrature and direct quadrature agree
- fingerprint: known exact values
- bound: ERSS/SRS ratio bound over the family matrix
- symmetry: odd-weight symmetry characterization and its negative control
- characterization: standard exponential fingerprint
- comparison: dispersive, shape-order and Delta-sign comparisons
- transform: monotone transform comparison
- protocol: simulated marginals against their order-statistic laws
"""
import logging
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from src import extropy_engine
from src.config import RunConfig
from src.distributions import (
    DistributionSpec,
    ExponentialDistribution,
    ParetoDistribution,
    PowerDistribution,
    TriangularDownDistribution,
    TriangularUpDistribution,
    UniformDistribution,
    exp_minus_one_transform,
    identity_transform,
    scale_transform,
)
from src.errors import ConfigError, GweError
from src.extropy_engine import (
    agreement,
    closed_form_for,
    gwe_erss_direct,
    gwe_erss_quantile,
    weighted_extropy,
)
from src.mc_sim import SamplingPlan, draw, ks_marginal_check, mc_gwe_erss
from src.order_checks import (
    SHAPE_ORDERS,
    VerdictRecord,
    check_exponential_characterization,
    check_order,
    check_symmetry_characterization,
    verify_bound_theorem_3_2,
    verify_theorem_5_1,
    verify_theorem_5_2,
    verify_theorem_5_3,
    verify_transform_theorem_3_1,
)
from src.weights import WeightSpec, identity_weight, power_weight

logger = logging.getLogger(__name__)

SUITES = ("agreement", "fingerprint", "bound", "symmetry", "characterization",
          "comparison", "transform", "protocol")
FAULTS = ("q2",)
AGREEMENT_TOLERANCE = 1e-6
FINGERPRINT_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-8
ASYMMETRY_FLOOR = 1e-3
MC_Z_LIMIT = 3.0

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_NOT_APPLICABLE = "not_applicable"
STATUS_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckResult:
    """
    One named check.

    Attributes:
        suite: Suite the check belongs to
        name: Check name, unique within its suite
        status: pass, fail, not_applicable or inconclusive
        detail: Values and messages explaining the status
    """

    suite: str
    name: str
    status: str
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != STATUS_FAIL

    def to_dict(self) -> Dict[str, Any]:
        return {"suite": self.suite, "name": self.name, "status": self.status, "detail": dict(self.detail)}


@dataclass
class SuiteReport:
    """All check results of one verification run, in execution order."""

    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failing(self) -> List[str]:
        """Names 'suite/check' of failed checks."""
        return [f"{r.suite}/{r.name}" for r in self.results if not r.passed]

    def counts(self) -> Dict[str, int]:
        tally = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_NOT_APPLICABLE: 0, STATUS_INCONCLUSIVE: 0}
        for result in self.results:
            tally[result.status] += 1
        return tally


def agreement_matrix() -> List[Tuple[DistributionSpec, float]]:
    """(distribution, m) pairs of the closed-form families, feasible combinations only."""
    dists: List[DistributionSpec] = [PowerDistribution(t) for t in (0.5, 1.0, 2.0, 3.0)]
    dists += [ExponentialDistribution(r) for r in (0.5, 1.0, 2.0)]
    dists += [ParetoDistribution(a) for a in (1.0, 2.0, 3.0)]
    pairs = []
    for dist in dists:
        for m in (1.0, 2.0):
            try:
                dist.check_weight_feasibility(power_weight(m))
            except GweError:
                continue
            pairs.append((dist, m))
    return pairs


@contextmanager
def inject_fault(name: str) -> Iterator[None]:
    """
    Temporarily perturb the engine.

    'q2' scales the odd-n product constant by 1.01, which the direct route
    (free of any Q constant) must expose.
    """
    if name not in FAULTS:
        raise ConfigError(f"Unknown fault {name!r}; expected one of {FAULTS}")
    original = extropy_engine.q_constants

    def perturbed(n: int) -> extropy_engine.QConstants:
        constants = original(n)
        if constants.log_abs_q2_product is None:
            return constants
        return extropy_engine.QConstants(constants.n, constants.log_abs_q1, constants.log_abs_q2,
                                         constants.log_abs_q2_product + math.log(1.01))

    logger.warning("fault injection active: %s", name)
    extropy_engine.q_constants = perturbed
    try:
        yield
    finally:
        extropy_engine.q_constants = original


def _status_of(record: VerdictRecord, expected: str = "holds") -> str:
    if record.verdict == "not_applicable":
        return STATUS_NOT_APPLICABLE if expected == "holds" else STATUS_FAIL
    if record.verdict == "inconclusive":
        logger.warning("check %s inconclusive", record.name)
        return STATUS_INCONCLUSIVE
    return STATUS_PASS if record.verdict == expected else STATUS_FAIL


def _close(value: float, target: float, tol: float) -> bool:
    return abs(value - target) <= tol * max(1.0, abs(target))


class VerificationRunner:
    """Runs the verification suites with one resolved configuration."""

    def __init__(self, config: RunConfig, fault: Optional[str] = None):
        """
        Initialize the runner.

        Args:
            config: Resolved run configuration
            fault: Optional fault to inject (test hook)

        Raises:
            ConfigError: If a fault is requested while fault injection is disabled
        """
        if fault is not None and not config.fault_injection_enabled:
            raise ConfigError("fault injection is disabled; set GWE_ENABLE_FAULT_INJECTION=true")
        if fault is not None and fault not in FAULTS:
            raise ConfigError(f"Unknown fault {fault!r}; expected one of {FAULTS}")
        self.config = config
        self.fault = fault
        self._suites: Dict[str, Callable[[], List[CheckResult]]] = {
            "agreement": self.agreement_suite,
            "fingerprint": self.fingerprint_suite,
            "bound": self.bound_suite,
            "symmetry": self.symmetry_suite,
            "characterization": self.characterization_suite,
            "comparison": self.comparison_suite,
            "transform": self.transform_suite,
            "protocol": self.protocol_suite,
        }

    def run(self, only: Sequence[str] = ()) -> SuiteReport:
        """
        Run the selected suites (all when only is empty).

        Raises:
            ConfigError: On an unknown suite name
        """
        unknown = [name for name in only if name not in self._suites]
        if unknown:
            raise ConfigError(f"Unknown suite(s): {', '.join(unknown)}; expected some of {SUITES}")
        selected = [name for name in SUITES if not only or name in only]
        report = SuiteReport()
        if self.fault:
            with inject_fault(self.fault):
                self._run_into(report, selected)
        else:
            self._run_into(report, selected)
        logger.info("verification finished: %s", report.counts())
        return report

    def _run_into(self, report: SuiteReport, selected: Sequence[str]) -> None:
        for name in selected:
            logger.info("running suite %s", name)
            results = self._suites[name]()
            report.results.extend(results)
            failed = [r.name for r in results if not r.passed]
            if failed:
                logger.warning("suite %s: %s check(s) failed", name, len(failed))

    def _tolerances(self) -> Dict[str, Any]:
        """Quadrature settings every suite passes to the engine."""
        return {
            "abs_tol": self.config.abs_tol,
            "rel_tol": self.config.rel_tol,
            "max_evaluations": self.config.max_evaluations,
        }

    def agreement_suite(self) -> List[CheckResult]:
        """Three-way agreement over families x m x n = 1..6."""
        results = []
        for dist, m in agreement_matrix():
            w = power_weight(m)
            for n in range(1, 7):
                name = f"{dist.label}/m={m:g}/n={n}"
                try:
                    values = [
                        closed_form_for(dist, w, n, **self._tolerances()),
                        gwe_erss_quantile(dist, w, n, **self._tolerances()),
                        gwe_erss_direct(dist, w, n, **self._tolerances()),
                    ]
                except GweError as exc:
                    results.append(CheckResult("agreement", name, STATUS_FAIL, {"error": str(exc)}))
                    continue
                ok, messages = agreement(values, AGREEMENT_TOLERANCE)
                detail = {v.method: v.value for v in values}
                if messages:
                    detail["disagreements"] = messages
                results.append(CheckResult("agreement", name, STATUS_PASS if ok else STATUS_FAIL, detail))
        return results

    def _fingerprint(self, name: str, value: float, target: float) -> CheckResult:
        ok = _close(value, target, FINGERPRINT_TOLERANCE)
        return CheckResult("fingerprint", name, STATUS_PASS if ok else STATUS_FAIL,
                           {"value": value, "target": target, "error": value - target})

    def fingerprint_suite(self) -> List[CheckResult]:
        """Exact values that any correct build reproduces."""
        results = []
        quad = self._tolerances()
        standard = ExponentialDistribution(1.0)
        w = identity_weight()
        for method in ("closed_form", "quantile", "density"):
            value = extropy_engine.gwe_erss(standard, w, 1, method, **quad).value
            results.append(self._fingerprint(f"exponential_erss1_{method}", value, -0.125))

        estimate = mc_gwe_erss(standard, w, 1, self.config.mc_draws, self.config.seed)
        z = (estimate.value + 0.125) / estimate.error_estimate if estimate.error_estimate else math.inf
        results.append(CheckResult("fingerprint", "exponential_erss1_monte_carlo",
                                   STATUS_PASS if abs(z) <= MC_Z_LIMIT else STATUS_FAIL,
                                   {"value": estimate.value, "standard_error": estimate.error_estimate,
                                    "z": z, "target": -0.125}))

        uniform = PowerDistribution(1.0)
        for method in ("quantile", "density"):
            value = extropy_engine.gwe_erss(uniform, w, 2, method, **quad).value
            results.append(self._fingerprint(f"uniform_erss2_{method}", value, -1.0 / 6.0))

        results.append(self._fingerprint("pareto2_erss1_closed_form",
                                         extropy_engine.closed_form_pareto(2.0, 1.0, 1).value, -0.5))
        rising = weighted_extropy(TriangularUpDistribution(), w, **quad).value
        falling = weighted_extropy(TriangularDownDistribution(), w, **quad).value
        results.append(self._fingerprint("rising_triangle_weighted_extropy", rising, -0.5))
        results.append(self._fingerprint("falling_triangle_weighted_extropy", falling, -1.0 / 6.0))
        return results

    def bound_suite(self) -> List[CheckResult]:
        """ERSS/SRS ratio bound over the agreement matrix."""
        results = []
        for dist, m in agreement_matrix():
            for n in range(1, 7):
                name = f"{dist.label}/m={m:g}/n={n}"
                try:
                    record = verify_bound_theorem_3_2(dist, power_weight(m), n, self.config.grid_size,
                                                      **self._tolerances())
                except GweError as exc:
                    results.append(CheckResult("bound", name, STATUS_FAIL, {"error": str(exc)}))
                    continue
                results.append(CheckResult("bound", name, _status_of(record), record.to_dict()))
        return results

    def symmetry_suite(self) -> List[CheckResult]:
        """Odd weight on a symmetric law vanishes; a mean-zero asymmetric law does not."""
        w = identity_weight()
        symmetric = check_symmetry_characterization(UniformDistribution(-1.0, 1.0), w, (1, 3, 5),
                                                    SYMMETRY_TOLERANCE, self.config.grid_size,
                                                    **self._tolerances())
        vanished = symmetric.checks.get("gwe_vanishes", False)
        results = [CheckResult("symmetry", "symmetric_uniform",
                               STATUS_PASS if symmetric.verdict == "holds" and vanished else STATUS_FAIL,
                               symmetric.to_dict())]

        control = TriangularUpDistribution(shift=-2.0 / 3.0)
        asymmetric = check_symmetry_characterization(control, w, (1, 3, 5), SYMMETRY_TOLERANCE,
                                                     self.config.grid_size, **self._tolerances())
        largest = max((abs(v) for v in asymmetric.values.get("gwe", {}).values()), default=0.0)
        ok = asymmetric.verdict == "holds" and largest >= ASYMMETRY_FLOOR
        detail = asymmetric.to_dict()
        detail["largest_abs_gwe"] = largest
        results.append(CheckResult("symmetry", "asymmetric_control", STATUS_PASS if ok else STATUS_FAIL, detail))
        return results

    def characterization_suite(self) -> List[CheckResult]:
        """Standard exponential passes the fingerprint; uniform and exponential(2) do not."""
        cases = [
            ("standard_exponential", ExponentialDistribution(1.0), "holds"),
            ("uniform_control", UniformDistribution(0.0, 1.0), "violated"),
            ("exponential_rate_2_control", ExponentialDistribution(2.0), "violated"),
        ]
        results = []
        for name, dist, expected in cases:
            record = check_exponential_characterization(dist, FINGERPRINT_TOLERANCE, **self._tolerances())
            results.append(CheckResult("characterization", name, _status_of(record, expected), record.to_dict()))
        return results

    def comparison_suite(self) -> List[CheckResult]:
        """Dispersive, shape-order and Delta-sign comparisons on pairs where they apply."""
        grid = self.config.grid_size
        quad = self._tolerances()
        w = identity_weight()
        results = []
        narrow, wide = UniformDistribution(0.5, 1.0), UniformDistribution(0.0, 1.0)
        rising, falling = TriangularUpDistribution(), TriangularDownDistribution()
        for n in range(2, 6):
            record = verify_theorem_5_1(narrow, wide, w, w, n, "le", grid, **quad)
            ok = _status_of(record) == STATUS_PASS and all(record.checks.values())
            results.append(CheckResult("comparison", f"dispersive_uniform/n={n}",
                                       STATUS_PASS if ok else _status_of(record), record.to_dict()))

            record = verify_theorem_5_3(rising, falling, w, w, n, grid, **quad)
            results.append(CheckResult("comparison", f"delta_triangles/n={n}", _status_of(record), record.to_dict()))

        record = verify_theorem_5_2(wide, wide, w, w, 3, "star", "le", grid, **quad)
        results.append(CheckResult("comparison", "star_reflexive/n=3", _status_of(record), record.to_dict()))

        fast, slow = ExponentialDistribution(2.0), ExponentialDistribution(1.0)
        disp = check_order("disp", fast, slow, grid)
        for order in SHAPE_ORDERS:
            shape = check_order(order, fast, slow, grid)
            premise = shape.holds == "yes" and float(fast.pdf(0.0)) >= float(slow.pdf(0.0)) > 0
            status = STATUS_PASS if not premise or disp.holds == "yes" else STATUS_FAIL
            results.append(CheckResult("comparison", f"{order}_implies_dispersive",
                                       status, {"shape": shape.holds, "disp": disp.holds}))
        return results

    def transform_suite(self) -> List[CheckResult]:
        """Monotone transform comparison: exp(x) - 1, identity and scaling."""
        grid = self.config.grid_size
        cases: List[Tuple[str, DistributionSpec, WeightSpec, Any, int, str]] = [
            ("exp_minus_one/n=2", ExponentialDistribution(1.0), power_weight(2), exp_minus_one_transform(), 2, "ge"),
            ("exp_minus_one/n=3", ExponentialDistribution(1.0), power_weight(2), exp_minus_one_transform(), 3, "ge"),
            ("identity/n=3", PowerDistribution(2.0), identity_weight(), identity_transform(), 3, "eq"),
            ("scale_2/n=2", UniformDistribution(0.0, 1.0), identity_weight(), scale_transform(2.0), 2, "eq"),
        ]
        results = []
        for name, dist, w, transform, n, direction in cases:
            record = verify_transform_theorem_3_1(dist, w, transform, n, grid, **self._tolerances())
            status = _status_of(record)
            if status == STATUS_PASS and record.values.get("direction") != direction:
                status = STATUS_FAIL
                record.reasons.append(f"expected direction {direction}, found {record.values.get('direction')}")
            results.append(CheckResult("transform", name, status, record.to_dict()))
        return results

    def protocol_suite(self) -> List[CheckResult]:
        """KS checks of simulated ERSS/RSS positions at a Bonferroni-adjusted level."""
        cycles, seed = self.config.cycles, self.config.seed
        cases = [(scheme, dist, n)
                 for scheme in ("erss", "rss")
                 for dist in (UniformDistribution(0.0, 1.0), ExponentialDistribution(1.0))
                 for n in (2, 3, 4)]
        tests = sum(n for _, _, n in cases)
        alpha = self.config.ks_alpha / tests
        results = []
        for scheme, dist, n in cases:
            sample = draw(dist, SamplingPlan(scheme, n, cycles, seed))
            for position in range(1, n + 1):
                verdict = ks_marginal_check(sample, position, dist, alpha)
                results.append(CheckResult("protocol", f"{scheme}/{dist.label}/n={n}/position={position}",
                                           STATUS_PASS if verdict.passed else STATUS_FAIL, verdict.to_dict()))

        # the set minimum tested against the parent law must be rejected
        uniform = UniformDistribution(0.0, 1.0)
        sample = draw(uniform, SamplingPlan("erss", 3, cycles, seed))
        control = ks_marginal_check(sample, 1, uniform, alpha, cdf=uniform.cdf)
        results.append(CheckResult("protocol", "wrong_cdf_control",
                                   STATUS_FAIL if control.passed else STATUS_PASS, control.to_dict()))
        return results
