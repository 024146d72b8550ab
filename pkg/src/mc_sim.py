"""
Seeded Monte Carlo simulation of SRS, RSS and ERSS sampling protocols.

Every sample position gets its own substream: SeedSequence(seed).spawn(n)
feeds one counter-based Philox generator per position, so a plan (including
its seed) always reproduces the same sample bit for bit. Order statistics
are obtained by sorting each simulated set, exactly as the protocol ranks
units in the field.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from src.distributions import DistributionSpec, LambdaProfile, OrderStatDensitySpec
from src.errors import InsufficientDataError, ParameterDomainError
from src.extropy_engine import GweResult, assemble_product, erss_ranks, q_constants
from src.weights import WeightSpec

logger = logging.getLogger(__name__)

PLAN_SCHEMES = ("srs", "rss", "erss")
MIN_KS_CYCLES = 1000
MIN_MC_DRAWS = 10_000
_CHUNK_ROWS = 1 << 16
_MANTISSA = 1 << 53


@dataclass(frozen=True)
class SamplingPlan:
    """
    One sampling design.

    Attributes:
        scheme: srs, rss or erss
        n: Set size (units measured per cycle)
        cycles: Number of independent cycles
        seed: 64-bit seed
    """

    scheme: str
    n: int
    cycles: int
    seed: int

    def __post_init__(self):
        if self.scheme not in PLAN_SCHEMES:
            raise ParameterDomainError(f"Unknown sampling scheme: {self.scheme}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterDomainError(f"set size must be an integer >= 1, got {self.n}")
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise ParameterDomainError(f"cycles must be a positive integer, got {self.cycles}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterDomainError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def unit_roles(self) -> Tuple[str, ...]:
        """Role label of each position: min, max, median, rank-i or srs."""
        if self.scheme == "srs":
            return ("srs",) * self.n
        if self.scheme == "rss":
            return tuple(f"rank-{i}" for i in range(1, self.n + 1))
        half = self.n // 2
        if self.n % 2 == 0:
            return ("min",) * half + ("max",) * half
        return ("min",) * half + ("max",) * half + ("median",)

    def position_rank(self, position: int) -> Optional[int]:
        """
        Order-statistic rank (within a set of n) measured at a 1-based position.

        Returns:
            Rank i, or None for SRS positions (plain draws)
        """
        if not 1 <= position <= self.n:
            raise ParameterDomainError(f"position must be in 1..{self.n}, got {position}")
        role = self.unit_roles()[position - 1]
        if role == "srs":
            return None
        if role == "min":
            return 1
        if role == "max":
            return self.n
        if role == "median":
            return (self.n + 1) // 2
        return int(role.split("-")[1])

    def to_dict(self) -> Dict[str, Any]:
        return {"scheme": self.scheme, "n": self.n, "cycles": self.cycles, "seed": self.seed}


@dataclass(frozen=True)
class SimulatedSample:
    """Simulated values, one row per cycle and one column per position."""

    plan: SamplingPlan
    values: np.ndarray
    unit_roles: Tuple[str, ...]

    def position_values(self, position: int) -> np.ndarray:
        """Values observed at a 1-based position across all cycles."""
        if not 1 <= position <= self.plan.n:
            raise ParameterDomainError(f"position must be in 1..{self.plan.n}, got {position}")
        return self.values[:, position - 1]

    def to_csv_rows(self) -> List[Tuple[int, int, str, float]]:
        """(cycle, position, role, value) rows in cycle-major order, both indices 1-based."""
        rows = []
        for cycle, row in enumerate(self.values, start=1):
            for position, value in enumerate(row, start=1):
                rows.append((cycle, position, self.unit_roles[position - 1], float(value)))
        return rows


@dataclass(frozen=True)
class KsVerdict:
    """Outcome of a Kolmogorov-Smirnov check of one sample position."""

    position: int
    statistic: float
    p_value: float
    critical_value: float
    alpha: float
    cycles: int
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "position": self.position,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "critical_value": self.critical_value,
            "alpha": self.alpha,
            "cycles": self.cycles,
            "verdict": "pass" if self.passed else "fail",
        }


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    standard_error: float
    draws: int


def _generator(seed_sequence: np.random.SeedSequence) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed_sequence))


def _open_uniforms(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms on the open interval (0, 1) with 53-bit resolution."""
    return (rng.integers(0, _MANTISSA, size=shape, dtype=np.int64) + 0.5) / _MANTISSA


def _position_streams(plan: SamplingPlan) -> List[np.random.Generator]:
    children = np.random.SeedSequence(plan.seed).spawn(plan.n)
    for position, child in enumerate(children, start=1):
        logger.debug("position %s substream spawn_key=%s", position, child.spawn_key)
    return [_generator(child) for child in children]


def _draw_ranked(dist: DistributionSpec, plan: SamplingPlan) -> SimulatedSample:
    values = np.empty((plan.cycles, plan.n), dtype=float)
    for column, rng in enumerate(_position_streams(plan)):
        rank = plan.position_rank(column + 1)
        sets = dist.quantile(_open_uniforms(rng, (plan.cycles, plan.n)))
        values[:, column] = np.sort(sets, axis=1)[:, rank - 1]
    return SimulatedSample(plan, values, plan.unit_roles())


def draw_erss(dist: DistributionSpec, plan: SamplingPlan) -> SimulatedSample:
    """
    Simulate ERSS cycles: n independent sets of n units per cycle, keeping set
    minima, set maxima and (odd n) the median of the last set.

    Raises:
        ParameterDomainError: If plan.scheme is not erss
    """
    if plan.scheme != "erss":
        raise ParameterDomainError(f"draw_erss needs an erss plan, got {plan.scheme}")
    return _draw_ranked(dist, plan)


def draw_rss(dist: DistributionSpec, plan: SamplingPlan) -> SimulatedSample:
    """
    Simulate RSS cycles: position i holds the i-th order statistic of its own set.

    Raises:
        ParameterDomainError: If plan.scheme is not rss
    """
    if plan.scheme != "rss":
        raise ParameterDomainError(f"draw_rss needs an rss plan, got {plan.scheme}")
    return _draw_ranked(dist, plan)


def draw_srs(dist: DistributionSpec, plan: SamplingPlan) -> SimulatedSample:
    """
    Simulate SRS cycles: n iid draws per cycle.

    Raises:
        ParameterDomainError: If plan.scheme is not srs
    """
    if plan.scheme != "srs":
        raise ParameterDomainError(f"draw_srs needs an srs plan, got {plan.scheme}")
    values = np.empty((plan.cycles, plan.n), dtype=float)
    for column, rng in enumerate(_position_streams(plan)):
        values[:, column] = dist.quantile(_open_uniforms(rng, plan.cycles))
    return SimulatedSample(plan, values, plan.unit_roles())


_DRAWERS: Dict[str, Callable[[DistributionSpec, SamplingPlan], SimulatedSample]] = {
    "srs": draw_srs,
    "rss": draw_rss,
    "erss": draw_erss,
}


def draw(dist: DistributionSpec, plan: SamplingPlan) -> SimulatedSample:
    """Simulate according to plan.scheme."""
    logger.info("simulating %s cycles of %s (n=%s) from %s", plan.cycles, plan.scheme, plan.n, dist.label)
    return _DRAWERS[plan.scheme](dist, plan)


def ks_critical_value(alpha: float, size: int) -> float:
    """Asymptotic KS critical value c(alpha) / sqrt(N)."""
    return float(stats.kstwobign.isf(alpha)) / math.sqrt(size)


def ks_marginal_check(sample: SimulatedSample, position: int, dist: DistributionSpec, alpha: float = 0.01,
                      cdf: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> KsVerdict:
    """
    Compare the values at one position with their theoretical order-statistic law.

    Args:
        sample: Simulated sample
        position: 1-based position
        dist: Parent distribution
        alpha: Significance level
        cdf: Override for the theoretical cdf (negative controls)

    Returns:
        KsVerdict; passed when the statistic is below c(alpha)/sqrt(N)

    Raises:
        InsufficientDataError: With fewer than 1000 cycles
    """
    values = sample.position_values(position)
    if values.size < MIN_KS_CYCLES:
        raise InsufficientDataError(
            f"KS check needs at least {MIN_KS_CYCLES} cycles, got {values.size}"
        )
    if cdf is None:
        rank = sample.plan.position_rank(position)
        cdf = dist.cdf if rank is None else OrderStatDensitySpec(rank, sample.plan.n, dist).cdf
    result = stats.kstest(values, cdf)
    critical = ks_critical_value(alpha, values.size)
    verdict = KsVerdict(position, float(result.statistic), float(result.pvalue), critical, alpha,
                        int(values.size), bool(result.statistic < critical))
    logger.debug("KS position %s: D=%.5f critical=%.5f", position, verdict.statistic, critical)
    return verdict


def _beta_order_stream(seed: int, k: int, n: int) -> np.random.Generator:
    return _generator(np.random.SeedSequence([seed, k, n]))


def mc_beta_expectation(dist: DistributionSpec, w: WeightSpec, k: int, n: int, draws: int,
                        seed: int) -> McEstimate:
    """
    Monte Carlo estimate of E Lambda(B_{k:2n-1}).

    B_{k:2n-1} is simulated as the k-th smallest of 2n-1 uniforms.

    Args:
        k: Beta order index, one of 1, n, 2n-1
        n: Set size
        draws: Number of draws, at least 10^4
        seed: Seed

    Raises:
        ParameterDomainError: On invalid k, n or draws, or infeasible (dist, w)
    """
    if int(n) != n or n < 1 or k not in (1, n, 2 * n - 1):
        raise ParameterDomainError(f"k must be one of 1, n, 2n-1 for n={n}, got {k}")
    if draws < MIN_MC_DRAWS:
        raise ParameterDomainError(f"mc_beta_expectation needs at least {MIN_MC_DRAWS} draws, got {draws}")
    profile = LambdaProfile(dist, w)
    rng = _beta_order_stream(seed, k, n)
    size = 2 * n - 1
    total = 0.0
    total_sq = 0.0
    remaining = draws
    while remaining:
        rows = min(remaining, _CHUNK_ROWS)
        block = np.partition(_open_uniforms(rng, (rows, size)), k - 1, axis=1)[:, k - 1]
        lam = profile.evaluate(block)
        total += float(np.sum(lam))
        total_sq += float(np.sum(lam * lam))
        remaining -= rows
    mean = total / draws
    variance = max(total_sq / draws - mean * mean, 0.0) * draws / (draws - 1)
    return McEstimate(mean, math.sqrt(variance / draws), draws)


def mc_gwe_erss(dist: DistributionSpec, w: WeightSpec, n: int, draws: int, seed: int) -> GweResult:
    """
    ERSS GWE assembled from Monte Carlo beta expectations.

    The error estimate is the first-order propagation of the standard errors.
    """
    factors = []
    for k, power in erss_ranks(n):
        estimate = mc_beta_expectation(dist, w, k, n, draws, seed)
        factors.append((estimate.mean, estimate.standard_error, power))
    constants = q_constants(n)
    value, error = assemble_product(constants.log_abs_for_product - math.log(2.0), -1, factors)
    return GweResult(value, "erss", n, "monte_carlo", error, True)
