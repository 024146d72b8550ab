"""
Extropy engine: J, J^w, the general weighted extropy (GWE) of a single
variable, of a simple random sample (SRS) and of an extreme ranked set
sample (ERSS).

The ERSS value is available by three independent routes:

- quantile quadrature: beta expectations E Lambda(B_{k:2n-1})
- direct quadrature: x-domain integrals of w f_{k:n}^2
- closed forms for the power, exponential and Pareto families

All constant products are assembled in log space with explicit signs.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from src.distributions import (
    DistributionSpec,
    ExponentialDistribution,
    LambdaProfile,
    OrderStatDensitySpec,
    ParetoDistribution,
    PowerDistribution,
    TabulatedDistribution,
    uniform_order_stat_pdf,
)
from src.errors import ParameterDomainError
from src.quadrature import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_REL_TOL,
    IntegralResult,
    integrate_interval,
    integrate_unit,
    order_stat_moment_integral,
)
from src.weights import WeightSpec, power_weight

logger = logging.getLogger(__name__)

SCHEMES = ("single", "srs", "erss")
METHODS = ("closed_form", "quantile_quadrature", "density_quadrature", "monte_carlo")

ODD_INDEX_NOTE = "odd-n product index taken as (n-1)/2"


@dataclass(frozen=True)
class GweResult:
    """
    One extropy value together with how it was obtained.

    Attributes:
        value: Extropy value (non-positive for nonnegative weights)
        scheme: single, srs or erss
        n: Set size
        method: closed_form, quantile_quadrature, density_quadrature or monte_carlo
        error_estimate: Absolute error estimate
        converged: False when any constituent integral missed its tolerance
        notes: Interpretation flags raised while computing the value
    """

    value: float
    scheme: str
    n: int
    method: str
    error_estimate: float = 0.0
    converged: bool = True
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def relabel(self, scheme: str) -> "GweResult":
        """Same value under another scheme label."""
        return GweResult(self.value, scheme, self.n, self.method, self.error_estimate,
                         self.converged, self.notes)

    def to_dict(self) -> Dict[str, Any]:
        """JSON form {value, scheme, n, method, error_estimate, converged, notes}."""
        data = asdict(self)
        data["notes"] = list(self.notes)
        return data


@dataclass(frozen=True)
class QConstants:
    """
    The negative constants of the ERSS formula, held as log-magnitudes.

    q1 multiplies the even-n product; q2 is the odd-n constant in its
    literal combinatorial form and q2_product the one the odd-n product
    actually carries (they differ by n^2/(2n-1) and coincide at n = 1).
    """

    n: int
    log_abs_q1: float
    log_abs_q2: Optional[float]
    log_abs_q2_product: Optional[float]

    @property
    def q1(self) -> float:
        return -math.exp(self.log_abs_q1)

    @property
    def q2(self) -> Optional[float]:
        return None if self.log_abs_q2 is None else -math.exp(self.log_abs_q2)

    @property
    def q2_product(self) -> Optional[float]:
        return None if self.log_abs_q2_product is None else -math.exp(self.log_abs_q2_product)

    @property
    def log_abs_for_product(self) -> float:
        """Log-magnitude of the constant the GWE product uses for this n."""
        return self.log_abs_q1 if self.n % 2 == 0 else self.log_abs_q2_product

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "q1": self.q1, "q2": self.q2, "q2_product": self.q2_product}


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ParameterDomainError(f"set size n must be an integer >= 1, got {n}")


def q_constants(n: int) -> QConstants:
    """
    Compute Q_{1,n} and (odd n) Q_{2,n} in log space.

    Args:
        n: Set size, n >= 1

    Returns:
        QConstants; q2 fields are None for even n
    """
    _check_n(n)
    log_n = math.log(n)
    log_2n1 = math.log(2 * n - 1)
    log_q1 = 2 * n * log_n - n * log_2n1
    log_q2 = log_q2_product = None
    if n % 2 == 1:
        log_q2 = float(
            2 * n * log_n + 2 * special.gammaln(n + 1) + 2 * special.gammaln(n)
            - n * log_2n1 - 4 * special.gammaln((n + 1) / 2) - special.gammaln(2 * n)
        )
        log_q2_product = log_q2 - 2 * log_n + log_2n1
        if n == 1:
            log_q2 = log_q2_product = 0.0
    return QConstants(n, log_q1, log_q2, log_q2_product)


def erss_ranks(n: int) -> List[Tuple[int, int]]:
    """(beta order k on 2n-1 uniforms, exponent) pairs of the ERSS product."""
    if n % 2 == 0:
        return [(1, n // 2), (2 * n - 1, n // 2)]
    half = (n - 1) // 2
    ranks = [(n, 1)]
    if half:
        ranks = [(1, half), (2 * n - 1, half), (n, 1)]
    return ranks


def _signed_log(x: float) -> Tuple[int, float]:
    if x == 0.0:
        return 0, -math.inf
    return (1 if x > 0 else -1), math.log(abs(x))


def assemble_product(log_abs_const: float, const_sign: int, factors: Sequence[Tuple[float, float, int]]) -> Tuple[float, float]:
    """
    Evaluate C * prod E_k^p_k and its first-order propagated error.

    Args:
        log_abs_const: log |C|
        const_sign: sign of C
        factors: (E_k, error of E_k, integer power p_k)

    Returns:
        (value, absolute error estimate)
    """
    sign = const_sign
    log_abs = log_abs_const
    logs = []
    for value, _, power in factors:
        s, lg = _signed_log(value)
        logs.append(lg)
        sign *= s ** power
        log_abs += power * lg
    with np.errstate(over="ignore"):
        result = 0.0 if sign == 0 else sign * float(np.exp(log_abs))

    error = 0.0
    for k, (value, err, power) in enumerate(factors):
        if err == 0.0:
            continue
        # d/dE_k (C prod E^p) = C p_k E_k^(p_k - 1) prod_{j != k} E_j^p_j
        term = log_abs_const + math.log(power) + math.log(err)
        if power > 1:
            term += (power - 1) * logs[k]
        for j, (_, _, pj) in enumerate(factors):
            if j != k:
                term += pj * logs[j]
        if term > -math.inf:
            with np.errstate(over="ignore"):
                error += float(np.exp(term))
    return result, error


def _notes_for(n: int) -> Tuple[str, ...]:
    return (ODD_INDEX_NOTE,) if n % 2 == 1 and n > 1 else ()


def _support_pieces(dist: DistributionSpec) -> List[Tuple[float, float]]:
    """Integration intervals for x-domain integrals; tabulated laws are split at their knots."""
    if isinstance(dist, TabulatedDistribution):
        knots = [x + dist.shift for x in dist.table_x]
        return list(zip(knots[:-1], knots[1:]))
    return [dist.support]


def _integrate_x(dist: DistributionSpec, func, abs_tol: float, rel_tol: float,
                 max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> IntegralResult:
    total = IntegralResult(0.0, 0.0, 0, True)
    for lower, upper in _support_pieces(dist):
        total = total + integrate_interval(func, lower, upper, abs_tol, rel_tol, max_evaluations)
    return total


def _expected_lambda(profile: LambdaProfile, abs_tol: float, rel_tol: float,
                     max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> IntegralResult:
    """E Lambda(U) for U uniform on (0, 1)."""
    return integrate_unit(profile.evaluate, abs_tol, rel_tol, max_evaluations)


def beta_expectation(profile: LambdaProfile, k: int, n: int, abs_tol: float = DEFAULT_ABS_TOL,
                     rel_tol: float = DEFAULT_REL_TOL,
                     max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> IntegralResult:
    """
    E Lambda(B_{k:2n-1}) where B_{k:2n-1} is the k-th order statistic of 2n-1 uniforms.

    Args:
        profile: Lambda profile of (dist, w)
        k: Beta order index, 1 <= k <= 2n-1
        n: Set size
    """
    size = 2 * n - 1
    return integrate_unit(lambda u: profile.evaluate(u) * uniform_order_stat_pdf(k, size, u),
                          abs_tol, rel_tol, max_evaluations)


def extropy(dist: DistributionSpec, abs_tol: float = DEFAULT_ABS_TOL,
            rel_tol: float = DEFAULT_REL_TOL,
            max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    J(X) = -1/2 * integral of f^2, evaluated as -1/2 * integral of f(F^-1(u)) over (0, 1).

    Args:
        dist: Distribution

    Returns:
        GweResult with scheme single and n = 1
    """
    integral = integrate_unit(dist.density_quantile, abs_tol, rel_tol, max_evaluations)
    return GweResult(-0.5 * integral.value, "single", 1, "quantile_quadrature",
                     0.5 * integral.abs_error_estimate, integral.converged)


def weighted_extropy(dist: DistributionSpec, w: WeightSpec, method: str = "quantile",
                     abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
                     max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    J^w(X) = -1/2 * integral of w f^2 = -1/2 * E Lambda(U).

    Args:
        dist: Distribution
        w: Weight
        method: 'quantile' (integral of Lambda over (0, 1)) or 'density' (x-domain)

    Returns:
        GweResult with scheme single and n = 1

    Raises:
        ParameterDomainError: On infeasible (dist, w) or unknown method
    """
    profile = LambdaProfile(dist, w)
    if method == "quantile":
        integral = _expected_lambda(profile, abs_tol, rel_tol, max_evaluations)
        label = "quantile_quadrature"
    elif method == "density":
        integral = _integrate_x(dist, lambda x: w.evaluate(x) * dist.pdf(x) ** 2,
                                abs_tol, rel_tol, max_evaluations)
        label = "density_quadrature"
    else:
        raise ParameterDomainError(f"Unknown weighted extropy method: {method}")
    return GweResult(-0.5 * integral.value, "single", 1, label,
                     0.5 * integral.abs_error_estimate, integral.converged)


def gwe_single(dist: DistributionSpec, w: WeightSpec, method: str = "quantile",
               abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
               max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """GWE of a single observation; same value as weighted_extropy."""
    return weighted_extropy(dist, w, method, abs_tol, rel_tol, max_evaluations)


def gwe_srs(dist: DistributionSpec, w: WeightSpec, n: int, method: str = "quantile",
            abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
            max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    GWE of an SRS of size n: -1/2 * (-2 J^w(X))^n.

    Args:
        dist: Distribution
        w: Weight
        n: Set size, n >= 1
    """
    _check_n(n)
    single = weighted_extropy(dist, w, method, abs_tol, rel_tol, max_evaluations)
    if n == 1:
        return single.relabel("srs")
    expectation = -2.0 * single.value
    value, error = assemble_product(math.log(0.5), -1, [(expectation, 2.0 * single.error_estimate, n)])
    return GweResult(value, "srs", n, single.method, error, single.converged)


def gwe_erss_quantile(dist: DistributionSpec, w: WeightSpec, n: int, abs_tol: float = DEFAULT_ABS_TOL,
                      rel_tol: float = DEFAULT_REL_TOL,
                      max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    GWE of an ERSS of size n from beta expectations of Lambda.

    Even n: (Q1/2) (E Lambda(B_{1:2n-1}))^(n/2) (E Lambda(B_{2n-1:2n-1}))^(n/2).
    Odd n: (Q2/2) (E Lambda(B_1))^((n-1)/2) (E Lambda(B_{2n-1}))^((n-1)/2) E Lambda(B_n).

    Raises:
        ParameterDomainError: On infeasible (dist, w) or invalid n
    """
    _check_n(n)
    if n == 1:
        return weighted_extropy(dist, w, "quantile", abs_tol, rel_tol, max_evaluations).relabel("erss")
    profile = LambdaProfile(dist, w)
    factors = []
    converged = True
    for k, power in erss_ranks(n):
        integral = beta_expectation(profile, k, n, abs_tol, rel_tol, max_evaluations)
        converged = converged and integral.converged
        factors.append((integral.value, integral.abs_error_estimate, power))
    constants = q_constants(n)
    value, error = assemble_product(constants.log_abs_for_product - math.log(2.0), -1, factors)
    return GweResult(value, "erss", n, "quantile_quadrature", error, converged)


def gwe_erss_direct(dist: DistributionSpec, w: WeightSpec, n: int, abs_tol: float = DEFAULT_ABS_TOL,
                    rel_tol: float = DEFAULT_REL_TOL,
                    max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    GWE of an ERSS of size n from x-domain integrals of w f_{i:n}^2.

    Independent of the quantile route: no Q constant and no beta densities.

    Raises:
        ParameterDomainError: On infeasible (dist, w) or invalid n
    """
    _check_n(n)
    LambdaProfile(dist, w)
    if n == 1:
        return weighted_extropy(dist, w, "density", abs_tol, rel_tol, max_evaluations).relabel("erss")
    if n % 2 == 0:
        ranks = [(1, n // 2), (n, n // 2)]
    else:
        half = (n - 1) // 2
        ranks = [(1, half), (n, half), ((n + 1) // 2, 1)]
    factors = []
    converged = True
    for rank, power in ranks:
        spec = OrderStatDensitySpec(rank, n, dist)
        integral = _integrate_x(dist, lambda x, s=spec: w.evaluate(x) * s.pdf(x) ** 2,
                                abs_tol, rel_tol, max_evaluations)
        converged = converged and integral.converged
        factors.append((integral.value, integral.abs_error_estimate, power))
    value, error = assemble_product(math.log(0.5), -1, factors)
    return GweResult(value, "erss", n, "density_quadrature", error, converged)


def _closed_form(log_abs_const: float, factors: Sequence[Tuple[float, float, int]], n: int,
                 family: str, odd_index_reading: bool = True) -> GweResult:
    notes = _notes_for(n) if odd_index_reading else ()
    if notes:
        logger.warning("%s closed form with odd n=%s: %s", family, n, ODD_INDEX_NOTE)
    value, error = assemble_product(log_abs_const, -1, factors)
    return GweResult(value, "erss", n, "closed_form", error, True, notes)


def closed_form_power(theta: float, m: float, n: int) -> GweResult:
    """
    ERSS GWE for the power family f(x) = theta x^(theta-1) with w(x) = x^m.

    With a = (m + theta - 1) / theta the beta expectations are
    theta (2n-1)! Gamma(a+1) / Gamma(a+2n) for the minimum,
    theta^2 (2n-1) / (2n theta + m - 1) for the maximum and
    theta (2n-1)! / (n-1)! Gamma(a+n) / Gamma(a+2n) for the median.

    Raises:
        ParameterDomainError: Unless theta > 0, m > 0 and m + 2 theta - 1 > 0
    """
    _check_n(n)
    LambdaProfile(PowerDistribution(theta), power_weight(m))
    a = (m + theta - 1.0) / theta
    lg = special.gammaln
    by_rank = {
        1: math.exp(math.log(theta) + lg(2 * n) + lg(a + 1) - lg(a + 2 * n)),
        2 * n - 1: theta * theta * (2 * n - 1) / (2 * n * theta + m - 1.0),
        n: math.exp(math.log(theta) + lg(2 * n) - lg(n) + lg(a + n) - lg(a + 2 * n)),
    }
    return _closed_form(q_constants(n).log_abs_for_product - math.log(2.0),
                        [(by_rank[k], 0.0, p) for k, p in erss_ranks(n)], n, "power")


def closed_form_exponential(rate: float, m: float, n: int, abs_tol: float = DEFAULT_ABS_TOL,
                            rel_tol: float = DEFAULT_REL_TOL,
                            max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    ERSS GWE for the exponential family with w(x) = x^m.

    Even n: Q1 (2n-1)^(n/2) / (2^(n+1) n^n) lambda^(-n(m-1)) prod E(W_{1:2n}^m) E(W_{2n-1:2n}^m).
    Odd n: Q2 (2n-1)^((n-1)/2) / (2^(n+1) n^(n-1)) lambda^(-n(m-1)) ... E(W_{n:2n}^m),
    where (2n-1)^(n/2) (resp. (n-1)/2) plays the role of (2n-1)!!.

    Raises:
        ParameterDomainError: Unless lambda > 0 and m > 0
    """
    _check_n(n)
    LambdaProfile(ExponentialDistribution(rate), power_weight(m))
    constants = q_constants(n)
    if n % 2 == 0:
        log_const = (constants.log_abs_q1 + (n / 2) * math.log(2 * n - 1)
                     - (n + 1) * math.log(2.0) - n * math.log(n))
    else:
        log_const = (constants.log_abs_q2_product + ((n - 1) / 2) * math.log(2 * n - 1)
                     - (n + 1) * math.log(2.0) - (n - 1) * math.log(n))
    log_const -= n * (m - 1.0) * math.log(rate)
    factors = []
    for k, power in erss_ranks(n):
        moment = order_stat_moment_integral((k + 1) // 2, n, m, abs_tol, rel_tol, max_evaluations)
        factors.append((moment.value, moment.abs_error_estimate, power))
    return _closed_form(log_const, factors, n, "exponential", odd_index_reading=False)


def closed_form_pareto(alpha: float, m: float, n: int) -> GweResult:
    """
    ERSS GWE for the Pareto family F(x) = 1 - x^(-alpha), x > 1, with w(x) = x^m.

    With b = (alpha - m + 1) / alpha the beta expectations are
    alpha^2 (2n-1) / (2n alpha - m + 1) for the minimum,
    alpha (2n-1)! Gamma(b+1) / Gamma(b+2n) for the maximum and
    alpha (2n-1)! / (n-1)! Gamma(b+n) / Gamma(b+2n) for the median.

    Raises:
        ParameterDomainError: Unless alpha > 0, m > 0 and 2 alpha - m + 1 > 0
    """
    _check_n(n)
    LambdaProfile(ParetoDistribution(alpha), power_weight(m))
    b = (alpha - m + 1.0) / alpha
    lg = special.gammaln
    by_rank = {
        1: alpha * alpha * (2 * n - 1) / (2 * n * alpha - m + 1.0),
        2 * n - 1: math.exp(math.log(alpha) + lg(2 * n) + lg(b + 1) - lg(b + 2 * n)),
        n: math.exp(math.log(alpha) + lg(2 * n) - lg(n) + lg(b + n) - lg(b + 2 * n)),
    }
    return _closed_form(q_constants(n).log_abs_for_product - math.log(2.0),
                        [(by_rank[k], 0.0, p) for k, p in erss_ranks(n)], n, "pareto")


def closed_form_for(dist: DistributionSpec, w: WeightSpec, n: int, abs_tol: float = DEFAULT_ABS_TOL,
                    rel_tol: float = DEFAULT_REL_TOL,
                    max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> Optional[GweResult]:
    """Closed-form ERSS GWE when (dist, w) belongs to a family that has one, else None."""
    if w.kind not in ("power_weight", "identity") or dist.shift != 0.0:
        return None
    if type(dist) is PowerDistribution:  # pylint: disable=unidiomatic-typecheck
        return closed_form_power(dist.theta, w.m, n)
    if type(dist) is ExponentialDistribution:  # pylint: disable=unidiomatic-typecheck
        return closed_form_exponential(dist.rate, w.m, n, abs_tol, rel_tol, max_evaluations)
    if type(dist) is ParetoDistribution:  # pylint: disable=unidiomatic-typecheck
        return closed_form_pareto(dist.alpha, w.m, n)
    return None


def gwe_erss(dist: DistributionSpec, w: WeightSpec, n: int, method: str = "quantile",
             abs_tol: float = DEFAULT_ABS_TOL, rel_tol: float = DEFAULT_REL_TOL,
             max_evaluations: int = DEFAULT_MAX_EVALUATIONS) -> GweResult:
    """
    ERSS GWE by the named route: 'quantile', 'density' or 'closed_form'.

    Raises:
        ParameterDomainError: If no closed form exists for (dist, w) or the method is unknown
    """
    if method == "quantile":
        return gwe_erss_quantile(dist, w, n, abs_tol, rel_tol, max_evaluations)
    if method == "density":
        return gwe_erss_direct(dist, w, n, abs_tol, rel_tol, max_evaluations)
    if method == "closed_form":
        result = closed_form_for(dist, w, n, abs_tol, rel_tol, max_evaluations)
        if result is None:
            raise ParameterDomainError(f"no closed form for {dist.label} with w={w.label}")
        return result
    raise ParameterDomainError(f"Unknown ERSS method: {method}")


def agreement(values: Sequence[GweResult], tolerance: float = 1e-6) -> Tuple[bool, List[str]]:
    """
    Check pairwise agreement |a - b| <= tolerance * max(1, |a|) across methods.

    Returns:
        Tuple of (all agree, list of disagreement messages)
    """
    messages = []
    for idx, first in enumerate(values):
        for second in values[idx + 1:]:
            gap = abs(first.value - second.value)
            if gap > tolerance * max(1.0, abs(first.value)):
                messages.append(
                    f"{first.method}={first.value:.12g} vs {second.method}={second.value:.12g} (gap {gap:.3g})"
                )
    return len(messages) == 0, messages
