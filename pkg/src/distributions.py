"""
Parametric distribution families and the densities the GWE formulas consume.

Every family exposes vectorized pdf / cdf / sf / quantile plus the
density-quantile function f(F^-1(u)). On top of that this module builds:

- LambdaProfile: the quantile-weighted density w(F^-1(u)) f(F^-1(u))
- OrderStatDensitySpec: pdf and cdf of the i-th order statistic of n draws
- the beta densities phi_{2i-1:2n-1} and the exponential order-statistic
  densities psi_{2i-1:2n}

All specs are immutable; every evaluator is a pure function.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import special
from scipy.interpolate import PchipInterpolator

from src.errors import ConfigError, DomainError, IntegrandEvaluationError, ParameterDomainError
from src.weights import WeightSpec

logger = logging.getLogger(__name__)

FAMILIES = (
    "power",
    "exponential",
    "pareto",
    "uniform",
    "triangular_up",
    "triangular_down",
    "custom_tabulated",
)


def _as_array(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _masked(func: Callable[[np.ndarray], np.ndarray], y: np.ndarray, mask: np.ndarray,
            fill: np.ndarray) -> np.ndarray:
    """Evaluate func only where mask holds; keep fill elsewhere."""
    out = np.array(np.broadcast_to(fill, y.shape), dtype=float)
    flat_mask = np.atleast_1d(mask)
    if np.any(flat_mask):
        flat_out = np.atleast_1d(out)
        flat_out[flat_mask] = func(np.atleast_1d(y)[flat_mask])
        out = flat_out.reshape(y.shape)
    return out


def _check_unit(u: np.ndarray) -> None:
    if np.any(~((u > 0.0) & (u < 1.0))):
        bad = np.atleast_1d(u)[~((np.atleast_1d(u) > 0.0) & (np.atleast_1d(u) < 1.0))][0]
        raise DomainError(f"u must lie in the open interval (0, 1), got {bad}")


class DistributionSpec(ABC):
    """
    A parametric family with pdf / cdf / quantile on a support interval.

    Subclasses implement the unshifted law through the underscore hooks;
    this base class applies the location shift, the support masking and the
    domain checks.
    """

    family: str = ""
    shift: float = 0.0

    @property
    @abstractmethod
    def params(self) -> Tuple[float, ...]:
        """Family parameters in their natural order."""

    @property
    @abstractmethod
    def _base_support(self) -> Tuple[float, float]:
        """Support of the unshifted law."""

    @abstractmethod
    def _pdf(self, y: np.ndarray) -> np.ndarray:
        """Unshifted pdf on the closed support."""

    @abstractmethod
    def _cdf(self, y: np.ndarray) -> np.ndarray:
        """Unshifted cdf on the closed support."""

    @abstractmethod
    def _quantile(self, u: np.ndarray) -> np.ndarray:
        """Unshifted quantile for u in (0, 1)."""

    def _sf(self, y: np.ndarray) -> np.ndarray:
        return 1.0 - self._cdf(y)

    def _density_quantile(self, u: np.ndarray) -> np.ndarray:
        return self._pdf(self._quantile(u))

    def _lambda_power(self, u: np.ndarray, m: float) -> Optional[np.ndarray]:
        """Closed-form Lambda for w(x) = x^m, or None when not available."""
        return None

    @property
    def _base_mean(self) -> Optional[float]:
        return None

    @property
    def _base_variance(self) -> Optional[float]:
        return None

    @property
    def support(self) -> Tuple[float, float]:
        """Support interval (l_X, u_X) including the shift."""
        lower, upper = self._base_support
        return lower + self.shift, upper + self.shift

    @property
    def mean(self) -> Optional[float]:
        """Mean when finite and known in closed form, else None."""
        base = self._base_mean
        return None if base is None else base + self.shift

    @property
    def variance(self) -> Optional[float]:
        """Variance when finite and known in closed form, else None."""
        return self._base_variance

    @property
    def label(self) -> str:
        """Short label such as 'pareto(2)'."""
        args = ",".join(f"{p:g}" for p in self.params)
        text = f"{self.family}({args})" if args else self.family
        if self.shift:
            text += f"{self.shift:+g}"
        return text

    def pdf(self, x) -> np.ndarray:
        """pdf at x; 0 outside the support."""
        y = _as_array(x) - self.shift
        lower, upper = self._base_support
        inside = (y >= lower) & (y <= upper)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return _masked(self._pdf, y, inside, np.zeros_like(y))

    def cdf(self, x) -> np.ndarray:
        """cdf at x; 0 left of the support, 1 right of it."""
        y = _as_array(x) - self.shift
        lower, upper = self._base_support
        inside = (y > lower) & (y < upper)
        fill = np.where(y >= upper, 1.0, 0.0)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.clip(_masked(self._cdf, y, inside, fill), 0.0, 1.0)

    def sf(self, x) -> np.ndarray:
        """Survival function 1 - F(x), computed without cancellation where possible."""
        y = _as_array(x) - self.shift
        lower, upper = self._base_support
        inside = (y > lower) & (y < upper)
        fill = np.where(y <= lower, 1.0, 0.0)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.clip(_masked(self._sf, y, inside, fill), 0.0, 1.0)

    def quantile(self, u) -> np.ndarray:
        """
        Quantile function F^-1(u).

        Raises:
            DomainError: If any u lies outside (0, 1)
        """
        u = _as_array(u)
        _check_unit(u)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._quantile(u) + self.shift

    def density_quantile(self, u) -> np.ndarray:
        """f(F^-1(u)) for u in (0, 1)."""
        u = _as_array(u)
        _check_unit(u)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._density_quantile(u)

    def check_weight_feasibility(self, weight: WeightSpec) -> None:
        """
        Reject weights whose GWE integrals diverge for this family.

        Raises:
            ParameterDomainError: If the combination is not integrable
        """

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as {family, params, shift}."""
        return {"family": self.family, "params": list(self.params), "shift": self.shift}


@dataclass(frozen=True)
class PowerDistribution(DistributionSpec):
    """f(x) = theta x^(theta-1) on (0, 1)."""

    theta: float
    shift: float = 0.0
    family = "power"

    def __post_init__(self):
        if not self.theta > 0:
            raise ParameterDomainError(f"power family requires theta > 0, got {self.theta}")

    @property
    def params(self) -> Tuple[float, ...]:
        return (self.theta,)

    @property
    def _base_support(self) -> Tuple[float, float]:
        return 0.0, 1.0

    def _pdf(self, y):
        return self.theta * np.power(y, self.theta - 1.0)

    def _cdf(self, y):
        return np.power(y, self.theta)

    def _sf(self, y):
        return -np.expm1(self.theta * np.log(y))

    def _quantile(self, u):
        return np.power(u, 1.0 / self.theta)

    def _density_quantile(self, u):
        return self.theta * np.power(u, (self.theta - 1.0) / self.theta)

    def _lambda_power(self, u, m):
        return self.theta * np.power(u, (m + self.theta - 1.0) / self.theta)

    @property
    def _base_mean(self):
        return self.theta / (self.theta + 1.0)

    @property
    def _base_variance(self):
        return self.theta / ((self.theta + 2.0) * (self.theta + 1.0) ** 2)

    def check_weight_feasibility(self, weight: WeightSpec) -> None:
        if weight.kind == "power_weight" and not weight.m + 2.0 * self.theta - 1.0 > 0:
            raise ParameterDomainError(
                f"power(theta={self.theta:g}) with w=x^{weight.m:g} needs m + 2*theta - 1 > 0; "
                "the GWE integrals diverge otherwise"
            )


@dataclass(frozen=True)
class ExponentialDistribution(DistributionSpec):
    """f(x) = lambda exp(-lambda x) on (0, inf)."""

    rate: float
    shift: float = 0.0
    family = "exponential"

    def __post_init__(self):
        if not self.rate > 0:
            raise ParameterDomainError(f"exponential family requires lambda > 0, got {self.rate}")

    @property
    def params(self) -> Tuple[float, ...]:
        return (self.rate,)

    @property
    def _base_support(self) -> Tuple[float, float]:
        return 0.0, math.inf

    def _pdf(self, y):
        return self.rate * np.exp(-self.rate * y)

    def _cdf(self, y):
        return -np.expm1(-self.rate * y)

    def _sf(self, y):
        return np.exp(-self.rate * y)

    def _quantile(self, u):
        return -np.log1p(-u) / self.rate

    def _density_quantile(self, u):
        return self.rate * (1.0 - u)

    def _lambda_power(self, u, m):
        # (-1)^m (1-u) ln(1-u)^m / lambda^(m-1), written with -ln(1-u) >= 0
        return (1.0 - u) * np.power(-np.log1p(-u), m) / self.rate ** (m - 1.0)

    @property
    def _base_mean(self):
        return 1.0 / self.rate

    @property
    def _base_variance(self):
        return 1.0 / self.rate ** 2


@dataclass(frozen=True)
class ParetoDistribution(DistributionSpec):
    """F(x) = 1 - x^(-alpha) on (1, inf)."""

    alpha: float
    shift: float = 0.0
    family = "pareto"

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterDomainError(f"pareto family requires alpha > 0, got {self.alpha}")

    @property
    def params(self) -> Tuple[float, ...]:
        return (self.alpha,)

    @property
    def _base_support(self) -> Tuple[float, float]:
        return 1.0, math.inf

    def _pdf(self, y):
        return self.alpha * np.power(y, -self.alpha - 1.0)

    def _cdf(self, y):
        return -np.expm1(-self.alpha * np.log(y))

    def _sf(self, y):
        return np.power(y, -self.alpha)

    def _quantile(self, u):
        return np.exp(-np.log1p(-u) / self.alpha)

    def _density_quantile(self, u):
        return self.alpha * np.power(1.0 - u, (self.alpha + 1.0) / self.alpha)

    def _lambda_power(self, u, m):
        return self.alpha * np.power(1.0 - u, (self.alpha - m + 1.0) / self.alpha)

    @property
    def _base_mean(self):
        return self.alpha / (self.alpha - 1.0) if self.alpha > 1 else None

    @property
    def _base_variance(self):
        if self.alpha > 2:
            return self.alpha / ((self.alpha - 1.0) ** 2 * (self.alpha - 2.0))
        return None

    def check_weight_feasibility(self, weight: WeightSpec) -> None:
        if weight.kind == "power_weight" and not 2.0 * self.alpha - weight.m + 1.0 > 0:
            raise ParameterDomainError(
                f"pareto(alpha={self.alpha:g}) with w=x^{weight.m:g} needs 2*alpha - m + 1 > 0; "
                "the GWE integrals diverge otherwise"
            )


@dataclass(frozen=True)
class UniformDistribution(DistributionSpec):
    """Uniform on (a, b)."""

    a: float = 0.0
    b: float = 1.0
    shift: float = 0.0
    family = "uniform"

    def __post_init__(self):
        if not self.a < self.b:
            raise ParameterDomainError(f"uniform family requires a < b, got a={self.a}, b={self.b}")

    @property
    def params(self) -> Tuple[float, ...]:
        return (self.a, self.b)

    @property
    def _base_support(self) -> Tuple[float, float]:
        return self.a, self.b

    def _pdf(self, y):
        return np.full_like(y, 1.0 / (self.b - self.a))

    def _cdf(self, y):
        return (y - self.a) / (self.b - self.a)

    def _sf(self, y):
        return (self.b - y) / (self.b - self.a)

    def _quantile(self, u):
        return self.a + u * (self.b - self.a)

    def _density_quantile(self, u):
        return np.full_like(u, 1.0 / (self.b - self.a))

    @property
    def _base_mean(self):
        return 0.5 * (self.a + self.b)

    @property
    def _base_variance(self):
        return (self.b - self.a) ** 2 / 12.0


@dataclass(frozen=True)
class TriangularUpDistribution(DistributionSpec):
    """f(x) = 2x on [0, 1]."""

    shift: float = 0.0
    family = "triangular_up"

    @property
    def params(self) -> Tuple[float, ...]:
        return ()

    @property
    def _base_support(self) -> Tuple[float, float]:
        return 0.0, 1.0

    def _pdf(self, y):
        return 2.0 * y

    def _cdf(self, y):
        return y * y

    def _sf(self, y):
        return (1.0 - y) * (1.0 + y)

    def _quantile(self, u):
        return np.sqrt(u)

    def _density_quantile(self, u):
        return 2.0 * np.sqrt(u)

    @property
    def _base_mean(self):
        return 2.0 / 3.0

    @property
    def _base_variance(self):
        return 1.0 / 18.0


@dataclass(frozen=True)
class TriangularDownDistribution(DistributionSpec):
    """g(x) = 2(1 - x) on [0, 1]."""

    shift: float = 0.0
    family = "triangular_down"

    @property
    def params(self) -> Tuple[float, ...]:
        return ()

    @property
    def _base_support(self) -> Tuple[float, float]:
        return 0.0, 1.0

    def _pdf(self, y):
        return 2.0 * (1.0 - y)

    def _cdf(self, y):
        return y * (2.0 - y)

    def _sf(self, y):
        return (1.0 - y) ** 2

    def _quantile(self, u):
        # 1 - sqrt(1-u), rearranged to avoid cancellation near u = 0
        return u / (1.0 + np.sqrt(1.0 - u))

    def _density_quantile(self, u):
        return 2.0 * np.sqrt(1.0 - u)

    @property
    def _base_mean(self):
        return 1.0 / 3.0

    @property
    def _base_variance(self):
        return 1.0 / 18.0


@dataclass(frozen=True)
class TabulatedDistribution(DistributionSpec):
    """
    Distribution given by a table of (x, F(x)) pairs.

    The cdf is a monotone cubic (PCHIP) interpolant of the table with the
    first and last knots pinned to exactly 0 and 1; the pdf is its derivative.
    """

    table_x: Tuple[float, ...] = ()
    table_cdf: Tuple[float, ...] = ()
    shift: float = 0.0
    family = "custom_tabulated"
    _cdf_interp: Any = field(default=None, init=False, compare=False, repr=False)
    _pdf_interp: Any = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        xs = np.asarray(self.table_x, dtype=float)
        fs = np.asarray(self.table_cdf, dtype=float)
        if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 3:
            raise ParameterDomainError("custom_tabulated needs matching 1-d tables with at least 3 knots")
        if np.any(np.diff(xs) <= 0):
            raise ParameterDomainError("custom_tabulated x knots must be strictly increasing")
        if np.any(np.diff(fs) < 0):
            raise ParameterDomainError("custom_tabulated F values must be nondecreasing")
        if not fs[-1] > fs[0]:
            raise ParameterDomainError("custom_tabulated F must increase across the table")
        pinned = (fs - fs[0]) / (fs[-1] - fs[0])
        pinned[0], pinned[-1] = 0.0, 1.0
        cdf_interp = PchipInterpolator(xs, pinned, extrapolate=False)
        object.__setattr__(self, "_cdf_interp", cdf_interp)
        object.__setattr__(self, "_pdf_interp", cdf_interp.derivative())
        object.__setattr__(self, "table_x", tuple(float(v) for v in xs))
        object.__setattr__(self, "table_cdf", tuple(float(v) for v in pinned))

    @property
    def params(self) -> Tuple[float, ...]:
        return ()

    @property
    def _base_support(self) -> Tuple[float, float]:
        return self.table_x[0], self.table_x[-1]

    def _pdf(self, y):
        return np.maximum(self._pdf_interp(y), 0.0)

    def _cdf(self, y):
        return self._cdf_interp(y)

    def _quantile(self, u):
        knots_x = np.asarray(self.table_x)
        knots_f = np.asarray(self.table_cdf)
        seg = np.clip(np.searchsorted(knots_f, u, side="right") - 1, 0, knots_x.size - 2)
        lo = knots_x[seg].copy()
        hi = knots_x[seg + 1].copy()
        # bisection inside the bracketing segment; the interpolant is monotone there
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            below = self._cdf_interp(mid) < u
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["x"] = list(self.table_x)
        data["F"] = list(self.table_cdf)
        return data


@dataclass(frozen=True)
class MonotoneTransform:
    """Increasing differentiable map eta with its inverse and derivative."""

    name: str
    forward: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    inverse: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    derivative: Callable[[np.ndarray], np.ndarray] = field(compare=False)


def identity_transform() -> MonotoneTransform:
    """eta(x) = x."""
    return MonotoneTransform("identity", lambda x: np.asarray(x, dtype=float),
                             lambda y: np.asarray(y, dtype=float),
                             lambda x: np.ones_like(np.asarray(x, dtype=float)))


def scale_transform(factor: float) -> MonotoneTransform:
    """eta(x) = c x with c > 0."""
    if not factor > 0:
        raise ParameterDomainError(f"scale transform needs a positive factor, got {factor}")
    return MonotoneTransform(f"scale({factor:g})", lambda x: factor * np.asarray(x, dtype=float),
                             lambda y: np.asarray(y, dtype=float) / factor,
                             lambda x: np.full_like(np.asarray(x, dtype=float), factor))


def exp_minus_one_transform() -> MonotoneTransform:
    """eta(x) = e^x - 1; maps a standard exponential onto a Lomax law."""
    return MonotoneTransform("exp_minus_one", np.expm1, np.log1p, np.exp)


@dataclass(frozen=True)
class TransformedDistribution(DistributionSpec):
    """Law of V = eta(X) for an increasing transform eta."""

    base: DistributionSpec = None
    transform: MonotoneTransform = None
    shift: float = 0.0
    family = "transformed"

    @property
    def params(self) -> Tuple[float, ...]:
        return self.base.params

    @property
    def label(self) -> str:
        return f"{self.transform.name}[{self.base.label}]"

    @property
    def _base_support(self) -> Tuple[float, float]:
        lower, upper = self.base.support
        with np.errstate(over="ignore"):
            return float(self.transform.forward(lower)), float(self.transform.forward(upper))

    def _pdf(self, y):
        x = self.transform.inverse(y)
        return self.base.pdf(x) / self.transform.derivative(x)

    def _cdf(self, y):
        return self.base.cdf(self.transform.inverse(y))

    def _sf(self, y):
        return self.base.sf(self.transform.inverse(y))

    def _quantile(self, u):
        return self.transform.forward(self.base.quantile(u))

    def _density_quantile(self, u):
        return self.base.density_quantile(u) / self.transform.derivative(self.base.quantile(u))

    def to_dict(self) -> Dict[str, Any]:
        return {"family": self.family, "transform": self.transform.name, "base": self.base.to_dict()}


def create_distribution(family: str, params: Sequence[float] = (), shift: float = 0.0,
                        **extra: Any) -> DistributionSpec:
    """
    Create a distribution from a family name and parameter vector.

    Args:
        family: One of FAMILIES (case-insensitive)
        params: Family parameters (theta, lambda, alpha or a, b)
        shift: Location shift added to the variable
        **extra: table_x / table_cdf for custom_tabulated

    Returns:
        DistributionSpec instance

    Raises:
        ParameterDomainError: On invalid parameters
        ConfigError: On unknown family
    """
    name = family.lower()
    params = tuple(float(p) for p in params)
    try:
        if name == "power":
            return PowerDistribution(params[0] if params else 1.0, shift=shift)
        if name == "exponential":
            return ExponentialDistribution(params[0] if params else 1.0, shift=shift)
        if name == "pareto":
            return ParetoDistribution(params[0] if params else 1.0, shift=shift)
        if name == "uniform":
            a, b = params if len(params) == 2 else (0.0, 1.0)
            return UniformDistribution(a, b, shift=shift)
        if name == "triangular_up":
            return TriangularUpDistribution(shift=shift)
        if name == "triangular_down":
            return TriangularDownDistribution(shift=shift)
        if name == "custom_tabulated":
            return TabulatedDistribution(tuple(extra["table_x"]), tuple(extra["table_cdf"]), shift=shift)
    except KeyError as exc:
        raise ConfigError(f"custom_tabulated needs table_x and table_cdf ({exc})") from exc
    raise ConfigError(f"Unknown distribution family: {family}")


def distribution_from_dict(data: Dict[str, Any]) -> DistributionSpec:
    """
    Build a distribution from its JSON form {family, params, shift?, x?, F?}.

    Raises:
        ConfigError: On missing family or unknown family
    """
    if "family" not in data:
        raise ConfigError("Distribution spec needs a 'family' field")
    return create_distribution(
        data["family"],
        data.get("params", ()),
        shift=float(data.get("shift", 0.0)),
        **({"table_x": data["x"], "table_cdf": data["F"]} if "x" in data and "F" in data else {}),
    )


def parse_distribution(text: str) -> DistributionSpec:
    """
    Parse the compact CLI form 'family:p1,p2', e.g. 'pareto:2' or 'uniform:-1,1'.

    Raises:
        ConfigError: On malformed text
    """
    family, _, rest = text.partition(":")
    try:
        params = [float(p) for p in rest.split(",") if p.strip()] if rest else []
    except ValueError as exc:
        raise ConfigError(f"Malformed distribution parameters in '{text}'") from exc
    return create_distribution(family.strip(), params)


@dataclass(frozen=True)
class LambdaProfile:
    """Quantile-weighted density Lambda(u) = w(F^-1(u)) f(F^-1(u)) on (0, 1)."""

    dist: DistributionSpec
    weight: WeightSpec

    def __post_init__(self):
        self.dist.check_weight_feasibility(self.weight)

    def evaluate(self, u) -> np.ndarray:
        """
        Evaluate Lambda at u.

        Raises:
            DomainError: If any u lies outside (0, 1)
        """
        u = _as_array(u)
        _check_unit(u)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if self.weight.kind in ("power_weight", "identity") and self.dist.shift == 0.0:
                closed = self.dist._lambda_power(u, self.weight.m)  # pylint: disable=protected-access
                if closed is not None:
                    return closed
            x = self.dist.quantile(u)
            return self.weight.evaluate(x) * self.dist.density_quantile(u)

    __call__ = evaluate


@dataclass(frozen=True)
class OrderStatDensitySpec:
    """Law of the i-th order statistic of n iid draws from base."""

    i: int
    n: int
    base: DistributionSpec

    def __post_init__(self):
        _check_rank(self.i, self.n)

    @property
    def log_coefficient(self) -> float:
        """log of n! / ((i-1)! (n-i)!)."""
        return float(special.gammaln(self.n + 1) - special.gammaln(self.i) - special.gammaln(self.n - self.i + 1))

    def pdf(self, x) -> np.ndarray:
        """n!/((i-1)!(n-i)!) F^(i-1) Fbar^(n-i) f."""
        f = self.base.pdf(x)
        big_f = self.base.cdf(x)
        sf = self.base.sf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_part = special.xlogy(self.i - 1, big_f) + special.xlogy(self.n - self.i, sf)
            return np.exp(self.log_coefficient + log_part) * f

    def cdf(self, x) -> np.ndarray:
        """Regularized incomplete beta I_F(x)(i, n-i+1)."""
        return special.betainc(self.i, self.n - self.i + 1, self.base.cdf(x))


def _check_rank(i: int, n: int) -> None:
    if int(n) != n or int(i) != i or n < 1 or not 1 <= i <= n:
        raise ParameterDomainError(f"rank must satisfy 1 <= i <= n with integer n >= 1, got i={i}, n={n}")


def pdf_at(dist: DistributionSpec, x: float) -> float:
    """f(x); 0 outside the support."""
    return float(dist.pdf(x))


def quantile_at(dist: DistributionSpec, u: float) -> float:
    """F^-1(u) for u in (0, 1)."""
    return float(dist.quantile(u))


def lambda_at(profile: LambdaProfile, u: float) -> float:
    """
    Lambda(u) = w(F^-1(u)) f(F^-1(u)).

    Raises:
        DomainError: If u is not in (0, 1)
        IntegrandEvaluationError: If the weight is undefined at F^-1(u)
    """
    value = float(profile.evaluate(u))
    if math.isnan(value):
        raise IntegrandEvaluationError(
            f"weight {profile.weight.label} undefined at F^-1({u}) for {profile.dist.label}", abscissa=u
        )
    return value


def order_stat_pdf_at(spec: OrderStatDensitySpec, x: float) -> float:
    """pdf of X_(i:n) at x."""
    return float(spec.pdf(x))


def order_stat_cdf_at(spec: OrderStatDensitySpec, x: float) -> float:
    """cdf of X_(i:n) at x."""
    return float(spec.cdf(x))


def uniform_order_stat_pdf(k: int, size: int, u) -> np.ndarray:
    """
    Density of the k-th order statistic of `size` standard uniforms (Beta(k, size-k+1)).

    Computed in log space so large factorials never overflow.
    """
    _check_rank(k, size)
    u = _as_array(u)
    log_coef = special.gammaln(size + 1) - special.gammaln(k) - special.gammaln(size - k + 1)
    with np.errstate(divide="ignore"):
        return np.exp(log_coef + special.xlogy(k - 1, u) + special.xlog1py(size - k, -u))


def beta_phi(i: int, n: int, u) -> np.ndarray:
    """Vectorized phi_{2i-1:2n-1}(u)."""
    _check_rank(i, n)
    return uniform_order_stat_pdf(2 * i - 1, 2 * n - 1, u)


def beta_phi_at(i: int, n: int, u: float) -> float:
    """
    phi_{2i-1:2n-1}(u) = (2n-1)!/((2i-2)!(2n-2i)!) u^(2i-2) (1-u)^(2n-2i).

    Raises:
        DomainError: If u is not in (0, 1)
        ParameterDomainError: If the rank is out of range
    """
    _check_unit(_as_array(u))
    return float(beta_phi(i, n, u))


def exp_order_stat_pdf(i: int, n: int, x) -> np.ndarray:
    """Vectorized psi_{2i-1:2n}(x) for x >= 0."""
    _check_rank(i, n)
    x = _as_array(x)
    log_coef = special.gammaln(2 * n + 1) - special.gammaln(2 * i - 1) - special.gammaln(2 * n - 2 * i + 2)
    with np.errstate(divide="ignore"):
        log_val = log_coef + special.xlogy(2 * i - 2, -np.expm1(-x)) - (2 * n - 2 * i + 2) * x
    return np.exp(log_val)


def exp_order_stat_pdf_at(i: int, n: int, x: float) -> float:
    """
    psi_{2i-1:2n}(x): pdf of the (2i-1)-th order statistic of 2n standard exponentials.

    Raises:
        DomainError: If x < 0
    """
    if x < 0:
        raise DomainError(f"psi is defined for x >= 0, got {x}")
    return float(exp_order_stat_pdf(i, n, x))
