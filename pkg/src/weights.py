"""
Weight functions w(x) for the general weighted extropy.

A WeightSpec is immutable and vectorized: evaluate() accepts scalars or numpy
arrays and always returns a float ndarray (0-d for scalars).
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from src.errors import ConfigError, ParameterDomainError

logger = logging.getLogger(__name__)

WEIGHT_KINDS = ("power_weight", "identity", "odd_custom", "custom_tabulated")


@dataclass(frozen=True)
class WeightSpec:
    """
    Weight function with declared sign and shape metadata.

    Attributes:
        kind: One of WEIGHT_KINDS
        m: Exponent for power_weight (ignored otherwise)
        is_nonnegative_on_support: Declared w >= 0 on the support it is used with
        is_increasing: Declared monotonicity
        is_odd: Declared w(-x) = -w(x)
        func: Callable for odd_custom
        table_x / table_w: Knots for custom_tabulated
    """

    kind: str
    m: float = 1.0
    is_nonnegative_on_support: bool = True
    is_increasing: bool = True
    is_odd: bool = False
    name: str = ""
    func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, compare=False, repr=False)
    table_x: Optional[Sequence[float]] = field(default=None, compare=False, repr=False)
    table_w: Optional[Sequence[float]] = field(default=None, compare=False, repr=False)
    _interp: Any = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise ParameterDomainError(f"Unknown weight kind: {self.kind}")
        if self.kind == "power_weight" and not self.m > 0:
            raise ParameterDomainError(f"power_weight requires m > 0, got m={self.m}")
        if self.kind == "odd_custom" and self.func is None:
            raise ParameterDomainError("odd_custom weight needs a callable")
        if self.kind == "custom_tabulated":
            xs = np.asarray(self.table_x, dtype=float)
            ws = np.asarray(self.table_w, dtype=float)
            if xs.ndim != 1 or xs.shape != ws.shape or xs.size < 2:
                raise ParameterDomainError("custom_tabulated weight needs matching 1-d tables (>= 2 knots)")
            if np.any(np.diff(xs) <= 0):
                raise ParameterDomainError("custom_tabulated weight knots must be strictly increasing")
            object.__setattr__(self, "_interp", PchipInterpolator(xs, ws, extrapolate=True))

    @property
    def label(self) -> str:
        """Short human readable label (used in tables and reports)."""
        if self.name:
            return self.name
        if self.kind == "power_weight":
            return f"x^{self.m:g}"
        if self.kind == "identity":
            return "x"
        return self.kind

    def evaluate(self, x) -> np.ndarray:
        """
        Evaluate w at x.

        Args:
            x: Scalar or array of abscissae

        Returns:
            Array of weights; NaN where the weight is undefined
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "identity":
            return x.copy()
        if self.kind == "power_weight":
            if float(self.m).is_integer():
                return np.power(x, int(self.m)).astype(float)
            with np.errstate(invalid="ignore"):
                return np.where(x >= 0, np.power(np.abs(x), self.m), np.nan)
        if self.kind == "odd_custom":
            return np.asarray(self.func(x), dtype=float)
        return np.asarray(self._interp(x), dtype=float)

    __call__ = evaluate

    def is_odd_on_grid(self, half_width: float = 10.0, points: int = 201, tol: float = 1e-12) -> bool:
        """Check w(-x) = -w(x) on a symmetric grid."""
        xs = np.linspace(0.0, half_width, points)
        lhs = self.evaluate(-xs)
        rhs = -self.evaluate(xs)
        if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
            return False
        return bool(np.all(np.abs(lhs - rhs) <= tol * np.maximum(1.0, np.abs(rhs))))

    def is_increasing_on(self, lower: float, upper: float, points: int = 512) -> bool:
        """Check monotonicity of w on [lower, upper] (finite interval)."""
        xs = np.linspace(lower, upper, points)
        values = self.evaluate(xs)
        return bool(np.all(np.diff(values) >= -1e-12 * np.maximum(1.0, np.abs(values[1:]))))

    def is_nonnegative_on(self, lower: float, upper: float, points: int = 512) -> bool:
        """Check w >= 0 on [lower, upper] (finite interval)."""
        values = self.evaluate(np.linspace(lower, upper, points))
        return bool(np.all(values >= 0))

    def to_dict(self) -> Dict[str, Any]:
        """Serialize to the CLI JSON shape {kind, m}."""
        data: Dict[str, Any] = {"kind": self.kind}
        if self.kind == "power_weight":
            data["m"] = self.m
        if self.kind == "custom_tabulated":
            data["x"] = [float(v) for v in self.table_x]
            data["w"] = [float(v) for v in self.table_w]
        return data


def power_weight(m: float) -> WeightSpec:
    """w(x) = x^m, nonnegative and increasing on x > 0."""
    return WeightSpec(kind="power_weight", m=float(m), is_nonnegative_on_support=True,
                      is_increasing=True, is_odd=float(m).is_integer() and int(m) % 2 == 1)


def identity_weight() -> WeightSpec:
    """w(x) = x (odd, increasing; nonnegative only on nonnegative supports)."""
    return WeightSpec(kind="identity", m=1.0, is_nonnegative_on_support=False,
                      is_increasing=True, is_odd=True)


def odd_custom_weight(func: Callable[[np.ndarray], np.ndarray], name: str = "odd_custom",
                      is_increasing: bool = True) -> WeightSpec:
    """User supplied odd weight, e.g. numpy.tanh."""
    return WeightSpec(kind="odd_custom", func=func, name=name, is_nonnegative_on_support=False,
                      is_increasing=is_increasing, is_odd=True)


def tabulated_weight(xs: Sequence[float], ws: Sequence[float], name: str = "") -> WeightSpec:
    """Monotone-cubic interpolated weight built from (x, w) knots."""
    ws_arr = np.asarray(ws, dtype=float)
    return WeightSpec(kind="custom_tabulated", table_x=tuple(float(v) for v in xs),
                      table_w=tuple(float(v) for v in ws_arr), name=name,
                      is_nonnegative_on_support=bool(np.all(ws_arr >= 0)),
                      is_increasing=bool(np.all(np.diff(ws_arr) >= 0)), is_odd=False)


def weight_from_dict(data: Dict[str, Any]) -> WeightSpec:
    """
    Build a WeightSpec from its JSON form.

    Args:
        data: Dictionary such as {"kind": "power_weight", "m": 2}

    Returns:
        WeightSpec

    Raises:
        ConfigError: If the kind is unknown or not constructible from JSON
    """
    kind = str(data.get("kind", "power_weight")).lower()
    if kind == "power_weight":
        return power_weight(float(data.get("m", 1.0)))
    if kind == "identity":
        return identity_weight()
    if kind == "custom_tabulated":
        return tabulated_weight(data["x"], data["w"], name=data.get("name", ""))
    raise ConfigError(f"Weight kind '{kind}' cannot be built from JSON")
