"""
Configuration management for the GWE toolkit.

Values are resolved in layers: built-in defaults, then the environment
(including a .env file), then an optional JSON config file, then explicit
overrides (command-line flags). Later layers win.
"""
import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, Optional, Tuple

from dotenv import load_dotenv

from src.errors import ConfigError

# Configure logging
logger = logging.getLogger(__name__)

# property name -> (environment variable, default)
SETTINGS: Dict[str, tuple] = {
    "abs_tol": ("GWE_ABS_TOL", "1e-11"),
    "rel_tol": ("GWE_REL_TOL", "1e-9"),
    "max_evaluations": ("GWE_MAX_EVALUATIONS", "1000000"),
    "seed": ("GWE_SEED", "20240101"),
    "ks_alpha": ("GWE_KS_ALPHA", "0.01"),
    "grid_size": ("GWE_GRID", "2048"),
    "mc_draws": ("GWE_MC_DRAWS", "1000000"),
    "cycles": ("GWE_CYCLES", "100000"),
    "output_format": ("GWE_OUTPUT_FORMAT", "json"),
    "log_level": ("GWE_LOG_LEVEL", "INFO"),
    "fault_injection_enabled": ("GWE_ENABLE_FAULT_INJECTION", "false"),
    "result_storage_type": ("RESULT_STORAGE_TYPE", "local"),
    "results_dir": ("GWE_RESULTS_DIR", "results"),
}

OUTPUT_FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings of one run; a run is reproducible from it."""

    abs_tol: float
    rel_tol: float
    max_evaluations: int
    seed: int
    ks_alpha: float
    grid_size: int
    mc_draws: int
    cycles: int
    output_format: str
    log_level: str
    fault_injection_enabled: bool
    result_storage_type: str
    results_dir: str
    command: str = ""
    dists: Tuple[str, ...] = ()
    weight_m: Tuple[float, ...] = ()
    n: Optional[int] = None
    n_max: Optional[int] = None
    output_path: Optional[str] = None
    only: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("dists", "weight_m", "only"):
            data[key] = list(data[key])
        return data


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a JSON config file keyed by lower-case setting names.

    Raises:
        ConfigError: If the file is missing, unreadable or holds unknown keys
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a JSON object")
    unknown = sorted(set(data) - set(SETTINGS))
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    return data


class Config:
    """Configuration settings loaded from environment variables, a config file and overrides."""

    def __init__(self, config_file: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None):
        """
        Initialize configuration by loading environment variables.

        Args:
            config_file: Optional JSON config file path
            overrides: Explicit values (e.g. from CLI flags); None entries are ignored
        """
        load_dotenv()
        self._file_values = load_config_file(config_file) if config_file else {}
        self._overrides = {k: v for k, v in (overrides or {}).items() if v is not None}

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        """
        Get a raw configuration value by setting name.

        Args:
            key: Setting name (e.g. 'abs_tol')
            default: Default value if the setting is unknown

        Returns:
            Resolved value or default
        """
        if key in self._overrides:
            return self._overrides[key]
        if key in self._file_values:
            return self._file_values[key]
        if key not in SETTINGS:
            return default
        env_name, fallback = SETTINGS[key]
        return os.getenv(env_name, fallback)

    def _typed(self, key: str, cast: Callable[[Any], Any]) -> Any:
        raw = self.get(key)
        try:
            return cast(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"Invalid value for {key} ({SETTINGS[key][0]}): {raw!r}") from exc

    @staticmethod
    def _to_int(raw: Any) -> int:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"{raw!r} is not an integer")
        return int(value)

    @staticmethod
    def _to_bool(raw: Any) -> bool:
        if isinstance(raw, bool):
            return raw
        return str(raw).lower() in ["true", "1", "yes"]

    @property
    def abs_tol(self) -> float:
        """Absolute quadrature tolerance."""
        return self._typed("abs_tol", float)

    @property
    def rel_tol(self) -> float:
        """Relative quadrature tolerance."""
        return self._typed("rel_tol", float)

    @property
    def max_evaluations(self) -> int:
        """Quadrature evaluation budget per integral."""
        value = self._typed("max_evaluations", self._to_int)
        if value < 1:
            raise ConfigError(f"max_evaluations must be positive, got {value}")
        return value

    @property
    def seed(self) -> int:
        """Monte Carlo seed."""
        return self._typed("seed", self._to_int)

    @property
    def ks_alpha(self) -> float:
        """KS significance level."""
        value = self._typed("ks_alpha", float)
        if not 0 < value < 1:
            raise ConfigError(f"ks_alpha must lie in (0, 1), got {value}")
        return value

    @property
    def grid_size(self) -> int:
        """Grid size of order checks."""
        return self._typed("grid_size", self._to_int)

    @property
    def mc_draws(self) -> int:
        """Monte Carlo draws per beta expectation."""
        return self._typed("mc_draws", self._to_int)

    @property
    def cycles(self) -> int:
        """Simulated cycles for protocol checks."""
        return self._typed("cycles", self._to_int)

    @property
    def output_format(self) -> str:
        """Output format, json or csv."""
        value = str(self.get("output_format")).lower()
        if value not in OUTPUT_FORMATS:
            raise ConfigError(f"output format must be one of {OUTPUT_FORMATS}, got {value!r}")
        return value

    @property
    def log_level(self) -> str:
        """Logging level name."""
        return str(self.get("log_level")).upper()

    @property
    def fault_injection_enabled(self) -> bool:
        """Check if fault injection hooks may be used."""
        return self._typed("fault_injection_enabled", self._to_bool)

    @property
    def result_storage_type(self) -> str:
        """Result storage backend, local or tigris."""
        return str(self.get("result_storage_type")).lower()

    @property
    def results_dir(self) -> str:
        """Directory of the local result store."""
        return str(self.get("results_dir"))

    def to_run_config(self, **run_fields: Any) -> RunConfig:
        """
        Resolve every setting.

        Args:
            **run_fields: Command fields (command, dists, weight_m, n, n_max, output_path, only)

        Raises:
            ConfigError: If any value is malformed
        """
        values = {name: getattr(self, name) for name in SETTINGS}
        for key in ("dists", "weight_m", "only"):
            if key in run_fields and run_fields[key] is not None:
                run_fields[key] = tuple(run_fields[key])
        values.update({k: v for k, v in run_fields.items() if v is not None})
        return RunConfig(**values)
