"""
Unit tests for configuration management.
"""
import json

import pytest

from src.config import SETTINGS, Config, RunConfig, load_config_file
from src.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Remove GWE settings from the environment and skip the .env file."""
    for env_name, _ in SETTINGS.values():
        monkeypatch.delenv(env_name, raising=False)
    monkeypatch.setattr("src.config.load_dotenv", lambda: None)


class TestConfig:
    """Test suite for Config class."""

    def test_config_initialization(self):
        """Test that Config initializes properly."""
        config = Config()
        assert config is not None

    def test_get_with_default(self):
        """Test get method with default value."""
        config = Config()
        value = config.get("NONEXISTENT_KEY", "default_value")
        assert value == "default_value"

    def test_defaults(self):
        """Test built-in defaults."""
        config = Config()
        assert config.abs_tol == 1e-11
        assert config.rel_tol == 1e-9
        assert config.seed == 20240101
        assert config.grid_size == 2048
        assert config.mc_draws == 1_000_000
        assert config.output_format == "json"
        assert config.fault_injection_enabled is False
        assert config.result_storage_type == "local"

    def test_seed_from_environment(self, monkeypatch):
        """Test seed property reads GWE_SEED as an integer."""
        monkeypatch.setenv("GWE_SEED", "7")
        config = Config()
        assert config.seed == 7
        assert isinstance(config.seed, int)

    def test_integer_accepts_scientific_notation(self, monkeypatch):
        """Test integer settings accept 1e5-style values."""
        monkeypatch.setenv("GWE_CYCLES", "1e5")
        assert Config().cycles == 100_000

    def test_non_integer_rejected(self, monkeypatch):
        """Test a fractional integer setting raises ConfigError naming the variable."""
        monkeypatch.setenv("GWE_GRID", "12.5")
        with pytest.raises(ConfigError, match="GWE_GRID"):
            _ = Config().grid_size

    def test_malformed_float_rejected(self, monkeypatch):
        """Test a malformed tolerance raises ConfigError."""
        monkeypatch.setenv("GWE_ABS_TOL", "tiny")
        with pytest.raises(ConfigError):
            _ = Config().abs_tol

    @pytest.mark.parametrize("alpha", ["0", "1", "1.5"])
    def test_ks_alpha_range(self, monkeypatch, alpha):
        """Test ks_alpha must lie strictly between 0 and 1."""
        monkeypatch.setenv("GWE_KS_ALPHA", alpha)
        with pytest.raises(ConfigError):
            _ = Config().ks_alpha

    def test_max_evaluations_from_environment(self, monkeypatch):
        """Test GWE_MAX_EVALUATIONS sets the quadrature budget."""
        monkeypatch.setenv("GWE_MAX_EVALUATIONS", "5000")
        assert Config().max_evaluations == 5000
        assert Config(overrides={"max_evaluations": 64}).max_evaluations == 64

    @pytest.mark.parametrize("raw", ["0", "-3"])
    def test_max_evaluations_positive(self, monkeypatch, raw):
        """Test a non-positive budget is rejected."""
        monkeypatch.setenv("GWE_MAX_EVALUATIONS", raw)
        with pytest.raises(ConfigError):
            _ = Config().max_evaluations

    def test_output_format_validated(self, monkeypatch):
        """Test unknown output formats are rejected."""
        monkeypatch.setenv("GWE_OUTPUT_FORMAT", "xml")
        with pytest.raises(ConfigError):
            _ = Config().output_format

    @pytest.mark.parametrize("raw,expected", [("true", True), ("1", True), ("YES", True), ("false", False), ("0", False)])
    def test_fault_injection_flag(self, monkeypatch, raw, expected):
        """Test fault_injection_enabled parses boolean strings."""
        monkeypatch.setenv("GWE_ENABLE_FAULT_INJECTION", raw)
        assert Config().fault_injection_enabled is expected

    def test_log_level_upper_cased(self, monkeypatch):
        """Test log_level is normalized to upper case."""
        monkeypatch.setenv("GWE_LOG_LEVEL", "debug")
        assert Config().log_level == "DEBUG"

    def test_layering(self, monkeypatch, tmp_path):
        """Test overrides beat the config file, which beats the environment."""
        monkeypatch.setenv("GWE_SEED", "1")
        monkeypatch.setenv("GWE_GRID", "1024")
        monkeypatch.setenv("GWE_CYCLES", "5000")
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"seed": 2, "grid_size": 4096}), encoding="utf-8")
        config = Config(str(path), {"seed": 3, "cycles": None})
        assert config.seed == 3
        assert config.grid_size == 4096
        assert config.cycles == 5000

    def test_to_run_config(self):
        """Test every setting is resolved and run fields are attached."""
        run = Config(overrides={"seed": 11}).to_run_config(command="table", dists=["power:1"], n=None)
        assert isinstance(run, RunConfig)
        assert run.seed == 11
        assert run.command == "table"
        assert run.dists == ("power:1",)
        assert run.n is None

    def test_run_config_to_dict(self):
        """Test tuple fields serialize as lists."""
        data = Config().to_run_config(command="verify", only=["bound"]).to_dict()
        assert data["only"] == ["bound"]
        assert data["dists"] == []
        assert data["seed"] == 20240101
        json.dumps(data)


class TestLoadConfigFile:
    """Test suite for load_config_file."""

    def test_missing_file(self, tmp_path):
        """Test a missing file raises ConfigError."""
        with pytest.raises(ConfigError):
            load_config_file(str(tmp_path / "absent.json"))

    def test_invalid_json(self, tmp_path):
        """Test malformed JSON raises ConfigError."""
        path = tmp_path / "config.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config_file(str(path))

    def test_not_an_object(self, tmp_path):
        """Test a JSON list is refused."""
        path = tmp_path / "config.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_config_file(str(path))

    def test_unknown_keys(self, tmp_path):
        """Test unknown keys are reported by name."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"seed": 1, "colour": "red"}), encoding="utf-8")
        with pytest.raises(ConfigError, match="colour"):
            load_config_file(str(path))
