"""
Unit tests for file utility functions.
"""
import hashlib
import json

from src.file_utils import (
    format_number,
    get_utc_timestamp,
    load_json_file,
    save_text_file,
    sha256_hex,
    to_csv_text,
    to_json_text,
)


class TestLoadJsonFile:
    """Test suite for load_json_file."""

    def test_existing_file(self, tmp_path):
        """Test loading an existing JSON file."""
        path = tmp_path / "data.json"
        path.write_text(json.dumps({"x": [0, 1]}), encoding="utf-8")
        assert load_json_file(str(path), {}) == {"x": [0, 1]}

    def test_missing_file_returns_default(self, tmp_path):
        """Test the default is returned for a missing file."""
        assert load_json_file(str(tmp_path / "nope.json"), {"default": True}) == {"default": True}


class TestSaveTextFile:
    """Test suite for save_text_file."""

    def test_creates_directory(self, tmp_path):
        """Test parent directories are created."""
        path = tmp_path / "a" / "b" / "out.csv"
        save_text_file(str(path), "x\n1\n")
        assert path.read_text(encoding="utf-8") == "x\n1\n"

    def test_no_newline_translation(self, tmp_path):
        """Test bytes are written exactly."""
        path = tmp_path / "out.txt"
        save_text_file(str(path), "a\nb\n")
        assert path.read_bytes() == b"a\nb\n"


class TestFormatting:
    """Test suite for number and table formatting."""

    def test_format_number(self):
        """Test 17 significant digits and special values."""
        assert format_number(0.1) == "0.10000000000000001"
        assert format_number(float("inf")) == "inf"
        assert format_number(float("-inf")) == "-inf"
        assert format_number(float("nan")) == "nan"
        assert format_number(True) == "true"
        assert format_number(None) == ""
        assert format_number(3) == "3"

    def test_to_csv_text(self):
        """Test header, rows and line endings."""
        text = to_csv_text(["family", "value"], [("power", -0.25), ("pareto", None)])
        assert text == "family,value\npower,-0.25\npareto,\n"

    def test_to_json_text_is_deterministic(self):
        """Test sorted keys and a trailing newline."""
        assert to_json_text({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'


class TestDigestAndTime:
    """Test suite for hashing and timestamps."""

    def test_sha256_hex(self):
        """Test the digest matches hashlib."""
        assert sha256_hex("abc") == hashlib.sha256(b"abc").hexdigest()

    def test_utc_timestamp(self):
        """Test the timestamp uses a Z suffix."""
        stamp = get_utc_timestamp()
        assert stamp.endswith("Z")
        assert "+00:00" not in stamp
