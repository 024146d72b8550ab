"""
File utility functions for the GWE toolkit.
Common file and formatting operations to avoid code duplication.
"""
import csv
import hashlib
import io
import json
import math
import os
from datetime import datetime, timezone
from typing import Any, Dict, Iterable, Sequence


def load_json_file(filepath: str, default: Dict[str, Any]) -> Dict[str, Any]:
    """
    Load a JSON file with a default fallback.

    Args:
        filepath: Path to the JSON file
        default: Default value if file doesn't exist

    Returns:
        Loaded JSON data or default value
    """
    if os.path.exists(filepath):
        with open(filepath, 'r', encoding='utf-8') as f:
            return json.load(f)
    return default


def save_text_file(filepath: str, text: str, ensure_dir: bool = True) -> None:
    """
    Save text to a file, byte for byte (no newline translation).

    Args:
        filepath: Destination path
        text: Content
        ensure_dir: Whether to create the parent directory if it doesn't exist
    """
    directory = os.path.dirname(filepath)
    if ensure_dir and directory:
        os.makedirs(directory, exist_ok=True)
    with open(filepath, 'w', encoding='utf-8', newline='') as f:
        f.write(text)


def format_number(value: Any) -> str:
    """Format a float with 17 significant digits; other values via str()."""
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"
    return str(value)


def to_csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """
    Render rows as CSV text with '.' decimals and 17 significant digits.

    Args:
        header: Column names
        rows: Row values

    Returns:
        CSV text with '\\n' line endings
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def to_json_text(data: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=True) + "\n"


def sha256_hex(text: str) -> str:
    """SHA-256 digest of the UTF-8 encoded text."""
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def get_utc_timestamp() -> str:
    """
    Get current UTC timestamp in ISO format.

    Returns:
        ISO formatted timestamp string without +00:00 suffix
    """
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")
