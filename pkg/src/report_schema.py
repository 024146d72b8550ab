"""
Versioned JSON report format.

Every JSON report is converted to plain JSON types and validated against
schemas/report_v1.json before it is written.
"""
import logging
import math
import os
from typing import Any, Dict, List, Optional

import jsonschema
import numpy as np

from src.errors import ReportValidationError
from src.file_utils import get_utc_timestamp, load_json_file

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "v1"
SCHEMA_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                           "schemas", f"report_{SCHEMA_VERSION}.json")

_schema_cache: Dict[str, Any] = {}


def load_schema(path: str = SCHEMA_PATH) -> Dict[str, Any]:
    """Load (once) the report schema."""
    if path not in _schema_cache:
        schema = load_json_file(path, {})
        if not schema:
            raise ReportValidationError(f"Report schema not found: {path}")
        _schema_cache[path] = schema
    return _schema_cache[path]


def _float(value: float) -> Any:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def to_jsonable(value: Any) -> Any:
    """
    Convert nested values to plain JSON types.

    numpy scalars and arrays become Python numbers and lists; non-finite
    floats become the strings 'inf', '-inf' and 'nan'; tuples become lists.
    """
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _float(float(value))
    return value


def validate_report(doc: Dict[str, Any], path: str = SCHEMA_PATH) -> None:
    """
    Validate a report against the versioned schema.

    Raises:
        ReportValidationError: If the document does not match
    """
    try:
        jsonschema.validate(instance=doc, schema=load_schema(path))
    except jsonschema.ValidationError as exc:
        raise ReportValidationError(f"report does not match schema {SCHEMA_VERSION}: {exc.message}") from exc


def build_report(command: str, config: Dict[str, Any], results: List[Dict[str, Any]], passed: bool,
                 failing: Optional[List[str]] = None, counts: Optional[Dict[str, int]] = None,
                 generated_at: Optional[str] = None) -> Dict[str, Any]:
    """
    Assemble and validate a report document.

    Args:
        command: CLI command that produced the report
        config: Serialized RunConfig
        results: Result rows
        passed: Overall status
        failing: Names of failed checks
        counts: Status tallies
        generated_at: Timestamp; the current UTC time when omitted

    Returns:
        JSON-ready report

    Raises:
        ReportValidationError: If the assembled document does not match the schema
    """
    doc: Dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "generated_at": generated_at or get_utc_timestamp(),
        "config": config,
        "status": "pass" if passed else "fail",
        "results": results,
    }
    if failing is not None:
        doc["failing"] = failing
    if counts is not None:
        doc["counts"] = counts
    doc = to_jsonable(doc)
    validate_report(doc)
    return doc
