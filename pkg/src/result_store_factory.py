"""
Factory function for creating result stores.

Selects the appropriate storage backend based on environment variable.
"""
import os
from typing import Optional

from src.local_disk_result_store import LocalDiskResultStore
from src.result_store import ResultStore
from src.tigris_result_store import TigrisResultStore


def create_result_store(results_dir: str = "results", storage_type: Optional[str] = None) -> ResultStore:
    """
    Create a result store instance based on configuration.

    Args:
        results_dir: Directory for local storage (only used for local implementation)
        storage_type: Backend name; defaults to RESULT_STORAGE_TYPE

    Returns:
        ResultStore instance (LocalDiskResultStore or TigrisResultStore)

    Environment Variables:
        RESULT_STORAGE_TYPE: Storage backend ('local' or 'tigris', default: 'local')
        AWS_ACCESS_KEY_ID: Required for Tigris storage
        AWS_SECRET_ACCESS_KEY: Required for Tigris storage
        TIGRIS_BUCKET_NAME: Required for Tigris storage
    """
    storage_type = (storage_type or os.getenv("RESULT_STORAGE_TYPE", "local")).lower()

    if storage_type == "tigris":
        return TigrisResultStore()

    # Default to local for any other value (including "local", "", None, etc.)
    return LocalDiskResultStore(results_dir=results_dir)
