"""
Local disk implementation of the result store.
"""
import logging
import os
from typing import Optional

from src.base_result_store import BaseLocalDiskStore
from src.file_utils import save_text_file
from src.result_store import ResultStore

logger = logging.getLogger(__name__)


class LocalDiskResultStore(BaseLocalDiskStore, ResultStore):
    """Result store that writes files below a local directory."""

    def save_text(self, key: str, text: str) -> None:
        path = self._get_filepath(key)
        save_text_file(path, text)
        logger.info("Wrote %s", path)

    def load_text(self, key: str) -> Optional[str]:
        path = self._get_filepath(key)
        if not os.path.exists(path):
            return None
        with open(path, 'r', encoding='utf-8', newline='') as f:
            return f.read()

    def exists(self, key: str) -> bool:
        return os.path.exists(self._get_filepath(key))

    def describe(self, key: str) -> str:
        return self._get_filepath(key)
