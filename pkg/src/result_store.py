"""
Abstract interface for storing run outputs (tables, reports, samples).
"""
from abc import ABC, abstractmethod
from typing import Optional


class ResultStore(ABC):
    """Abstract base class for result storage backends."""

    @abstractmethod
    def save_text(self, key: str, text: str) -> None:
        """
        Store text under a key such as 'tables/erss.csv'.

        Args:
            key: Relative key (forward slashes)
            text: Content
        """

    @abstractmethod
    def load_text(self, key: str) -> Optional[str]:
        """
        Load text stored under a key.

        Returns:
            Stored text, or None if the key does not exist
        """

    @abstractmethod
    def exists(self, key: str) -> bool:
        """Check whether a key is present."""

    @abstractmethod
    def describe(self, key: str) -> str:
        """Human readable location of a key (path or s3 URL), used in log messages."""
