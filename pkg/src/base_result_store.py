"""
Base classes for result stores (local disk and Tigris/S3).

Provides the connection and path handling shared by the concrete stores.
"""
import os
from typing import Optional

try:
    import boto3
    from botocore.exceptions import ClientError
    BOTO3_AVAILABLE = True
except ImportError:
    boto3 = None
    ClientError = None
    BOTO3_AVAILABLE = False

from src.errors import ConfigError


class BaseLocalDiskStore:
    """
    Base class for local disk result storage.

    Keys map to files below results_dir.
    """

    def __init__(self, results_dir: str = "results"):
        """
        Initialize local disk store.

        Args:
            results_dir: Directory for result files (default: "results")
        """
        self.results_dir = results_dir
        os.makedirs(self.results_dir, exist_ok=True)

    def _get_filepath(self, key: str) -> str:
        """
        Get the full file path for a key.

        Raises:
            ConfigError: If the key escapes results_dir
        """
        parts = [p for p in key.split("/") if p]
        if not parts or any(p == ".." for p in parts):
            raise ConfigError(f"Invalid result key: {key!r}")
        return os.path.join(self.results_dir, *parts)


class BaseTigrisStore:
    """
    Base class for Tigris/S3-compatible result storage.
    """

    def __init__(
        self,
        access_key_id: Optional[str] = None,
        secret_access_key: Optional[str] = None,
        endpoint_url: Optional[str] = None,
        bucket_name: Optional[str] = None,
        region: Optional[str] = None,
        prefix: str = "results"
    ):
        """
        Initialize Tigris store.

        Args:
            access_key_id: AWS access key ID (defaults to AWS_ACCESS_KEY_ID env var)
            secret_access_key: AWS secret access key (defaults to AWS_SECRET_ACCESS_KEY env var)
            endpoint_url: S3 endpoint URL (defaults to AWS_ENDPOINT_URL_S3 or
                         https://fly.storage.tigris.dev)
            bucket_name: S3 bucket name (defaults to TIGRIS_BUCKET_NAME env var)
            region: AWS region (defaults to AWS_REGION or 'auto')
            prefix: Key prefix inside the bucket
        """
        if not BOTO3_AVAILABLE:
            raise ImportError(
                "boto3 is required for Tigris result storage. "
                "Install it with: pip install boto3"
            )

        self.access_key_id = access_key_id or os.getenv('AWS_ACCESS_KEY_ID')
        self.secret_access_key = secret_access_key or os.getenv('AWS_SECRET_ACCESS_KEY')
        self.endpoint_url = (
            endpoint_url or
            os.getenv('AWS_ENDPOINT_URL_S3', 'https://fly.storage.tigris.dev')
        )
        self.bucket_name = bucket_name or os.getenv('TIGRIS_BUCKET_NAME')
        self.region = region or os.getenv('AWS_REGION', 'auto')
        self.prefix = prefix.strip("/")

        if not self.access_key_id or not self.secret_access_key:
            raise ConfigError(
                "AWS credentials are required. Set AWS_ACCESS_KEY_ID and "
                "AWS_SECRET_ACCESS_KEY environment variables or pass them as parameters."
            )
        if not self.bucket_name:
            raise ConfigError(
                "Bucket name is required. Set TIGRIS_BUCKET_NAME environment variable "
                "or pass it as a parameter."
            )

        self.s3_client = boto3.client(
            's3',
            aws_access_key_id=self.access_key_id,
            aws_secret_access_key=self.secret_access_key,
            endpoint_url=self.endpoint_url,
            region_name=self.region
        )

    def _get_object_key(self, key: str) -> str:
        """Object key for a result key."""
        key = key.strip("/")
        return f"{self.prefix}/{key}" if self.prefix else key
