"""
Tigris/S3-compatible implementation of the result store.
"""
import logging
from typing import Optional

from botocore.exceptions import ClientError

from src.base_result_store import BaseTigrisStore
from src.result_store import ResultStore

logger = logging.getLogger(__name__)

_CONTENT_TYPES = {
    "json": "application/json",
    "csv": "text/csv",
}


class TigrisResultStore(BaseTigrisStore, ResultStore):
    """Result store that uses Tigris/S3-compatible object storage."""

    def save_text(self, key: str, text: str) -> None:
        extension = key.rsplit(".", 1)[-1].lower()
        self.s3_client.put_object(
            Bucket=self.bucket_name,
            Key=self._get_object_key(key),
            Body=text.encode('utf-8'),
            ContentType=_CONTENT_TYPES.get(extension, 'text/plain'),
            CacheControl='no-cache, no-store, must-revalidate'
        )
        logger.info("Uploaded %s", self.describe(key))

    def load_text(self, key: str) -> Optional[str]:
        try:
            response = self.s3_client.get_object(
                Bucket=self.bucket_name,
                Key=self._get_object_key(key)
            )
            return response['Body'].read().decode('utf-8')
        except ClientError as e:
            if e.response['Error']['Code'] == 'NoSuchKey':
                return None
            raise

    def exists(self, key: str) -> bool:
        try:
            self.s3_client.head_object(Bucket=self.bucket_name, Key=self._get_object_key(key))
            return True
        except ClientError as e:
            if e.response['Error']['Code'] in ('404', 'NoSuchKey', 'NotFound'):
                return False
            raise

    def describe(self, key: str) -> str:
        return f"s3://{self.bucket_name}/{self._get_object_key(key)}"
