"""
Embedding cache - SQLite-backed store of vectors keyed by (fingerprint, text).

Reads go straight to the database; writes are serialized by a process-level
lock (single writer, multiple readers).
"""

import hashlib
import json
import logging
import threading
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from sqlalchemy.exc import SQLAlchemyError

from src.core.exceptions import StoreIOError
from src.database import EmbeddingCacheRepository, close_database, get_db_session, setup_database_engine


def text_hash(text: str) -> str:
    return hashlib.blake2b(text.encode("utf-8"), digest_size=32).hexdigest()


def cache_key(fingerprint: str, text: str) -> str:
    return hashlib.blake2b(f"{fingerprint}\x00{text}".encode("utf-8"), digest_size=32).hexdigest()


class EmbeddingCache:
    """Cache of embedding vectors for one SQLite file."""

    _write_lock = threading.Lock()

    def __init__(self, path: str, echo: bool = False):
        self.path = str(path)
        self.database_url = f"sqlite:///{self.path}"
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        try:
            Path(self.path).parent.mkdir(parents=True, exist_ok=True)
            setup_database_engine(self.database_url, echo=echo)
        except (OSError, SQLAlchemyError) as e:
            raise StoreIOError(f"cannot open embedding cache {self.path}: {e}") from e

    def get_many(self, fingerprint: str, texts: Sequence[str]) -> Dict[str, List[float]]:
        """Return the cached vectors of the given texts; misses are absent from the result."""
        keys = {cache_key(fingerprint, text): text for text in texts}
        try:
            with get_db_session(self.database_url) as session:
                rows = EmbeddingCacheRepository(session).get_many(keys)
                found = {keys[key]: json.loads(row.vector_json) for key, row in rows.items()}
        except SQLAlchemyError as e:
            raise StoreIOError(f"embedding cache read failed: {e}") from e
        self.logger.debug(f"Cache lookup: {len(found)}/{len(keys)} hits for {fingerprint}")
        return found

    def put_many(self, fingerprint: str, vectors: Dict[str, Sequence[float]]) -> None:
        if not vectors:
            return
        with self._write_lock:
            try:
                with get_db_session(self.database_url) as session:
                    repository = EmbeddingCacheRepository(session)
                    for text, vector in vectors.items():
                        repository.merge(
                            cache_key=cache_key(fingerprint, text),
                            fingerprint=fingerprint,
                            text_hash=text_hash(text),
                            vector_json=json.dumps([float(x) for x in vector]),
                        )
            except SQLAlchemyError as e:
                raise StoreIOError(f"embedding cache write failed: {e}") from e
        self.logger.debug(f"Cached {len(vectors)} vectors for {fingerprint}")

    def count(self, fingerprint: Optional[str] = None) -> int:
        with get_db_session(self.database_url) as session:
            repository = EmbeddingCacheRepository(session)
            return repository.count_by_fingerprint(fingerprint) if fingerprint else repository.count()

    def close(self) -> None:
        close_database(self.database_url)

    def fingerprints(self) -> List[str]:
        with get_db_session(self.database_url) as session:
            return sorted(EmbeddingCacheRepository(session).list_fingerprints())

    def clear(self, fingerprint: str) -> int:
        """Drop every vector of one embedder; returns the number of rows removed."""
        with self._write_lock:
            try:
                with get_db_session(self.database_url) as session:
                    removed = EmbeddingCacheRepository(session).delete_fingerprint(fingerprint)
            except SQLAlchemyError as e:
                raise StoreIOError(f"embedding cache write failed: {e}") from e
        self.logger.info(f"Removed {removed} cached vectors for {fingerprint}")
        return removed
