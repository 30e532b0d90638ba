"""
Repository classes for the cache tables.

Repositories wrap a session owned by the caller; committing is the
responsibility of ``get_db_session``.
"""

from typing import Dict, Generic, Iterable, List, Type, TypeVar

from sqlalchemy import delete, func, select
from sqlalchemy.orm import Session

from .models import Base, EmbeddingCacheEntry

T = TypeVar('T', bound=Base)


class BaseRepository(Generic[T]):
    """Base repository class for string-keyed models."""

    def __init__(self, session: Session, model_class: Type[T]):
        self.session = session
        self.model_class = model_class

    def merge(self, **kwargs) -> T:
        """Insert the record or overwrite the row with the same primary key."""
        instance = self.session.merge(self.model_class(**kwargs))
        self.session.flush()
        return instance

    def count(self) -> int:
        return self.session.execute(select(func.count()).select_from(self.model_class)).scalar_one()


class EmbeddingCacheRepository(BaseRepository[EmbeddingCacheEntry]):
    """Repository for cached embedding vectors."""

    def __init__(self, session: Session):
        super().__init__(session, EmbeddingCacheEntry)

    def get_many(self, keys: Iterable[str]) -> Dict[str, EmbeddingCacheEntry]:
        keys = list(dict.fromkeys(keys))
        if not keys:
            return {}
        rows = self.session.execute(
            select(EmbeddingCacheEntry).where(EmbeddingCacheEntry.cache_key.in_(keys))
        ).scalars()
        return {row.cache_key: row for row in rows}

    def count_by_fingerprint(self, fingerprint: str) -> int:
        return self.session.execute(
            select(func.count()).select_from(EmbeddingCacheEntry)
            .where(EmbeddingCacheEntry.fingerprint == fingerprint)
        ).scalar_one()

    def delete_fingerprint(self, fingerprint: str) -> int:
        result = self.session.execute(
            delete(EmbeddingCacheEntry).where(EmbeddingCacheEntry.fingerprint == fingerprint)
        )
        return result.rowcount

    def list_fingerprints(self) -> List[str]:
        return list(self.session.execute(select(EmbeddingCacheEntry.fingerprint).distinct()).scalars())
