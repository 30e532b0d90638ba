"""
Database module backing the embedding cache.

This module provides the SQLAlchemy models, repositories and connection
utilities of the SQLite embedding cache.
"""

from .models import Base, EmbeddingCacheEntry
from .repositories import BaseRepository, EmbeddingCacheRepository
from .connection import (
    setup_database_engine,
    get_db_session,
    close_database,
)

__all__ = [
    # Models
    'Base',
    'EmbeddingCacheEntry',

    # Repositories
    'BaseRepository',
    'EmbeddingCacheRepository',

    # Connection utilities
    'setup_database_engine',
    'get_db_session',
    'close_database',
]
