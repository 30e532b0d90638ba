"""
SQLAlchemy ORM models for the embedding cache.

The cache maps (embedder fingerprint, text) to a stored vector. Keys are
content hashes, so identical texts share one row per fingerprint.
"""

from sqlalchemy import Column, DateTime, Index, String, Text
from sqlalchemy.orm import declarative_base
from sqlalchemy.sql import func

Base = declarative_base()


class EmbeddingCacheEntry(Base):
    """One cached embedding vector, stored as a JSON array of floats."""
    __tablename__ = 'embedding_cache'

    cache_key = Column(String(64), primary_key=True)
    fingerprint = Column(String(255), nullable=False)
    text_hash = Column(String(64), nullable=False)
    vector_json = Column(Text, nullable=False)

    # rewritten vectors keep created_at; updated_at tracks the last merge
    created_at = Column(DateTime(timezone=True), server_default=func.now(), nullable=False)
    updated_at = Column(DateTime(timezone=True), server_default=func.now(), onupdate=func.now(), nullable=False)

    __table_args__ = (
        Index('idx_embedding_cache_fingerprint', 'fingerprint'),
    )
