from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class CacheConfig(BaseSettings):
    """
    Configuration settings for the embedding cache
    """
    EMBED_CACHE_PATH: Optional[str] = Field(
        description="SQLite file used to cache embeddings; unset disables the cache",
        default=None,
    )


class DataConfig(CacheConfig):
    pass
