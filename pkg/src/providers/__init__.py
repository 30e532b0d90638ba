"""
Embedding and generation providers.

Mocks are deterministic and offline; remote providers talk to
OpenAI-compatible endpoints (MEMWEAVER_EMBED_URL, MEMWEAVER_LLM_URL,
MEMWEAVER_API_KEY).
"""

from .base import BaseEmbeddingProvider, BaseGenerationProvider
from .cache import EmbeddingCache
from .embedding import MockHashEmbedder, RemoteEmbedder, create_embedding_provider, embed_batch
from .generation import MockExtractiveGenerator, RemoteGenerator, create_generation_provider, generate
from .http import OpenAICompatibleClient
from .text import content_tokens, estimate_tokens, tokenize

__all__ = [
    'BaseEmbeddingProvider',
    'BaseGenerationProvider',
    'EmbeddingCache',
    'MockHashEmbedder',
    'RemoteEmbedder',
    'create_embedding_provider',
    'embed_batch',
    'MockExtractiveGenerator',
    'RemoteGenerator',
    'create_generation_provider',
    'generate',
    'OpenAICompatibleClient',
    'content_tokens',
    'estimate_tokens',
    'tokenize',
]
