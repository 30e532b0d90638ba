"""
Embedding providers: the offline hashing mock and the OpenAI-compatible client.
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from src.core.exceptions import DimensionMismatch, ProviderUnavailable
from src.models import Embedding, EmbeddingKind, EmbeddingProviderConfig
from .base import BaseEmbeddingProvider, l2_normalize
from .cache import EmbeddingCache
from .http import OpenAICompatibleClient
from .text import tokenize

UNIGRAM_WEIGHT = 1.0
BIGRAM_WEIGHT = 0.5
TRIGRAM_WEIGHT = 0.3


@lru_cache(maxsize=65536)
def _feature_vector(feature: str, seed: int, dim: int) -> np.ndarray:
    digest = hashlib.blake2b(f"{seed}:{feature}".encode("utf-8"), digest_size=8).digest()
    vector = np.random.default_rng(int.from_bytes(digest, "little")).standard_normal(dim)
    vector.setflags(write=False)
    return vector


def hash_features(text: str) -> List[tuple[str, float]]:
    """Weighted n-gram features: word unigrams, word bigrams and character trigrams."""
    tokens = tokenize(text)
    features = [(f"w:{token}", UNIGRAM_WEIGHT) for token in tokens]
    features += [(f"b:{a} {b}", BIGRAM_WEIGHT) for a, b in zip(tokens, tokens[1:])]
    joined = " ".join(tokens)
    features += [(f"c:{joined[i:i + 3]}", TRIGRAM_WEIGHT) for i in range(len(joined) - 2)]
    return features


class MockHashEmbedder(BaseEmbeddingProvider):
    """
    Deterministic embedder: every n-gram feature of a text maps to a seeded
    Gaussian vector (seed derived from a hash of the feature), the weighted sum is
    L2-normalized. Texts sharing words get correlated vectors.
    """

    def embed_text(self, text: str) -> np.ndarray:
        dim, seed = self.config.dim, self.config.seed
        features = hash_features(text) or [(f"raw:{text}", 1.0)]
        vector = np.zeros(dim)
        for feature, weight in features:
            vector += weight * _feature_vector(feature, seed, dim)
        return l2_normalize(vector)

    def _embed(self, texts: List[str]) -> List[Sequence[float]]:
        return [self.embed_text(text).tolist() for text in texts]


class RemoteEmbedder(BaseEmbeddingProvider):
    """Client of an OpenAI-compatible ``POST /v1/embeddings`` endpoint."""

    def __init__(self, config: EmbeddingProviderConfig, cache: Optional[EmbeddingCache] = None,
                 client: Optional[OpenAICompatibleClient] = None):
        super().__init__(config, cache)
        self.client = client or OpenAICompatibleClient(config.endpoint, config)

    def _request(self, batch: List[str]) -> List[List[float]]:
        response = self.client.post_json("/v1/embeddings", {"model": self.config.model_id, "input": batch})
        data = response.get("data") if isinstance(response, dict) else None
        if not isinstance(data, list) or len(data) != len(batch):
            raise ProviderUnavailable(f"malformed embeddings response for a batch of {len(batch)}")
        if all("index" in item for item in data):
            data = sorted(data, key=lambda item: item["index"])
        vectors = [item["embedding"] for item in data]
        for vector in vectors:
            if len(vector) != self.config.dim:
                raise DimensionMismatch(f"endpoint returned dim {len(vector)}, configured dim is {self.config.dim}")
        with self._lock:
            self.stats["batches"] += 1
        return vectors

    def _embed(self, texts: List[str]) -> List[Sequence[float]]:
        size = self.config.batch_size
        batches = [texts[i:i + size] for i in range(0, len(texts), size)]
        self.logger.debug(f"Embedding {len(texts)} texts in {len(batches)} requests")
        if len(batches) == 1:
            return self._request(batches[0])
        with ThreadPoolExecutor(max_workers=self.config.max_concurrency) as executor:
            results = list(executor.map(self._request, batches))
        return [vector for batch in results for vector in batch]


def create_embedding_provider(cfg: EmbeddingProviderConfig, cache: Optional[EmbeddingCache] = None) -> BaseEmbeddingProvider:
    if cfg.kind is EmbeddingKind.MOCK_HASH:
        return MockHashEmbedder(cfg, cache)
    return RemoteEmbedder(cfg, cache)


def embed_batch(texts: Sequence[str], cfg: EmbeddingProviderConfig) -> List[Embedding]:
    """Embed texts with a provider built from cfg; see BaseEmbeddingProvider.embed."""
    return create_embedding_provider(cfg).embed(texts)
