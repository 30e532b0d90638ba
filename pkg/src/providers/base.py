"""
BaseEmbeddingProvider / BaseGenerationProvider - abstract provider interfaces.

Concrete back-ends implement ``_embed`` or ``_generate``; the public methods
own validation, caching, call counting and error wrapping so that every
back-end behaves the same way towards the rest of the library.
"""

import logging
import threading
from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.core.exceptions import (
    DimensionMismatch,
    EmptyCompletion,
    PreconditionError,
    ProviderError,
    ProviderUnavailable,
)
from src.models import Embedding, EmbeddingProviderConfig, GenerationProviderConfig
from .cache import EmbeddingCache

logger = logging.getLogger(__name__)


class BaseEmbeddingProvider(ABC):
    """
    Abstract base class for embedding back-ends.

    ``stats['texts_embedded']`` counts texts sent to the back-end (cache hits
    excluded); ``stats['cache_hits']`` counts texts served from the cache.
    """

    def __init__(self, config: EmbeddingProviderConfig, cache: Optional[EmbeddingCache] = None):
        self.config = config
        self.cache = cache
        if self.cache is None and config.cache_path:
            self.cache = EmbeddingCache(config.cache_path)
        self.stats = {"texts_embedded": 0, "cache_hits": 0, "batches": 0}
        self._lock = threading.Lock()
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    @property
    def fingerprint(self) -> str:
        return self.config.fingerprint

    def embed(self, texts: Sequence[str]) -> List[Embedding]:
        """
        Embed texts, one Embedding per text in input order.

        Args:
            texts: Non-empty list of strings

        Returns:
            List[Embedding]: Vectors of dimension ``config.dim``

        Raises:
            PreconditionError: Empty input
            ProviderUnavailable: Back-end unreachable after bounded retries
            DimensionMismatch: Back-end returned vectors of another size
        """
        texts = list(texts)
        if not texts:
            raise PreconditionError("embed_batch needs at least one text")

        cached: Dict[str, List[float]] = {}
        if self.cache is not None:
            cached = self.cache.get_many(self.fingerprint, texts)
        missing = list(dict.fromkeys(text for text in texts if text not in cached))

        fresh: Dict[str, List[float]] = {}
        if missing:
            try:
                vectors = self._embed(missing)
            except ProviderError:
                raise
            except Exception as e:
                self.logger.error(f"Unexpected error from {self.__class__.__name__}: {e}", exc_info=True)
                raise ProviderUnavailable(f"embedding failed: {e}") from e
            if len(vectors) != len(missing):
                raise ProviderUnavailable(f"back-end returned {len(vectors)} vectors for {len(missing)} texts")
            for text, vector in zip(missing, vectors):
                if len(vector) != self.config.dim:
                    raise DimensionMismatch(f"expected dim {self.config.dim}, got {len(vector)}")
                fresh[text] = [float(x) for x in vector]
            if self.cache is not None:
                self.cache.put_many(self.fingerprint, fresh)

        with self._lock:
            self.stats["texts_embedded"] += len(missing)
            self.stats["cache_hits"] += len(texts) - len(missing)
        self.logger.debug(f"Embedded {len(missing)} texts, {len(texts) - len(missing)} served from cache")

        return [Embedding.from_vector(cached[text] if text in cached else fresh[text]) for text in texts]

    @abstractmethod
    def _embed(self, texts: List[str]) -> List[Sequence[float]]:
        """Embed unique, uncached texts. Must be thread-safe."""
        pass


class BaseGenerationProvider(ABC):
    """
    Abstract base class for text generation back-ends.

    ``stats['calls']`` counts back-end invocations, retries of blank
    completions included.
    """

    def __init__(self, config: GenerationProviderConfig):
        self.config = config
        self.stats = {"calls": 0, "blank_completions": 0}
        self._lock = threading.Lock()
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    @property
    def fingerprint(self) -> str:
        return self.config.fingerprint

    def generate(self, prompt: str, system: Optional[str] = None, choices: Optional[Sequence[str]] = None) -> str:
        """
        Generate a completion for a prompt.

        Args:
            prompt: User message
            system: Optional system message
            choices: Candidate labels of a classification prompt, if any

        Returns:
            str: Non-empty completion

        Raises:
            EmptyCompletion: Empty prompt, or a blank completion twice in a row
            ProviderUnavailable: Back-end unreachable after bounded retries
        """
        if not prompt or not prompt.strip():
            raise EmptyCompletion("prompt is empty")

        for attempt in (1, 2):
            with self._lock:
                self.stats["calls"] += 1
            try:
                output = self._generate(prompt, system, list(choices) if choices else None)
            except ProviderError:
                raise
            except Exception as e:
                self.logger.error(f"Unexpected error from {self.__class__.__name__}: {e}", exc_info=True)
                raise ProviderUnavailable(f"generation failed: {e}") from e
            if output and output.strip():
                return output.strip()
            with self._lock:
                self.stats["blank_completions"] += 1
            self.logger.warning(f"Blank completion on attempt {attempt}")
        raise EmptyCompletion("provider returned a blank completion twice")

    @abstractmethod
    def _generate(self, prompt: str, system: Optional[str], choices: Optional[List[str]]) -> str:
        pass


def l2_normalize(vector: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(vector)
    return vector / norm if norm > 0 else vector
