"""
Heuristic behavioral-memory selectors used as retrieval baselines.

Each returns a BehavioralMemory with an empty step log; ``visited`` is in
chronological order.
"""

from typing import Sequence

import numpy as np

from src.graph.kmeans import as_matrix, normalize_rows
from src.models import BehavioralMemory, Embedding, RetrieverKind, UserHistory
from .scoring import cosine_similarities


def _memory(query_id: str, history: UserHistory, indices, retriever: RetrieverKind, seed=None) -> BehavioralMemory:
    return BehavioralMemory(
        query_id=query_id,
        visited=[history.records[i].behavior_id for i in sorted(indices)],
        retriever=retriever,
        seed=seed,
    )


def select_random(history: UserHistory, k: int, seed: int, query_id: str = "") -> BehavioralMemory:
    """k records drawn uniformly without replacement."""
    count = min(k, len(history))
    indices = np.random.default_rng(seed).choice(len(history), size=count, replace=False) if count else []
    return _memory(query_id, history, [int(i) for i in indices], RetrieverKind.RANDOM, seed)


def select_recent(history: UserHistory, k: int, query_id: str = "") -> BehavioralMemory:
    """The k most recent records."""
    n = len(history)
    return _memory(query_id, history, range(max(0, n - k), n), RetrieverKind.RECENCY)


def select_dense(
    history: UserHistory,
    embeddings: Sequence[Embedding],
    query_embedding: Embedding,
    k: int,
    query_id: str = "",
) -> BehavioralMemory:
    """The k records most cosine-similar to the query (ties to the more recent record)."""
    if not len(history):
        return _memory(query_id, history, [], RetrieverKind.DENSE)
    similarities = cosine_similarities(normalize_rows(as_matrix(embeddings)), query_embedding.vector)
    order = sorted(range(len(history)), key=lambda i: (-similarities[i], -i))
    return _memory(query_id, history, order[:k], RetrieverKind.DENSE)
