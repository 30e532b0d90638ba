"""
Transition scoring of the context-aware walk.

score(u -> v) = clamp(cos(e_q, e_v), cos_floor, 1) ** alpha
                * exp(-lambda1 * recency_gap(v))
                * exp(-lambda2 * |seq(u) - seq(v)|)
"""

import math
from typing import Sequence

import numpy as np

from src.core.exceptions import PreconditionError
from src.models import GraphNode, Query, RecencyUnit, WalkConfig

SECONDS_PER_DAY = 86400


def clamp_similarity(similarity: float, cfg: WalkConfig) -> float:
    return min(max(similarity, cfg.cos_floor), 1.0)


def query_score(similarity: float, recency_gap: float, cfg: WalkConfig) -> float:
    """Continuity-free score used to pick the start node."""
    return clamp_similarity(similarity, cfg) ** cfg.alpha * math.exp(-cfg.lambda1 * recency_gap)


def transition_score(similarity: float, recency_gap: float, sequence_gap: float, cfg: WalkConfig) -> float:
    """
    Score of moving to a neighbour.

    Args:
        similarity: Cosine similarity between the query and the candidate
        recency_gap: Distance of the candidate from the query time, in cfg.recency_unit
        sequence_gap: |seq_index(from) - seq_index(to)|
        cfg: Walk configuration

    Returns:
        float: Non-negative score; 1.0 for every neighbour when uniform_scores is on
    """
    if cfg.uniform_scores:
        return 1.0
    return query_score(similarity, recency_gap, cfg) * math.exp(-cfg.lambda2 * sequence_gap)


def recency_gaps(nodes: Sequence[GraphNode], query: Query, cfg: WalkConfig) -> np.ndarray:
    """
    Recency gap of every node.

    rank: behaviors elapsed since the node (N-1-seq_index); seconds / days:
    query.issued_at minus the node timestamp.

    Raises:
        PreconditionError: Wall-clock units with a query issued before a node
    """
    n = len(nodes)
    if cfg.recency_unit is RecencyUnit.RANK:
        return np.array([n - 1 - node.seq_index for node in nodes], dtype=np.float64)
    newest = max((node.timestamp for node in nodes), default=query.issued_at)
    if query.issued_at < newest:
        raise PreconditionError(
            f"query issued_at {query.issued_at} precedes the newest behavior ({newest}); "
            f"use recency_unit=rank or a later issued_at"
        )
    gaps = np.array([query.issued_at - node.timestamp for node in nodes], dtype=np.float64)
    if cfg.recency_unit is RecencyUnit.DAYS:
        gaps = gaps / SECONDS_PER_DAY
    return gaps


def cosine_similarities(unit_matrix: np.ndarray, query_vector: Sequence[float]) -> np.ndarray:
    """Cosine of every (already L2-normalized) row with the query vector."""
    q = np.asarray(query_vector, dtype=np.float64)
    norm = np.linalg.norm(q)
    if norm == 0:
        return np.zeros(len(unit_matrix))
    return unit_matrix @ (q / norm)
