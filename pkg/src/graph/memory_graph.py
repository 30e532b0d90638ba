"""
Memory graph construction and incremental updates.

Nodes are behaviors in chronological order. Temporal edges join consecutive
behaviors; semantic edges join behaviors of the same K-means cluster within
the same batch. An edge may carry both labels and is then stored in both sets.
"""

import logging
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.core.exceptions import AlignmentError, FingerprintMismatch, StaleBatchError
from src.models import BehaviorRecord, ClusterAssignment, Embedding, GraphNode, MemoryGraph, UserHistory
from .kmeans import as_matrix, cluster_behaviors, normalize_rows

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def semantic_edges_for_batch(
    seq_indices: Sequence[int],
    labels: Sequence[int],
    vectors: np.ndarray,
    semantic_cap: Optional[int] = None,
) -> Set[Edge]:
    """
    Within-cluster edges for one batch.

    Without a cap every cluster becomes a clique. With a cap m, each node keeps
    edges to its m most cosine-similar cluster mates (ties to the earlier node)
    and the union of those choices is returned.
    """
    groups: Dict[int, List[int]] = {}
    for position, label in enumerate(labels):
        groups.setdefault(label, []).append(position)

    edges: Set[Edge] = set()
    if semantic_cap is None:
        for members in groups.values():
            for a, b in combinations(members, 2):
                edges.add((seq_indices[a], seq_indices[b]))
        return edges

    unit = normalize_rows(vectors)
    for members in groups.values():
        for a in members:
            mates = [b for b in members if b != a]
            mates.sort(key=lambda b: (-float(unit[a] @ unit[b]), b))
            for b in mates[:semantic_cap]:
                u, v = seq_indices[a], seq_indices[b]
                edges.add((min(u, v), max(u, v)))
    return edges


def _check_alignment(records: Sequence[BehaviorRecord], embeddings: Sequence[Embedding]) -> None:
    if len(records) != len(embeddings):
        raise AlignmentError(f"{len(embeddings)} embeddings for {len(records)} records")


def _batch_nodes(
    records: Sequence[BehaviorRecord],
    start: int,
    batch_id: int,
    assignment: ClusterAssignment,
) -> List[GraphNode]:
    return [
        GraphNode(
            behavior_id=record.behavior_id,
            seq_index=start + position,
            timestamp=record.timestamp,
            cluster=assignment.labels[position],
            batch_id=batch_id,
        )
        for position, record in enumerate(records)
    ]


def build_graph(
    history: UserHistory,
    embeddings: Sequence[Embedding],
    k: int,
    seed: int,
    semantic_cap: Optional[int] = None,
) -> MemoryGraph:
    """
    Build the memory graph of a history as batch 0.

    Args:
        history: Chronological user history
        embeddings: One embedding per record, aligned with history.records
        k: Requested number of clusters
        seed: K-means seed
        semantic_cap: Optional per-node cap on semantic edges

    Returns:
        MemoryGraph: N nodes, N-1 temporal edges and within-cluster semantic edges

    Raises:
        AlignmentError: Embedding count differs from record count
    """
    records = history.records
    _check_alignment(records, embeddings)
    if not records:
        return MemoryGraph()

    assignment = cluster_behaviors(embeddings, k, seed)
    seq_indices = list(range(len(records)))
    graph = MemoryGraph(
        nodes=_batch_nodes(records, 0, 0, assignment),
        temporal_edges=[(i, i + 1) for i in range(len(records) - 1)],
        semantic_edges=semantic_edges_for_batch(seq_indices, assignment.labels, as_matrix(embeddings), semantic_cap),
        batch_boundaries=[(0, 0)],
        assignments=[assignment],
    )
    logger.info(
        f"Built graph: {len(graph.nodes)} nodes, {len(graph.temporal_edges)} temporal and "
        f"{len(graph.semantic_edges)} semantic edges, k={assignment.k}"
    )
    return graph


def incremental_update(
    graph: MemoryGraph,
    new_records: Sequence[BehaviorRecord],
    new_embeddings: Sequence[Embedding],
    k: int,
    seed: int,
    semantic_cap: Optional[int] = None,
    fingerprint: Optional[str] = None,
    graph_fingerprint: Optional[str] = None,
) -> MemoryGraph:
    """
    Splice a batch of newer behaviors into an existing graph.

    Existing nodes and edges are kept as they are. The new batch is clustered on
    its own (k_new = min(k, batch size)), gets its own temporal chain and
    within-batch semantic edges, and is linked to the graph by one temporal edge
    from the last existing node to the first new one.

    Raises:
        AlignmentError: Embedding count differs from record count
        StaleBatchError: A new record is not strictly newer than every existing node
        FingerprintMismatch: The batch was embedded by another provider or in another dimension
    """
    _check_alignment(new_records, new_embeddings)
    if not new_records:
        return graph
    if fingerprint is not None and graph_fingerprint is not None and fingerprint != graph_fingerprint:
        raise FingerprintMismatch(f"batch embedded with '{fingerprint}', graph built with '{graph_fingerprint}'")
    if graph.assignments and graph.assignments[-1].centroids:
        old_dim = len(graph.assignments[-1].centroids[0])
        if any(e.dim != old_dim for e in new_embeddings):
            raise FingerprintMismatch(f"batch embedding dimension differs from the graph's ({old_dim})")

    ordered = sorted(zip(new_records, new_embeddings), key=lambda pair: pair[0].sort_key())
    records = [record for record, _ in ordered]
    embeddings = [embedding for _, embedding in ordered]

    if graph.nodes:
        newest = max(node.timestamp for node in graph.nodes)
        stale = [record.behavior_id for record in records if record.timestamp <= newest]
        if stale:
            raise StaleBatchError(
                f"{len(stale)} record(s) not newer than the store's latest timestamp {newest}: {', '.join(stale[:5])}"
            )
        known = {node.behavior_id for node in graph.nodes}
        duplicates = [record.behavior_id for record in records if record.behavior_id in known]
        if duplicates:
            raise StaleBatchError(f"behavior ids already in the graph: {', '.join(duplicates[:5])}")

    start = len(graph.nodes)
    batch_id = graph.next_batch_id
    assignment = cluster_behaviors(embeddings, min(k, len(records)), seed)
    seq_indices = list(range(start, start + len(records)))

    temporal = list(graph.temporal_edges)
    if start > 0:
        temporal.append((start - 1, start))
    temporal += [(i, i + 1) for i in seq_indices[:-1]]
    semantic = set(graph.semantic_edges) | semantic_edges_for_batch(
        seq_indices, assignment.labels, as_matrix(embeddings), semantic_cap
    )

    updated = MemoryGraph(
        nodes=list(graph.nodes) + _batch_nodes(records, start, batch_id, assignment),
        temporal_edges=temporal,
        semantic_edges=semantic,
        batch_boundaries=list(graph.batch_boundaries) + [(batch_id, start)],
        assignments=list(graph.assignments) + [assignment],
    )
    logger.info(f"Spliced batch {batch_id}: {len(records)} nodes, k={assignment.k}")
    return updated


def edge_census(graph: MemoryGraph) -> Dict[str, int]:
    """Partition the edge set by label: temporal-only, semantic-only and both."""
    temporal, semantic = graph.temporal_set, graph.semantic_set
    return {
        "temporal-only": len(temporal - semantic),
        "semantic-only": len(semantic - temporal),
        "both": len(temporal & semantic),
    }
