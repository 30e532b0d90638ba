"""
Memory store persistence and validation.

A store is one JSON document with ``schema_version`` at the top level. Keys are
emitted in sorted order so that saving the same store twice yields the same bytes.
"""

import json
import logging
import math
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Tuple, Union

from pydantic import ValidationError

from src.models import SCHEMA_VERSION, MemoryStore
from .exceptions import ParseError, PreconditionError, SchemaVersionError, StoreIOError

logger = logging.getLogger(__name__)

SUPPORTED_SCHEMA_VERSIONS = frozenset({SCHEMA_VERSION})


def store_to_json(store: MemoryStore) -> str:
    return json.dumps(store.model_dump(mode='json'), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def store_from_json(content: str) -> MemoryStore:
    """
    Parse a store document.

    Raises:
        ParseError: Not JSON or not a store
        SchemaVersionError: Unsupported schema_version
    """
    try:
        data = json.loads(content)
    except json.JSONDecodeError as e:
        raise ParseError(f"store is not valid JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ParseError("store must be a JSON object")

    version = data.get('schema_version')
    if version not in SUPPORTED_SCHEMA_VERSIONS:
        raise SchemaVersionError(
            f"unsupported schema_version {version!r} (supported: {sorted(SUPPORTED_SCHEMA_VERSIONS)})"
        )
    try:
        return MemoryStore.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"invalid store document: {e}") from e


def save_store(store: MemoryStore, path: Union[str, Path]) -> None:
    """
    Write a store as sorted-key JSON.

    Raises:
        PreconditionError: The store violates its invariants
        StoreIOError: The file cannot be written
    """
    violations = validate_store(store)
    if violations:
        raise PreconditionError(f"refusing to save an invalid store: {'; '.join(violations[:5])}")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(store_to_json(store), encoding='utf-8')
    except OSError as e:
        raise StoreIOError(f"cannot write store {path}: {e}") from e
    logger.info(f"Saved store for user '{store.user_id}' ({len(store.history)} records) to {path}")


def load_store(path: Union[str, Path]) -> MemoryStore:
    """
    Read a store written by save_store.

    Fingerprint mismatches are not checked here; they surface when the store is used.

    Raises:
        StoreIOError: The file cannot be read
        SchemaVersionError: Unsupported schema_version
        ParseError: Malformed document
    """
    try:
        content = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise StoreIOError(f"cannot read store {path}: {e}") from e
    store = store_from_json(content)
    logger.debug(f"Loaded store for user '{store.user_id}' from {path}")
    return store


def _fingerprint_dim(fingerprint: str) -> Union[int, None]:
    tail = fingerprint.rsplit(':', 1)[-1]
    return int(tail) if tail.isdigit() else None


def _check_history(store: MemoryStore) -> List[str]:
    violations = []
    records = store.history.records
    if store.history.user_id != store.user_id:
        violations.append(f"history user '{store.history.user_id}' ≠ store user '{store.user_id}'")
    seen = set()
    for position, record in enumerate(records):
        if record.behavior_id in seen:
            violations.append(f"duplicate behavior_id '{record.behavior_id}'")
        seen.add(record.behavior_id)
        if record.seq_index != position:
            violations.append(f"record '{record.behavior_id}' has seq_index {record.seq_index}, expected {position}")
        if position and records[position - 1].sort_key() >= record.sort_key():
            violations.append(f"record '{record.behavior_id}' is out of chronological order")
    return violations


def _check_embeddings(store: MemoryStore) -> List[str]:
    violations = []
    if not store.embeddings:
        return violations
    if len(store.embeddings) != len(store.history):
        violations.append(f"embedding count {len(store.embeddings)} ≠ history {len(store.history)}")
    expected_dim = _fingerprint_dim(store.embedder_fingerprint)
    if expected_dim is None:
        violations.append(f"embedder_fingerprint '{store.embedder_fingerprint}' does not name a dimension")
    for record, embedding in zip(store.history.records, store.embeddings):
        if expected_dim is not None and embedding.dim != expected_dim:
            violations.append(
                f"embedding of '{record.behavior_id}' has dim {embedding.dim}, fingerprint says {expected_dim}"
            )
        norm = math.sqrt(math.fsum(x * x for x in embedding.vector))
        if abs(norm - embedding.norm_cached) > 1e-9:
            violations.append(f"embedding of '{record.behavior_id}' has a stale norm_cached")
    return violations


def _check_graph(store: MemoryStore) -> List[str]:
    graph = store.graph
    violations = []
    n_records = len(store.history)
    if len(graph.nodes) != n_records:
        violations.append(f"node count {len(graph.nodes)} ≠ history {n_records}")

    ids = [node.behavior_id for node in graph.nodes]
    for position, node in enumerate(graph.nodes):
        if node.seq_index != position:
            violations.append(f"node '{node.behavior_id}' has seq_index {node.seq_index}, expected {position}")
        if position < n_records and store.history.records[position].behavior_id != node.behavior_id:
            violations.append(f"node {position} is '{node.behavior_id}' but record {position} is "
                              f"'{store.history.records[position].behavior_id}'")

    def label(index: int) -> str:
        return ids[index] if 0 <= index < len(ids) else f"#{index}"

    expected_temporal = {(i, i + 1) for i in range(len(graph.nodes) - 1)}
    actual_temporal = graph.temporal_set
    for u, v in sorted(expected_temporal - actual_temporal):
        violations.append(f"missing temporal edge ({label(u)}, {label(v)})")
    for u, v in sorted(actual_temporal - expected_temporal):
        violations.append(f"unexpected temporal edge ({label(u)}, {label(v)})")

    for u, v in graph.semantic_edges:
        if u == v:
            violations.append(f"self-loop on '{label(u)}'")
            continue
        if not (0 <= u < len(graph.nodes) and 0 <= v < len(graph.nodes)):
            violations.append(f"semantic edge ({label(u)}, {label(v)}) references a missing node")
            continue
        a, b = graph.nodes[u], graph.nodes[v]
        if (a.batch_id, a.cluster) != (b.batch_id, b.cluster):
            violations.append(
                f"semantic edge ({a.behavior_id}, {b.behavior_id}) joins different clusters "
                f"(batch {a.batch_id} cluster {a.cluster} vs batch {b.batch_id} cluster {b.cluster})"
            )

    starts = {batch_id: start for batch_id, start in graph.batch_boundaries}
    for node in graph.nodes:
        start = starts.get(node.batch_id)
        if start is None:
            violations.append(f"node '{node.behavior_id}' belongs to unknown batch {node.batch_id}")
        elif node.seq_index < start:
            violations.append(f"node '{node.behavior_id}' precedes the start of batch {node.batch_id}")
    return violations


def semantic_clique_gaps(store: MemoryStore) -> List[Tuple[str, str]]:
    """Pairs sharing (batch_id, cluster) without a semantic edge; empty for uncapped graphs."""
    if store.graph is None:
        return []
    groups: Dict[Tuple[int, int], List[int]] = {}
    for node in store.graph.nodes:
        groups.setdefault((node.batch_id, node.cluster), []).append(node.seq_index)
    semantic = store.graph.semantic_set
    return [
        (store.graph.nodes[u].behavior_id, store.graph.nodes[v].behavior_id)
        for members in groups.values()
        for u, v in combinations(sorted(members), 2)
        if (u, v) not in semantic
    ]


def _check_cognitive(store: MemoryStore) -> List[str]:
    cognitive = store.cognitive
    violations = []
    contiguous = [segment for segment in cognitive.segments if segment.members is None]
    if len(contiguous) == len(cognitive.segments) and cognitive.segments:
        expected_start = 0
        for segment in cognitive.segments:
            if segment.start_seq != expected_start:
                violations.append(f"segment {segment.segment_id} starts at {segment.start_seq}, expected {expected_start}")
            if segment.end_seq < segment.start_seq:
                violations.append(f"segment {segment.segment_id} is empty")
            expected_start = segment.end_seq + 1
        if expected_start != len(store.history):
            violations.append(f"segments cover {expected_start} records ≠ history {len(store.history)}")
    elif cognitive.segments:
        covered = sorted(i for segment in cognitive.segments for i in segment.seq_indices)
        if covered != list(range(len(store.history))):
            violations.append("segments do not partition the history")

    segment_ids = [segment.segment_id for segment in cognitive.segments]
    summary_ids = [summary.segment_id for summary in cognitive.local_summaries]
    if not cognitive.stale and sorted(summary_ids) != sorted(segment_ids):
        violations.append(f"{len(summary_ids)} local summaries for {len(segment_ids)} segments")
    if not cognitive.stale and not cognitive.global_summary.strip():
        violations.append("global summary is empty but the cognitive memory is not stale")
    return violations


def validate_store(store: MemoryStore) -> List[str]:
    """
    Check every store invariant.

    Returns:
        List[str]: One message per violation, naming the offending record or edge;
        empty when the store is consistent
    """
    violations = []
    if store.schema_version not in SUPPORTED_SCHEMA_VERSIONS:
        violations.append(f"unsupported schema_version {store.schema_version}")
    violations.extend(_check_history(store))
    violations.extend(_check_embeddings(store))
    if store.graph is not None:
        violations.extend(_check_graph(store))
    if store.cognitive is not None:
        violations.extend(_check_cognitive(store))

    known = {record.behavior_id for record in store.history.records}
    for memory in store.walk_logs:
        for behavior_id in memory.visited:
            if behavior_id not in known:
                violations.append(f"walk log of query '{memory.query_id}' visits unknown '{behavior_id}'")
    return violations
