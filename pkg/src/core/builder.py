"""
MemoryBuilder - end-to-end construction, update and retrieval of a user's memory store.

The builder owns one embedding and one generation provider; their ``stats``
counters therefore reflect every call made through it.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from src.cognition import CognitiveSummarizer
from src.configs import AppConfig
from src.graph import build_graph, incremental_update
from src.models import (
    SCHEMA_VERSION,
    BehavioralMemory,
    BehaviorRecord,
    Embedding,
    MemoryStore,
    Query,
    RetrieverKind,
    UserHistory,
)
from src.providers import (
    BaseEmbeddingProvider,
    BaseGenerationProvider,
    create_embedding_provider,
    create_generation_provider,
)
from src.walk import ContextWalker, select_dense, select_random, select_recent
from .exceptions import FingerprintMismatch, MissingGraph, PreconditionError, StaleBatchError
from .history import order_records


class MemoryBuilder:
    """
    Builds, updates and queries memory stores under one resolved configuration.

    Args:
        config: Resolved AppConfig
        embedder: Embedding provider; built from config when omitted
        generator: Generation provider; built from config when omitted
        dump_dir: Directory receiving every summary prompt, for audit
    """

    def __init__(
        self,
        config: AppConfig,
        embedder: Optional[BaseEmbeddingProvider] = None,
        generator: Optional[BaseGenerationProvider] = None,
        dump_dir: Optional[Union[str, Path]] = None,
    ):
        self.config = config
        self.embedder = embedder or create_embedding_provider(config.embedding_config)
        self.generator = generator or create_generation_provider(config.generation_config)
        self.summarizer = CognitiveSummarizer(self.generator, config.segmentation_params, dump_dir=dump_dir)
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _check_fingerprint(self, store: MemoryStore) -> None:
        if store.embedder_fingerprint and store.embedder_fingerprint != self.embedder.fingerprint:
            raise FingerprintMismatch(
                f"store was embedded with '{store.embedder_fingerprint}', "
                f"current embedder is '{self.embedder.fingerprint}'"
            )

    def embed_records(self, records: Sequence[BehaviorRecord]) -> List[Embedding]:
        return self.embedder.embed([record.text for record in records])

    def build(self, history: UserHistory, with_cognitive: bool = True) -> MemoryStore:
        """
        Embed a history and build its graph and (optionally) its cognitive memory.

        Raises:
            PreconditionError: Empty history
        """
        if not history.records:
            raise PreconditionError(f"history of user '{history.user_id}' is empty")
        embeddings = self.embed_records(history.records)
        graph = build_graph(
            history, embeddings, self.config.GRAPH_K, self.config.GRAPH_SEED, self.config.GRAPH_SEMANTIC_CAP
        )
        cognitive = self.summarizer.build(history, embeddings) if with_cognitive else None
        self.logger.info(f"Built memory for user '{history.user_id}': {len(history)} records")
        return MemoryStore(
            schema_version=SCHEMA_VERSION,
            user_id=history.user_id,
            history=history,
            embeddings=embeddings,
            graph=graph,
            cognitive=cognitive,
            embedder_fingerprint=self.embedder.fingerprint,
            config_snapshot=self.config.snapshot(),
        )

    def update(self, store: MemoryStore, new_records: Sequence[Union[BehaviorRecord, Dict[str, Any]]]) -> MemoryStore:
        """
        Splice a batch of newer records into a store.

        Only the new records are embedded; existing graph edges, segments and
        local summaries are kept, and the global summary is re-synthesized once.

        Raises:
            MissingGraph: The store has no graph
            FingerprintMismatch: The store was embedded by another provider
            StaleBatchError: A record is not newer than the store
        """
        if store.graph is None:
            raise MissingGraph(f"store of user '{store.user_id}' has no graph to update")
        self._check_fingerprint(store)
        if not new_records:
            return store

        raw = [r.model_dump() if isinstance(r, BehaviorRecord) else r for r in new_records]
        records = order_records(raw, start_index=len(store.history))
        newest = store.history.max_timestamp
        if newest is not None and records[0].timestamp <= newest:
            raise StaleBatchError(
                f"record '{records[0].behavior_id}' (timestamp {records[0].timestamp}) "
                f"is not newer than the store ({newest})"
            )

        embeddings = self.embed_records(records)
        graph = incremental_update(
            store.graph, records, embeddings, self.config.GRAPH_K, self.config.GRAPH_SEED,
            semantic_cap=self.config.GRAPH_SEMANTIC_CAP,
            fingerprint=self.embedder.fingerprint, graph_fingerprint=store.embedder_fingerprint,
        )
        cognitive = store.cognitive
        if cognitive is not None:
            cognitive = self.summarizer.update(cognitive, records, embeddings)

        history = UserHistory(user_id=store.history.user_id, records=list(store.history.records) + records)
        self.logger.info(f"Updated memory for user '{store.user_id}' with {len(records)} records")
        return store.model_copy(update={
            "history": history,
            "embeddings": list(store.embeddings) + embeddings,
            "graph": graph,
            "cognitive": cognitive,
            "config_snapshot": self.config.snapshot(),
        })

    def summarize(self, store: MemoryStore) -> MemoryStore:
        """(Re)build the cognitive memory of a store from its stored embeddings."""
        self._check_fingerprint(store)
        if not store.history.records:
            raise PreconditionError(f"history of user '{store.user_id}' is empty")
        embeddings = store.embeddings or self.embed_records(store.history.records)
        cognitive = self.summarizer.build(store.history, embeddings)
        return store.model_copy(update={"embeddings": embeddings, "cognitive": cognitive})

    def retrieve(
        self,
        store: MemoryStore,
        query: Query,
        retriever: Optional[Union[RetrieverKind, str]] = None,
        seed: Optional[int] = None,
        walker: Optional[ContextWalker] = None,
        query_embedding: Optional[Embedding] = None,
    ) -> BehavioralMemory:
        """
        Behavioral memory of a query.

        Args:
            store: Memory store with a graph (walk retriever) or embeddings (dense retriever)
            query: The query
            retriever: walk, random, recency, dense or none; defaults to EVAL_RETRIEVER
            seed: Walk / sampling seed; defaults to WALK_SEED
            walker: Pre-built walker to reuse across queries of one store
            query_embedding: Embedding of the query text, when already computed

        Raises:
            MissingGraph: Walk retrieval on a store without graph
            FingerprintMismatch: Store embedded by another provider
        """
        retriever = RetrieverKind(retriever or self.config.EVAL_RETRIEVER)
        seed = self.config.WALK_SEED if seed is None else seed
        k = self.config.EVAL_RETRIEVER_K

        if retriever is RetrieverKind.NONE:
            return BehavioralMemory(query_id=query.query_id, retriever=retriever)
        if retriever is RetrieverKind.RANDOM:
            return select_random(store.history, k, seed, query_id=query.query_id)
        if retriever is RetrieverKind.RECENCY:
            return select_recent(store.history, k, query_id=query.query_id)

        self._check_fingerprint(store)
        if query_embedding is None:
            query_embedding = self.embedder.embed([query.text])[0]
        if retriever is RetrieverKind.DENSE:
            return select_dense(store.history, store.embeddings, query_embedding, k, query_id=query.query_id)

        if walker is None or walker.cfg.seed != seed:
            walker = self.make_walker(store, seed)
        return walker.walk(query, query_embedding)

    def make_walker(self, store: MemoryStore, seed: Optional[int] = None) -> ContextWalker:
        if store.graph is None:
            raise MissingGraph(f"store of user '{store.user_id}' has no graph to walk")
        cfg = self.config.walk_config
        if seed is not None:
            cfg = cfg.model_copy(update={"seed": seed})
        return ContextWalker(store.graph, store.embeddings, cfg)


def _counters(builder: MemoryBuilder) -> Dict[str, int]:
    return {"embedding_calls": builder.embedder.stats["texts_embedded"], "generation_calls": builder.generator.stats["calls"]}


def _store_summary(store: MemoryStore, before: Dict[str, int], after: Dict[str, int]) -> Dict[str, int]:
    return {
        "embedding_calls": after["embedding_calls"] - before["embedding_calls"],
        "generation_calls": after["generation_calls"] - before["generation_calls"],
        "nodes": len(store.graph.nodes) if store.graph else 0,
        "temporal_edges": len(store.graph.temporal_edges) if store.graph else 0,
        "semantic_edges": len(store.graph.semantic_edges) if store.graph else 0,
        "local_summaries": len(store.cognitive.local_summaries) if store.cognitive else 0,
    }


def compare_update_strategies(
    history: UserHistory,
    split: Sequence[int],
    config: AppConfig,
    with_cognitive: bool = True,
) -> Dict[str, Dict[str, int]]:
    """
    Cost and size of three ways to absorb new behaviors.

    Args:
        history: Full history
        split: Batch sizes summing to len(history); the first batch is the initial build
        config: Resolved configuration (fresh providers are built per strategy)
        with_cognitive: Include the cognitive memory

    Returns:
        Dict[str, Dict[str, int]]: For 'full_rebuild', 'incremental' and 'no_update':
        provider calls spent after the initial build, plus node/edge/summary counts.
        Incremental and no-update costs exclude the initial build; the full rebuild
        re-embeds the entire history.
    """
    if sum(split) != len(history) or any(size < 1 for size in split):
        raise PreconditionError(f"split {list(split)} does not partition {len(history)} records")
    records = history.records
    prefix = UserHistory(user_id=history.user_id, records=records[:split[0]])

    results: Dict[str, Dict[str, int]] = {}

    builder = MemoryBuilder(config)
    store = builder.build(prefix, with_cognitive)
    before = _counters(builder)
    results["no_update"] = _store_summary(store, before, before)

    offset = split[0]
    for size in split[1:]:
        batch = [record.model_dump() for record in records[offset:offset + size]]
        store = builder.update(store, batch)
        offset += size
    results["incremental"] = _store_summary(store, before, _counters(builder))

    rebuilder = MemoryBuilder(config)
    start = _counters(rebuilder)
    full = rebuilder.build(history, with_cognitive)
    results["full_rebuild"] = _store_summary(full, start, _counters(rebuilder))
    return results
