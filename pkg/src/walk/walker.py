"""
ContextWalker - seeded context-aware random walk over a memory graph.

Revisits are allowed during traversal; the behavioral memory keeps each node
once, in order of first visit. A traversed edge carrying both labels is logged
as temporal.
"""

import logging
from typing import Dict, List, Sequence

import numpy as np

from src.core.exceptions import AlignmentError, IsolatedNode, PreconditionError
from src.graph import to_networkx
from src.graph.kmeans import as_matrix, normalize_rows
from src.models import (
    BehavioralMemory,
    EdgeKind,
    Embedding,
    MemoryGraph,
    Query,
    StartPolicy,
    TraversalStats,
    WalkConfig,
    WalkStep,
)
from .scoring import cosine_similarities, query_score, recency_gaps, transition_score


class ContextWalker:
    """
    Walks one memory graph for any number of queries.

    The walker holds the graph view restricted to the enabled edge kinds and the
    normalized node embeddings; both are read-only, so one walker can serve
    several threads.
    """

    def __init__(self, graph: MemoryGraph, embeddings: Sequence[Embedding], cfg: WalkConfig):
        if len(embeddings) != len(graph.nodes):
            raise AlignmentError(f"{len(embeddings)} embeddings for {len(graph.nodes)} graph nodes")
        self.graph = graph
        self.cfg = cfg
        self.view = to_networkx(graph, temporal=cfg.use_temporal_edges, semantic=cfg.use_semantic_edges)
        self.unit = normalize_rows(as_matrix(embeddings)) if len(embeddings) else np.zeros((0, 0))
        self._neighbors = {node: sorted(self.view.neighbors(node)) for node in self.view.nodes}
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def neighbors(self, node: int) -> List[int]:
        return self._neighbors.get(node, [])

    def _context(self, query: Query, query_embedding: Embedding):
        return cosine_similarities(self.unit, query_embedding.vector), recency_gaps(self.graph.nodes, query, self.cfg)

    def score(self, from_node: int, to_node: int, similarities: np.ndarray, gaps: np.ndarray) -> float:
        return transition_score(float(similarities[to_node]), float(gaps[to_node]), abs(from_node - to_node), self.cfg)

    def transition_distribution(
        self,
        from_node: int,
        query: Query,
        query_embedding: Embedding,
        _context=None,
    ) -> Dict[int, float]:
        """
        Probabilities of moving from a node to each of its neighbours.

        Returns:
            Dict[int, float]: seq_index -> probability, summing to 1

        Raises:
            IsolatedNode: The node has no neighbour over the enabled edge kinds
        """
        candidates = self.neighbors(from_node)
        if not candidates:
            raise IsolatedNode(f"node '{self.graph.nodes[from_node].behavior_id}' has no neighbours")
        similarities, gaps = _context or self._context(query, query_embedding)
        scores = np.array([self.score(from_node, v, similarities, gaps) for v in candidates])
        total = scores.sum()
        if total > 0:
            probabilities = scores / total
        else:
            probabilities = np.full(len(candidates), 1.0 / len(candidates))
        return dict(zip(candidates, probabilities.tolist()))

    def start_node(self, similarities: np.ndarray, gaps: np.ndarray, rng: np.random.Generator) -> int:
        scores = np.array([query_score(float(s), float(g), self.cfg) for s, g in zip(similarities, gaps)])
        if self.cfg.start_policy is StartPolicy.SAMPLE_QUERY_SCORE and scores.sum() > 0:
            return sample_index(scores / scores.sum(), rng)
        best = scores.max()
        # ties go to the most recent behavior
        return int(np.flatnonzero(scores == best)[-1])

    def edge_kind(self, u: int, v: int) -> EdgeKind:
        if self.cfg.use_temporal_edges and self.view.edges[u, v]["temporal"]:
            return EdgeKind.TEMPORAL
        return EdgeKind.SEMANTIC

    def walk(self, query: Query, query_embedding: Embedding) -> BehavioralMemory:
        """
        Run cfg.num_walks walks for a query and merge their visits.

        Raises:
            PreconditionError: Empty graph
        """
        if not self.graph.nodes:
            raise PreconditionError("cannot walk an empty graph")
        similarities, gaps = self._context(query, query_embedding)
        ids = [node.behavior_id for node in self.graph.nodes]

        visited: Dict[str, None] = {}
        steps: List[WalkStep] = []
        # a one-node graph has nothing to traverse and nothing to halt on
        max_steps = self.cfg.max_steps if len(ids) > 1 else 0
        for child in np.random.SeedSequence(self.cfg.seed).spawn(self.cfg.num_walks):
            rng = np.random.default_rng(child)
            current = self.start_node(similarities, gaps, rng)
            visited.setdefault(ids[current], None)
            for _ in range(max_steps):
                try:
                    distribution = self.transition_distribution(current, query, query_embedding, (similarities, gaps))
                except IsolatedNode:
                    steps.append(WalkStep(from_node=ids[current], halted=True))
                    break
                candidates = list(distribution)
                probabilities = np.array([distribution[c] for c in candidates])
                chosen = candidates[sample_index(probabilities, rng)]
                steps.append(WalkStep(
                    from_node=ids[current],
                    to_node=ids[chosen],
                    edge_kind=self.edge_kind(current, chosen),
                    score=self.score(current, chosen, similarities, gaps),
                    probability=distribution[chosen],
                ))
                current = chosen
                visited.setdefault(ids[current], None)

        self.logger.debug(f"Query '{query.query_id}': {len(steps)} steps, {len(visited)} unique nodes")
        return BehavioralMemory(
            query_id=query.query_id,
            visited=list(visited),
            step_log=steps,
            seed=self.cfg.seed,
        )


def sample_index(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw with one ``rng.random()`` call."""
    cumulative = np.cumsum(probabilities)
    draw = rng.random() * cumulative[-1]
    return int(min(np.searchsorted(cumulative, draw, side="right"), len(probabilities) - 1))


def transition_distribution(
    graph: MemoryGraph,
    embeddings: Sequence[Embedding],
    from_node: int,
    query: Query,
    query_embedding: Embedding,
    cfg: WalkConfig,
) -> Dict[int, float]:
    return ContextWalker(graph, embeddings, cfg).transition_distribution(from_node, query, query_embedding)


def run_walk(
    graph: MemoryGraph,
    embeddings: Sequence[Embedding],
    query: Query,
    query_embedding: Embedding,
    cfg: WalkConfig,
) -> BehavioralMemory:
    """Walk the graph for one query; see ContextWalker.walk."""
    return ContextWalker(graph, embeddings, cfg).walk(query, query_embedding)


def traversal_stats(memories: Sequence[BehavioralMemory]) -> TraversalStats:
    """Fractions of temporal and semantic moves over all logs; halts are not steps, (0, 0) without moves."""
    kinds = [step.edge_kind for memory in memories for step in memory.moves]
    if not kinds:
        return TraversalStats()
    temporal = sum(1 for kind in kinds if kind is EdgeKind.TEMPORAL)
    return TraversalStats(
        temporal_fraction=temporal / len(kinds),
        semantic_fraction=(len(kinds) - temporal) / len(kinds),
        steps=len(kinds),
    )
