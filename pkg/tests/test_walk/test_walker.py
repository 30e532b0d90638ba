"""
Unit tests for transition scoring and the context-aware walk.
"""

import math
from decimal import Decimal, localcontext

import numpy as np
import pytest

from src.core import IsolatedNode, PreconditionError
from src.models import BehavioralMemory, EdgeKind, Embedding, GraphNode, MemoryGraph, RecencyUnit, WalkConfig, WalkStep
from src.walk import ContextWalker, recency_gaps, run_walk, transition_distribution, transition_score, traversal_stats
from tests.factories import make_embeddings, make_query


def _graph(n, temporal=None, semantic=()):
    nodes = [GraphNode(behavior_id=f"d{i + 1}", seq_index=i, timestamp=1000 + 100 * i, cluster=0) for i in range(n)]
    if temporal is None:
        temporal = [(i, i + 1) for i in range(n - 1)]
    return MemoryGraph(nodes=nodes, temporal_edges=temporal, semantic_edges=list(semantic))


def _random_case(rng):
    n = int(rng.integers(2, 9))
    semantic = [(u, v) for u in range(n) for v in range(u + 2, n) if rng.random() < 0.3]
    graph = _graph(n, semantic=semantic)
    embeddings = make_embeddings(rng.standard_normal((n, 4)))
    query_embedding = Embedding.from_vector(rng.standard_normal(4))
    cfg = WalkConfig(
        alpha=float(rng.uniform(0, 3)),
        lambda1=float(rng.uniform(0, 0.5)),
        lambda2=float(rng.uniform(0, 0.5)),
        seed=int(rng.integers(1000)),
    )
    return graph, embeddings, query_embedding, cfg


def _decimal_score(similarity, recency_gap, sequence_gap, cfg):
    """The transition score evaluated in 50-digit decimal arithmetic."""
    with localcontext() as context:
        context.prec = 50
        clamped = min(max(Decimal(similarity), Decimal(cfg.cos_floor)), Decimal(1))
        score = clamped ** Decimal(cfg.alpha)
        score *= (-Decimal(cfg.lambda1) * Decimal(recency_gap)).exp()
        score *= (-Decimal(cfg.lambda2) * Decimal(sequence_gap)).exp()
        return float(score)


def _replay_walk(graph, vectors, query_vector, cfg):
    """Node path of a single walk recomputed from the formula, drawing from the walker's seeded stream."""
    n = len(vectors)
    unit = [np.asarray(v, dtype=float) / np.linalg.norm(v) for v in vectors]
    query = np.asarray(query_vector, dtype=float) / np.linalg.norm(query_vector)
    similarities = [float(u @ query) for u in unit]
    gaps = [n - 1 - i for i in range(n)]
    neighbours = {i: set() for i in range(n)}
    for u, v in list(graph.temporal_edges) + list(graph.semantic_edges):
        neighbours[u].add(v)
        neighbours[v].add(u)

    def clamped(i):
        return min(max(similarities[i], cfg.cos_floor), 1.0)

    start_scores = [clamped(i) ** cfg.alpha * math.exp(-cfg.lambda1 * gaps[i]) for i in range(n)]
    current = max(range(n), key=lambda i: (start_scores[i], i))
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed).spawn(1)[0])
    path = [current]
    for _ in range(cfg.max_steps):
        candidates = sorted(neighbours[current])
        scores = [
            clamped(v) ** cfg.alpha * math.exp(-cfg.lambda1 * gaps[v]) * math.exp(-cfg.lambda2 * abs(current - v))
            for v in candidates
        ]
        draw = rng.random() * sum(scores)
        chosen, accumulated = candidates[-1], 0.0
        for v, score in zip(candidates, scores):
            accumulated += score
            if draw < accumulated:
                chosen = v
                break
        path.append(chosen)
        current = chosen
    return path


class TestTransitionScore:
    """Test cases for transition_score."""

    def test_unit_similarity(self):
        """Test cos=1 at recency gap 0 and sequence gap 1."""
        assert transition_score(1.0, 0, 1, WalkConfig()) == pytest.approx(math.exp(-0.02), abs=1e-12)
        assert transition_score(1.0, 0, 1, WalkConfig()) == pytest.approx(0.980199, abs=1e-6)

    def test_orthogonal_floor(self):
        """Test that zero similarity is floored to 1e-6 before the exponent."""
        cfg = WalkConfig(lambda1=0.0, lambda2=0.0)
        assert transition_score(0.0, 0, 0, cfg) == pytest.approx(1e-9, rel=1e-9)
        assert transition_score(-0.5, 0, 0, cfg) == pytest.approx(1e-9, rel=1e-9)

    def test_no_decay(self):
        """Test that with both lambdas at zero the score is cos**alpha."""
        cfg = WalkConfig(lambda1=0.0, lambda2=0.0)
        for gap in (0, 3, 50):
            assert transition_score(0.64, gap, gap, cfg) == 0.64 ** 1.5

    def test_uniform_scores(self):
        """Test that uniform scoring ignores every input."""
        assert transition_score(0.1, 9, 9, WalkConfig(uniform_scores=True)) == 1.0

    def test_decimal_oracle(self):
        """Test ten thousand random inputs against a 50-digit decimal evaluation."""
        rng = np.random.default_rng(10)
        for _ in range(10000):
            cfg = WalkConfig(
                alpha=float(rng.uniform(0, 3)),
                lambda1=float(rng.uniform(0, 0.1)),
                lambda2=float(rng.uniform(0, 0.1)),
                cos_floor=float(10 ** rng.uniform(-8, -2)),
            )
            similarity = float(rng.uniform(-1, 1))
            recency_gap = float(rng.integers(0, 500)) if rng.random() < 0.5 else float(rng.uniform(0, 500))
            sequence_gap = int(rng.integers(1, 50))
            assert transition_score(similarity, recency_gap, sequence_gap, cfg) == pytest.approx(
                _decimal_score(similarity, recency_gap, sequence_gap, cfg), rel=1e-12, abs=0
            )

    def test_monotone_in_gaps(self):
        """Test strict decrease in the recency gap and the sequence gap."""
        cfg = WalkConfig()
        recency = [transition_score(0.5, gap, 1, cfg) for gap in range(10)]
        continuity = [transition_score(0.5, 0, gap, cfg) for gap in range(10)]
        assert all(a > b for a, b in zip(recency, recency[1:]))
        assert all(a > b for a, b in zip(continuity, continuity[1:]))


class TestRecencyGaps:
    """Test cases for recency_gaps."""

    def test_rank(self):
        """Test that rank gaps count behaviors elapsed since a node."""
        graph = _graph(4)
        assert recency_gaps(graph.nodes, make_query(), WalkConfig()).tolist() == [3.0, 2.0, 1.0, 0.0]

    def test_seconds_and_days(self):
        """Test wall-clock gaps against the query time."""
        graph = _graph(2)
        query = make_query(issued_at=1100 + 86400)
        seconds = recency_gaps(graph.nodes, query, WalkConfig(recency_unit=RecencyUnit.SECONDS))
        days = recency_gaps(graph.nodes, query, WalkConfig(recency_unit=RecencyUnit.DAYS))
        assert seconds.tolist() == [86500.0, 86400.0]
        assert days[1] == pytest.approx(1.0)

    def test_query_before_history(self):
        """Test that wall-clock units need a query issued after the newest behavior."""
        with pytest.raises(PreconditionError):
            recency_gaps(_graph(2).nodes, make_query(issued_at=1050), WalkConfig(recency_unit=RecencyUnit.SECONDS))


class TestTransitionDistribution:
    """Test cases for transition_distribution."""

    def setup_method(self):
        """Set up test fixtures."""
        self.graph = _graph(3, semantic=[(0, 2)])
        self.embeddings = make_embeddings([[1.0, 0.0], [0.6, 0.8], [0.0, 1.0]])
        self.query = make_query()
        self.query_embedding = Embedding.from_vector([1.0, 0.0])

    def test_path_graph_distribution(self):
        """Test the distribution from the middle node against a direct computation."""
        distribution = transition_distribution(
            self.graph, self.embeddings, 1, self.query, self.query_embedding, WalkConfig()
        )
        to_first = 1.0 ** 1.5 * math.exp(-0.01 * 2) * math.exp(-0.02 * 1)
        to_last = (1e-6) ** 1.5 * math.exp(-0.01 * 0) * math.exp(-0.02 * 1)
        assert distribution[0] == pytest.approx(to_first / (to_first + to_last), abs=1e-12)
        assert distribution[2] == pytest.approx(to_last / (to_first + to_last), abs=1e-12)

    def test_uniform(self):
        """Test four neighbours under uniform scoring."""
        graph = _graph(5, temporal=[], semantic=[(0, 1), (0, 2), (0, 3), (0, 4)])
        embeddings = make_embeddings(np.eye(5).tolist())
        distribution = transition_distribution(
            graph, embeddings, 0, self.query, Embedding.from_vector([1, 0, 0, 0, 0]), WalkConfig(uniform_scores=True)
        )
        assert distribution == {1: 0.25, 2: 0.25, 3: 0.25, 4: 0.25}

    def test_isolated_node(self):
        """Test that a node without neighbours raises IsolatedNode."""
        graph = _graph(3, temporal=[(0, 1)])
        with pytest.raises(IsolatedNode):
            transition_distribution(graph, self.embeddings, 2, self.query, self.query_embedding, WalkConfig())

    def test_sums_to_one(self):
        """Test probability conservation over random graphs, queries and settings."""
        rng = np.random.default_rng(0)
        for _ in range(1000):
            graph, embeddings, query_embedding, cfg = _random_case(rng)
            walker = ContextWalker(graph, embeddings, cfg)
            node = int(rng.integers(len(graph.nodes)))
            distribution = walker.transition_distribution(node, self.query, query_embedding)
            assert abs(sum(distribution.values()) - 1.0) < 1e-9
            assert all(p > 0 for p in distribution.values())

    def test_score_scale_invariance(self):
        """Test that multiplying every neighbour score by c > 0 leaves the distribution unchanged."""

        class ScaledWalker(ContextWalker):
            scale = 1.0

            def score(self, from_node, to_node, similarities, gaps):
                return self.scale * super().score(from_node, to_node, similarities, gaps)

        rng = np.random.default_rng(5)
        for _ in range(200):
            graph, embeddings, query_embedding, cfg = _random_case(rng)
            node = int(rng.integers(len(graph.nodes)))
            base = ContextWalker(graph, embeddings, cfg).transition_distribution(node, self.query, query_embedding)
            for scale in (1e-6, 0.5, 3.0, 1e6):
                walker = ScaledWalker(graph, embeddings, cfg)
                walker.scale = scale
                scaled = walker.transition_distribution(node, self.query, query_embedding)
                assert scaled.keys() == base.keys()
                for neighbour in base:
                    assert scaled[neighbour] == pytest.approx(base[neighbour], rel=1e-12)

    def test_alpha_zero_ignores_query(self):
        """Test that at alpha=0 the query embedding has no influence."""
        rng = np.random.default_rng(1)
        for _ in range(50):
            graph, embeddings, _, cfg = _random_case(rng)
            cfg = cfg.model_copy(update={"alpha": 0.0})
            walker = ContextWalker(graph, embeddings, cfg)
            first = walker.transition_distribution(0, self.query, Embedding.from_vector(rng.standard_normal(4)))
            second = walker.transition_distribution(0, self.query, Embedding.from_vector(rng.standard_normal(4)))
            assert first.keys() == second.keys()
            for node in first:
                assert first[node] == pytest.approx(second[node], abs=1e-12)


class TestRunWalk:
    """Test cases for run_walk and ContextWalker.walk."""

    def setup_method(self):
        """Set up test fixtures."""
        self.query = make_query()

    def test_single_node(self):
        """Test that a one-node graph returns that node and no steps."""
        memory = run_walk(_graph(1), make_embeddings([[1.0, 0.0]]), self.query, Embedding.from_vector([1.0, 0.0]), WalkConfig())
        assert memory.visited == ["d1"]
        assert memory.step_log == []
        assert memory.halted_at == []

    def test_start_at_best_match(self):
        """Test that the walk starts at the node most similar to the query."""
        embeddings = make_embeddings([[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
        memory = run_walk(_graph(3), embeddings, self.query, Embedding.from_vector([1.0, 0.0]), WalkConfig(max_steps=1))
        assert memory.visited[0] == "d2"

    def test_start_ties_to_most_recent(self):
        """Test that equal start scores go to the latest behavior."""
        cfg = WalkConfig(lambda1=0.0, max_steps=1)
        memory = run_walk(_graph(3), make_embeddings([[1.0, 0.0]] * 3), self.query, Embedding.from_vector([1.0, 0.0]), cfg)
        assert memory.visited[0] == "d3"

    def test_deterministic(self):
        """Test that a fixed seed reproduces the walk on a 5-node path."""
        rng = np.random.default_rng(2)
        embeddings = make_embeddings(rng.standard_normal((5, 3)))
        query_embedding = Embedding.from_vector([1.0, 0.5, 0.0])
        first = run_walk(_graph(5), embeddings, self.query, query_embedding, WalkConfig(seed=42))
        second = run_walk(_graph(5), embeddings, self.query, query_embedding, WalkConfig(seed=42))
        assert first == second
        assert len(first.step_log) == 10

    def test_three_node_golden_walk(self):
        """Test the seed-42, three-step walk on the three-node example graph."""
        graph = _graph(3, semantic=[(0, 2)])
        embeddings = make_embeddings([[1.0, 0.0], [0.6, 0.8], [0.0, 1.0]])
        memory = run_walk(graph, embeddings, self.query, Embedding.from_vector([1.0, 0.0]), WalkConfig(seed=42, max_steps=3))
        assert memory.visited == ["d1", "d2"]
        assert [(step.from_node, step.to_node) for step in memory.step_log] == [("d1", "d2"), ("d2", "d1"), ("d1", "d2")]
        assert {step.edge_kind for step in memory.step_log} == {EdgeKind.TEMPORAL}
        to_second = 0.6 ** 1.5 * math.exp(-0.01) * math.exp(-0.02)
        to_third = 1e-9 * math.exp(-0.04)
        assert memory.step_log[0].probability == pytest.approx(to_second / (to_second + to_third), rel=1e-12)
        assert memory.step_log[0].score == pytest.approx(to_second, rel=1e-12)
        assert memory.seed == 42

    def test_replayed_seeded_walks(self):
        """Test walks against a replay of the seeded draws over independently computed scores."""
        rng = np.random.default_rng(42)
        cases = [(_graph(3, semantic=[(0, 2)]), [[1.0, 0.0], [0.6, 0.8], [0.0, 1.0]], [0.8, 0.6], 42)]
        for _ in range(50):
            n = int(rng.integers(2, 9))
            semantic = [(u, v) for u in range(n) for v in range(u + 2, n) if rng.random() < 0.3]
            cases.append((_graph(n, semantic=semantic), rng.standard_normal((n, 3)).tolist(),
                          rng.standard_normal(3).tolist(), int(rng.integers(1000))))
        for graph, vectors, query_vector, seed in cases:
            cfg = WalkConfig(seed=seed, max_steps=6)
            memory = run_walk(graph, make_embeddings(vectors), self.query, Embedding.from_vector(query_vector), cfg)
            path = _replay_walk(graph, vectors, query_vector, cfg)
            ids = [f"d{i + 1}" for i in path]
            assert [step.from_node for step in memory.step_log] == ids[:-1]
            assert [step.to_node for step in memory.step_log] == ids[1:]
            assert memory.visited == list(dict.fromkeys(ids))

    def test_step_bound_and_uniqueness(self):
        """Test that visited ids are unique and bounded by num_walks * (max_steps + 1)."""
        rng = np.random.default_rng(3)
        for _ in range(100):
            graph, embeddings, query_embedding, cfg = _random_case(rng)
            cfg = cfg.model_copy(update={"max_steps": int(rng.integers(1, 6)), "num_walks": int(rng.integers(1, 4))})
            memory = ContextWalker(graph, embeddings, cfg).walk(self.query, query_embedding)
            assert len(memory.visited) == len(set(memory.visited))
            assert len(memory.visited) <= cfg.num_walks * (cfg.max_steps + 1)
            assert all(0 < step.probability <= 1 for step in memory.moves)
            assert all((step.probability is None) == step.halted for step in memory.step_log)

    def test_isolated_start_halts(self):
        """Test that a walk reaching a node without neighbours stops and records it."""
        graph = _graph(3, temporal=[(0, 1)])
        embeddings = make_embeddings([[0.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        memory = run_walk(graph, embeddings, self.query, Embedding.from_vector([1.0, 0.0]), WalkConfig())
        assert memory.visited == ["d3"]
        assert memory.step_log == [WalkStep(from_node="d3", halted=True)]
        assert memory.halted_at == ["d3"]

    def test_every_walk_logs_its_halt(self):
        """Test that each of several walks from an isolated start logs one halt."""
        graph = _graph(3, temporal=[(0, 1)])
        embeddings = make_embeddings([[0.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        cfg = WalkConfig(num_walks=3)
        memory = run_walk(graph, embeddings, self.query, Embedding.from_vector([1.0, 0.0]), cfg)
        assert memory.visited == ["d3"]
        assert memory.halted_at == ["d3", "d3", "d3"]
        assert memory.moves == []

    def test_both_labels_count_as_temporal(self):
        """Test that an edge with both labels is logged as temporal."""
        graph = _graph(2, semantic=[(0, 1)])
        memory = run_walk(graph, make_embeddings([[1.0, 0.0]] * 2), self.query, Embedding.from_vector([1.0, 0.0]), WalkConfig())
        assert {step.edge_kind for step in memory.step_log} == {EdgeKind.TEMPORAL}

    def test_semantic_only_view(self):
        """Test that disabling temporal edges walks semantic edges only."""
        graph = _graph(3, semantic=[(0, 2)])
        cfg = WalkConfig(use_temporal_edges=False)
        memory = run_walk(graph, make_embeddings([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]), self.query,
                          Embedding.from_vector([1.0, 0.0]), cfg)
        assert "d2" not in memory.visited
        assert {step.edge_kind for step in memory.step_log} == {EdgeKind.SEMANTIC}

    def test_empty_graph(self):
        """Test that an empty graph cannot be walked."""
        with pytest.raises(PreconditionError):
            run_walk(MemoryGraph(), [], self.query, Embedding.from_vector([1.0]), WalkConfig())


class TestTraversalStats:
    """Test cases for traversal_stats."""

    def _step(self, kind):
        return WalkStep(from_node="d1", to_node="d2", edge_kind=kind, score=0.5, probability=0.5)

    def test_fractions(self):
        """Test seven temporal and three semantic steps."""
        memory = BehavioralMemory(
            query_id="q1",
            step_log=[self._step(EdgeKind.TEMPORAL)] * 7 + [self._step(EdgeKind.SEMANTIC)] * 3,
        )
        stats = traversal_stats([memory])
        assert stats.temporal_fraction == pytest.approx(0.7)
        assert stats.semantic_fraction == pytest.approx(0.3)
        assert stats.steps == 10

    def test_halts_are_not_counted(self):
        """Test that halt entries do not count as temporal or semantic steps."""
        memory = BehavioralMemory(
            query_id="q1",
            step_log=[self._step(EdgeKind.SEMANTIC), WalkStep(from_node="d2", halted=True)],
        )
        stats = traversal_stats([memory])
        assert stats.steps == 1
        assert stats.semantic_fraction == 1.0
        stats = traversal_stats([BehavioralMemory(query_id="q1", step_log=[WalkStep(from_node="d1", halted=True)])])
        assert (stats.temporal_fraction, stats.semantic_fraction, stats.steps) == (0.0, 0.0, 0)

    def test_empty(self):
        """Test the zero convention for empty logs."""
        stats = traversal_stats([BehavioralMemory(query_id="q1")])
        assert (stats.temporal_fraction, stats.semantic_fraction) == (0.0, 0.0)

    def test_path_only_graph(self):
        """Test that walks over a graph without semantic edges are all temporal."""
        rng = np.random.default_rng(4)
        embeddings = make_embeddings(rng.standard_normal((6, 3)))
        memories = [
            run_walk(_graph(6), embeddings, make_query(),
                     Embedding.from_vector([1.0, 0.0, 0.0]), WalkConfig(seed=seed))
            for seed in range(100)
        ]
        stats = traversal_stats(memories)
        assert (stats.temporal_fraction, stats.semantic_fraction) == (1.0, 0.0)
