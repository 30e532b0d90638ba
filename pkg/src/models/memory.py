"""Pydantic v2 models of the dual user memory and its on-disk store.

Edges are unordered pairs of global ``seq_index`` values, stored as sorted
``(low, high)`` tuples in sorted order so that serialized stores are stable.
"""

from typing import Any, Dict, Iterable, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import EdgeKind, RetrieverKind, SegmentMode
from .schemas import Embedding, UserHistory

Edge = Tuple[int, int]

SCHEMA_VERSION = 1


def normalize_edges(edges: Iterable[Iterable[int]]) -> List[Edge]:
    """Order each pair, drop duplicates and return the pairs sorted."""
    normalized = set()
    for edge in edges:
        u, v = edge
        u, v = int(u), int(v)
        normalized.add((u, v) if u <= v else (v, u))
    return sorted(normalized)


class GraphNode(BaseModel):
    behavior_id: str
    seq_index: int = Field(ge=0)
    timestamp: int
    cluster: int = Field(ge=0)
    batch_id: int = Field(default=0, ge=0)

    model_config = ConfigDict(frozen=True)


class ClusterAssignment(BaseModel):
    k: int = Field(ge=1)
    labels: List[int]
    centroids: List[List[float]]
    inertia: float = Field(ge=0.0)
    seed: int

    model_config = ConfigDict(frozen=True)

    def members(self, label: int) -> List[int]:
        return [i for i, value in enumerate(self.labels) if value == label]


class MemoryGraph(BaseModel):
    nodes: List[GraphNode] = Field(default_factory=list)
    temporal_edges: List[Edge] = Field(default_factory=list)
    semantic_edges: List[Edge] = Field(default_factory=list)
    batch_boundaries: List[Tuple[int, int]] = Field(default_factory=list)
    assignments: List[ClusterAssignment] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    @field_validator('temporal_edges', 'semantic_edges', mode='before')
    @classmethod
    def _normalize(cls, v):
        return normalize_edges(v)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def temporal_set(self) -> Set[Edge]:
        return set(self.temporal_edges)

    @property
    def semantic_set(self) -> Set[Edge]:
        return set(self.semantic_edges)

    @property
    def edge_set(self) -> Set[Edge]:
        return self.temporal_set | self.semantic_set

    @property
    def next_batch_id(self) -> int:
        return max((batch_id for batch_id, _ in self.batch_boundaries), default=-1) + 1

    def node_by_id(self, behavior_id: str) -> Optional[GraphNode]:
        for node in self.nodes:
            if node.behavior_id == behavior_id:
                return node
        return None


class WalkStep(BaseModel):
    """One move of a walk, or the halt of a walk at a node without neighbours."""

    from_node: str
    to_node: Optional[str] = None
    edge_kind: Optional[EdgeKind] = None
    score: float = Field(default=0.0, ge=0.0)
    probability: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    halted: bool = False

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def _move_or_halt(self):
        move_fields = (self.to_node, self.edge_kind, self.probability)
        if self.halted and any(value is not None for value in move_fields):
            raise ValueError('a halt step has no target, edge kind or probability')
        if not self.halted and any(value is None for value in move_fields):
            raise ValueError('a move step needs to_node, edge_kind and probability')
        return self


class BehavioralMemory(BaseModel):
    query_id: str
    visited: List[str] = Field(default_factory=list)
    step_log: List[WalkStep] = Field(default_factory=list)
    retriever: RetrieverKind = RetrieverKind.WALK
    seed: Optional[int] = None

    model_config = ConfigDict(frozen=True)

    @field_validator('visited')
    @classmethod
    def _unique(cls, v):
        if len(set(v)) != len(v):
            raise ValueError('visited must not contain duplicates')
        return v

    @property
    def moves(self) -> List[WalkStep]:
        return [step for step in self.step_log if not step.halted]

    @property
    def halted_at(self) -> List[str]:
        """Behavior ids at which a walk stopped early on an isolated node."""
        return [step.from_node for step in self.step_log if step.halted]


class TraversalStats(BaseModel):
    temporal_fraction: float = 0.0
    semantic_fraction: float = 0.0
    steps: int = 0

    model_config = ConfigDict(frozen=True)


class Segment(BaseModel):
    segment_id: int = Field(ge=1)
    start_seq: int = Field(ge=0)
    end_seq: int = Field(ge=0)
    boundary_similarity: Optional[float] = None
    # explicit seq indices for non-contiguous groupings (K-means mode)
    members: Optional[List[int]] = None

    model_config = ConfigDict(frozen=True)

    @property
    def seq_indices(self) -> List[int]:
        if self.members is not None:
            return list(self.members)
        return list(range(self.start_seq, self.end_seq + 1))

    def __len__(self) -> int:
        return len(self.seq_indices)


class LocalSummary(BaseModel):
    segment_id: int
    text: str
    fingerprint: str

    model_config = ConfigDict(frozen=True)


class CognitiveMemory(BaseModel):
    segments: List[Segment] = Field(default_factory=list)
    local_summaries: List[LocalSummary] = Field(default_factory=list)
    global_summary: str = ""
    generated_at: Optional[int] = None
    stale: bool = False
    segment_mode: SegmentMode = SegmentMode.BREAKPOINTS

    model_config = ConfigDict(frozen=True)

    @property
    def next_segment_id(self) -> int:
        return max((segment.segment_id for segment in self.segments), default=0) + 1


class MemoryStore(BaseModel):
    schema_version: int = SCHEMA_VERSION
    user_id: str
    history: UserHistory
    embeddings: List[Embedding] = Field(default_factory=list)
    graph: Optional[MemoryGraph] = None
    cognitive: Optional[CognitiveMemory] = None
    embedder_fingerprint: str = ""
    walk_logs: List[BehavioralMemory] = Field(default_factory=list)
    config_snapshot: Dict[str, Any] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)
