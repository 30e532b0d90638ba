"""
User memory data models and schemas.

This package provides the pydantic models shared by every memweaver module:
histories and queries, the memory graph, the behavioral and cognitive
memories, the persisted store and the evaluation records.
"""

from .enums import (
    TaskType,
    HistoryFormat,
    EdgeKind,
    EmbeddingKind,
    GenerationKind,
    RecencyUnit,
    StartPolicy,
    TauMode,
    SegmentMode,
    RetrieverKind,
    CognitiveMode,
)
from .schemas import (
    BehaviorRecord,
    UserHistory,
    Query,
    Embedding,
    PromptBundle,
    EvalCase,
    MetricReport,
)
from .memory import (
    SCHEMA_VERSION,
    GraphNode,
    ClusterAssignment,
    MemoryGraph,
    WalkStep,
    BehavioralMemory,
    TraversalStats,
    Segment,
    LocalSummary,
    CognitiveMemory,
    MemoryStore,
    normalize_edges,
)
from .params import (
    EmbeddingProviderConfig,
    GenerationProviderConfig,
    WalkConfig,
    SegmentationParams,
)

__all__ = [
    'TaskType',
    'HistoryFormat',
    'EdgeKind',
    'EmbeddingKind',
    'GenerationKind',
    'RecencyUnit',
    'StartPolicy',
    'TauMode',
    'SegmentMode',
    'RetrieverKind',
    'CognitiveMode',
    'BehaviorRecord',
    'UserHistory',
    'Query',
    'Embedding',
    'PromptBundle',
    'EvalCase',
    'MetricReport',
    'SCHEMA_VERSION',
    'GraphNode',
    'ClusterAssignment',
    'MemoryGraph',
    'WalkStep',
    'BehavioralMemory',
    'TraversalStats',
    'Segment',
    'LocalSummary',
    'CognitiveMemory',
    'MemoryStore',
    'normalize_edges',
    'EmbeddingProviderConfig',
    'GenerationProviderConfig',
    'WalkConfig',
    'SegmentationParams',
]
