from typing import Optional

from pydantic import Field, PositiveInt, NonNegativeFloat, NonNegativeInt, PositiveFloat
from pydantic_settings import BaseSettings


class GraphSettings(BaseSettings):
    """
    Memory graph construction
    """
    GRAPH_K: PositiveInt = Field(
        description="Number of K-means clusters per batch",
        default=5,
    )
    GRAPH_SEED: int = Field(
        description="Seed of the k-means++ initialization",
        default=0,
    )
    GRAPH_SEMANTIC_CAP: Optional[PositiveInt] = Field(
        description="Optional per-node cap (top-m by cosine) on semantic edges; unset keeps full cliques",
        default=None,
    )


class WalkSettings(BaseSettings):
    """
    Context-aware random walk
    """
    WALK_ALPHA: NonNegativeFloat = Field(
        description="Exponent of the query similarity term",
        default=1.5,
    )
    WALK_LAMBDA1: NonNegativeFloat = Field(
        description="Recency decay rate",
        default=0.01,
    )
    WALK_LAMBDA2: NonNegativeFloat = Field(
        description="Continuity decay rate",
        default=0.02,
    )
    WALK_MAX_STEPS: PositiveInt = Field(
        description="Number of transitions per walk",
        default=10,
    )
    WALK_SEED: int = Field(
        description="Seed of the walk sampler",
        default=42,
    )
    WALK_RECENCY_UNIT: str = Field(
        description="Unit of the recency gap. Options: 'rank', 'seconds', 'days'",
        default="rank",
    )
    WALK_COS_FLOOR: PositiveFloat = Field(
        description="Lower clamp of the cosine similarity, in (0, 1)",
        default=1e-6,
    )
    WALK_START_POLICY: str = Field(
        description="Start node selection. Options: 'argmax-query-score', 'sample-query-score'",
        default="argmax-query-score",
    )
    WALK_NUM_WALKS: PositiveInt = Field(
        description="Number of independent walks whose visits are merged",
        default=1,
    )
    WALK_UNIFORM_SCORES: bool = Field(
        description="Ignore edge weighting and move uniformly over neighbours",
        default=False,
    )
    WALK_USE_TEMPORAL_EDGES: bool = Field(
        description="Allow traversal of temporal edges",
        default=True,
    )
    WALK_USE_SEMANTIC_EDGES: bool = Field(
        description="Allow traversal of semantic edges",
        default=True,
    )


class SegmentationSettings(BaseSettings):
    """
    Cognitive memory segmentation
    """
    SEGMENT_MODE: str = Field(
        description="Grouping before local summaries. Options: 'breakpoints', 'kmeans', 'none'",
        default="breakpoints",
    )
    SEGMENT_TAU_MODE: str = Field(
        description="Breakpoint threshold mode. Options: 'relative', 'absolute'",
        default="relative",
    )
    SEGMENT_TAU: float = Field(
        description="Absolute cosine threshold, or the c of mean - c * std in relative mode",
        default=0.5,
    )
    SEGMENT_MIN_SIZE: PositiveInt = Field(
        description="Minimum segment length (the last segment may be shorter)",
        default=3,
    )
    SEGMENT_MAX_SIZE: PositiveInt = Field(
        description="Maximum segment length",
        default=20,
    )


class EvalSettings(BaseSettings):
    """
    Evaluation runner
    """
    EVAL_SEEDS: list[int] = Field(
        description="Walk seeds; metrics are averaged over them",
        default=[0, 1, 2, 3, 4],
    )
    EVAL_RETRIEVER: str = Field(
        description="Behavioral memory source. Options: 'walk', 'random', 'recency', 'dense', 'none'",
        default="walk",
    )
    EVAL_RETRIEVER_K: PositiveInt = Field(
        description="Number of records selected by the heuristic retrievers",
        default=5,
    )
    EVAL_USE_COGNITIVE: bool = Field(
        description="Include the cognitive memory in prompts",
        default=True,
    )
    EVAL_COGNITIVE_MODE: str = Field(
        description="Cognitive block content. Options: 'global', 'locals'",
        default="global",
    )
    EVAL_ROUGE_STEMMING: bool = Field(
        description="Apply Porter stemming before ROUGE",
        default=False,
    )
    EVAL_WORKERS: NonNegativeInt = Field(
        description="Parallel case workers; 0 evaluates sequentially",
        default=4,
    )


class MemoryConfig(
    GraphSettings,
    WalkSettings,
    SegmentationSettings,
    EvalSettings
):
    pass
