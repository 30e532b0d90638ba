"""Typed parameter objects handed to providers, the walk and the segmenter."""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .enums import (
    EmbeddingKind,
    GenerationKind,
    RecencyUnit,
    SegmentMode,
    StartPolicy,
    TauMode,
)


class TransportParams(BaseModel):
    api_key: str = Field(default="", repr=False, exclude=True)
    max_retries: int = Field(default=3, ge=1)
    retry_backoff: float = Field(default=1.0, ge=0.0)
    timeout: float = Field(default=60.0, gt=0.0)
    max_concurrency: int = Field(default=4, ge=1)

    model_config = ConfigDict(frozen=True)


class EmbeddingProviderConfig(TransportParams):
    kind: EmbeddingKind = EmbeddingKind.MOCK_HASH
    model_id: str = "bge-m3"
    endpoint: str = ""
    dim: int = Field(default=1024, gt=0)
    batch_size: int = Field(default=32, ge=1)
    cache_path: Optional[str] = None
    seed: int = 0

    @property
    def fingerprint(self) -> str:
        """
        Provider id + model id (+ seed for the hashing mock) + dimension.

        Every stored embedding carries this provenance; the dimension stays last.
        """
        if self.kind is EmbeddingKind.MOCK_HASH:
            return f"{self.kind.value}:{self.model_id}:seed{self.seed}:{self.dim}"
        return f"{self.kind.value}:{self.model_id}:{self.dim}"


class GenerationProviderConfig(TransportParams):
    kind: GenerationKind = GenerationKind.MOCK_EXTRACTIVE
    model_id: str = "qwen3-8b"
    endpoint: str = ""
    max_input_tokens: int = Field(default=3000, gt=0)
    max_new_tokens: int = Field(default=64, gt=0)
    temperature: float = Field(default=0.7, ge=0.0)
    top_p: float = Field(default=0.95, gt=0.0, le=1.0)
    seed: Optional[int] = None
    mock_keywords: int = Field(default=10, gt=0)

    @property
    def fingerprint(self) -> str:
        return f"{self.kind.value}:{self.model_id}"


class WalkConfig(BaseModel):
    alpha: float = Field(default=1.5, ge=0.0)
    lambda1: float = Field(default=0.01, ge=0.0)
    lambda2: float = Field(default=0.02, ge=0.0)
    max_steps: int = Field(default=10, ge=1)
    seed: int = 42
    recency_unit: RecencyUnit = RecencyUnit.RANK
    cos_floor: float = Field(default=1e-6, gt=0.0, lt=1.0)
    start_policy: StartPolicy = StartPolicy.ARGMAX_QUERY_SCORE
    num_walks: int = Field(default=1, ge=1)
    uniform_scores: bool = False
    use_temporal_edges: bool = True
    use_semantic_edges: bool = True

    model_config = ConfigDict(frozen=True)


class SegmentationParams(BaseModel):
    mode: SegmentMode = SegmentMode.BREAKPOINTS
    tau_mode: TauMode = TauMode.RELATIVE
    tau: float = 0.5
    min_size: int = Field(default=3, ge=1)
    max_size: int = Field(default=20, ge=1)
    # K-means grouping (mode=kmeans)
    k: int = Field(default=5, ge=1)
    seed: int = 0

    model_config = ConfigDict(frozen=True)

    @field_validator("max_size")
    @classmethod
    def _max_fits_two_min_segments(cls, v, info):
        # ranges longer than max_size split into pieces of min..max records
        min_size = info.data.get("min_size")
        if min_size is not None and v < 2 * min_size - 1:
            raise ValueError("max_size must be >= 2 * min_size - 1")
        return v
