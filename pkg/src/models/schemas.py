"""Pydantic v2 schema models for user histories, queries, prompts and evaluation.

Value objects are frozen: a history or query is never edited in place, a new
instance is built instead.
"""

import math
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import TaskType


class BehaviorRecord(BaseModel):
    behavior_id: str
    text: str
    timestamp: int
    seq_index: int = Field(default=0, ge=0)
    fields: Dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)

    @field_validator('text')
    @classmethod
    def _not_blank(cls, v):
        if not v or not v.strip():
            raise ValueError('text must not be blank')
        return v

    def sort_key(self) -> tuple[int, str]:
        return (self.timestamp, self.behavior_id)


class UserHistory(BaseModel):
    user_id: str
    records: List[BehaviorRecord] = Field(default_factory=list)

    model_config = ConfigDict(frozen=True)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def texts(self) -> List[str]:
        return [record.text for record in self.records]

    @property
    def max_timestamp(self) -> Optional[int]:
        return self.records[-1].timestamp if self.records else None

    def get(self, behavior_id: str) -> Optional[BehaviorRecord]:
        for record in self.records:
            if record.behavior_id == behavior_id:
                return record
        return None


class Query(BaseModel):
    query_id: str
    text: str
    issued_at: int = 0
    task: TaskType = TaskType.LAMP_5
    candidates: Optional[List[str]] = None

    model_config = ConfigDict(frozen=True)

    @field_validator('task', mode='before')
    @classmethod
    def _parse_task(cls, v):
        return TaskType.parse(v)


class Embedding(BaseModel):
    vector: List[float]
    dim: int = Field(gt=0)
    norm_cached: float = Field(ge=0.0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def _check_shape(self):
        if len(self.vector) != self.dim:
            raise ValueError(f'vector length {len(self.vector)} != dim {self.dim}')
        norm = math.sqrt(math.fsum(x * x for x in self.vector))
        if abs(norm - self.norm_cached) > 1e-9:
            raise ValueError('norm_cached does not match the vector norm')
        return self

    @classmethod
    def from_vector(cls, vector) -> 'Embedding':
        values = [float(x) for x in vector]
        return cls(vector=values, dim=len(values), norm_cached=math.sqrt(math.fsum(x * x for x in values)))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=np.float64)


class PromptBundle(BaseModel):
    task: TaskType
    cognitive_block: Optional[str] = None
    behavioral_block: Optional[str] = None
    behavioral_entries: List[str] = Field(default_factory=list)
    dropped_entries: int = 0
    instruction: str
    query_block: str
    labels: List[str] = Field(default_factory=list)
    rendered: str
    token_estimate: int

    model_config = ConfigDict(frozen=True)


class EvalCase(BaseModel):
    user_id: str
    query: Query
    gold: Union[str, float]
    history_ref: UserHistory

    model_config = ConfigDict(frozen=True)

    @model_validator(mode='after')
    def _check_gold(self):
        if self.query.task.is_regression:
            rating = float(self.gold)
            if rating != int(rating) or not 1 <= rating <= 5:
                raise ValueError(f'rating gold must be an integer 1-5, got {self.gold!r}')
        elif not isinstance(self.gold, str):
            raise ValueError(f'{self.query.task.value} gold must be text, got {self.gold!r}')
        return self


class MetricReport(BaseModel):
    task: TaskType
    n_cases: int
    metrics: Dict[str, float] = Field(default_factory=dict)
    per_seed: Optional[List[Dict[str, float]]] = None
    seeds: List[int] = Field(default_factory=list)
    failed_cases: int = 0
    unparseable: int = 0
    config_snapshot: Dict[str, Any] = Field(default_factory=dict)

    @field_validator('metrics')
    @classmethod
    def _finite(cls, v):
        for name, value in v.items():
            if not math.isfinite(value):
                raise ValueError(f'metric {name} is not finite')
        return v
