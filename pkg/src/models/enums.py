"""
Enumeration types for the memory models.

Values are the strings used in configuration files, store JSON and the command line.
"""

import re
from enum import Enum


class TaskType(Enum):
    """LaMP task identifiers (LaMP-6 is not public and is not supported)."""
    LAMP_1 = "LaMP-1"
    LAMP_2 = "LaMP-2"
    LAMP_3 = "LaMP-3"
    LAMP_4 = "LaMP-4"
    LAMP_5 = "LaMP-5"
    LAMP_7 = "LaMP-7"

    @classmethod
    def parse(cls, value: "str | TaskType") -> "TaskType":
        """Accept 'LaMP-1', 'lamp1', 'LaMP_1' or '1'."""
        if isinstance(value, cls):
            return value
        match = re.fullmatch(r"(?:lamp)?[-_ ]?([0-9])", str(value).strip().lower())
        if match:
            candidate = f"LaMP-{match.group(1)}"
            for task in cls:
                if task.value == candidate:
                    return task
        raise ValueError(f"Unknown task: {value}")

    @property
    def is_classification(self) -> bool:
        return self in (TaskType.LAMP_1, TaskType.LAMP_2, TaskType.LAMP_3)

    @property
    def is_regression(self) -> bool:
        return self is TaskType.LAMP_3


class HistoryFormat(Enum):
    """Input formats accepted by the history loader."""
    JSONL = "jsonl"
    LAMP = "lamp"


class EdgeKind(Enum):
    """Edge label recorded for a traversed walk step."""
    TEMPORAL = "temporal"
    SEMANTIC = "semantic"


class EmbeddingKind(Enum):
    MOCK_HASH = "mock-hash"
    REMOTE = "remote"


class GenerationKind(Enum):
    MOCK_EXTRACTIVE = "mock-extractive"
    REMOTE = "remote"


class RecencyUnit(Enum):
    """Unit of the recency gap between a behavior and the query."""
    RANK = "rank"
    SECONDS = "seconds"
    DAYS = "days"


class StartPolicy(Enum):
    ARGMAX_QUERY_SCORE = "argmax-query-score"
    SAMPLE_QUERY_SCORE = "sample-query-score"


class TauMode(Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"


class SegmentMode(Enum):
    """How the history is grouped before local summarization."""
    BREAKPOINTS = "breakpoints"
    KMEANS = "kmeans"
    NONE = "none"


class RetrieverKind(Enum):
    """Source of the behavioral memory during evaluation."""
    WALK = "walk"
    RANDOM = "random"
    RECENCY = "recency"
    DENSE = "dense"
    NONE = "none"


class CognitiveMode(Enum):
    """Content of the cognitive block: the global summary or the raw local summaries."""
    GLOBAL = "global"
    LOCALS = "locals"
