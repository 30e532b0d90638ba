"""
Summary prompt templates.

The activity list header keeps the "Cluster X" wording for every grouping
mode; X is the segment id.
"""

from typing import Sequence

from pydantic import BaseModel, ConfigDict

from src.models import BehaviorRecord, LocalSummary
from src.providers.text import collapse_whitespace

LOCAL_SYSTEM_ROLE = "You are an expert at analyzing user behavior patterns."
LOCAL_INSTRUCTION = (
    "Provide a concise summary of the user's preferences and behavior patterns in this cluster. "
    "Focus on key themes, preferences, and patterns. Use clear, structured language."
)

GLOBAL_SYSTEM_ROLE = "You are an expert at creating concise user preference summaries."
GLOBAL_INSTRUCTION = (
    "Create a concise global summary (max 300 words) that captures the user's key preferences "
    "and behavior patterns. Focus on the most important themes and avoid redundancy. Use bullet "
    "points or short paragraphs for clarity. Be brief but comprehensive."
)

GLOBAL_WORD_LIMIT = 300
GLOBAL_WORD_SLACK = 0.10


class SummaryPrompt(BaseModel):
    system: str
    user: str

    model_config = ConfigDict(frozen=True)

    def render(self) -> str:
        """Single-string form used for golden files and --dump-prompts."""
        return f"{self.system}\n\n{self.user}"


def local_summary_prompt(segment_id: int, records: Sequence[BehaviorRecord]) -> SummaryPrompt:
    lines = [f"**Cluster {segment_id} Activities ({len(records)} records):**"]
    lines += [f"{number}. {collapse_whitespace(record.text)}" for number, record in enumerate(records, start=1)]
    return SummaryPrompt(system=LOCAL_SYSTEM_ROLE, user="\n".join(lines) + "\n\n" + LOCAL_INSTRUCTION)


def format_local_summaries(local_summaries: Sequence[LocalSummary]) -> str:
    return "\n".join(f"Cluster {summary.segment_id}: {collapse_whitespace(summary.text)}" for summary in local_summaries)


def global_summary_prompt(local_summaries: Sequence[LocalSummary]) -> SummaryPrompt:
    return SummaryPrompt(
        system=GLOBAL_SYSTEM_ROLE,
        user=format_local_summaries(local_summaries) + "\n\n" + GLOBAL_INSTRUCTION,
    )
