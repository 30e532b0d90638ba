"""
Prompt assembly: cognitive block, behavioral block, instruction and query,
joined by blank lines in that order. Absent memories leave no trace.
"""

import logging
from typing import List, Optional, Sequence

from src.core.exceptions import OverflowAfterTruncation
from src.models import (
    BehavioralMemory,
    BehaviorRecord,
    CognitiveMemory,
    CognitiveMode,
    GenerationProviderConfig,
    PromptBundle,
    Query,
    UserHistory,
)
from src.cognition.prompts import format_local_summaries
from src.providers.text import estimate_tokens
from .templates import get_template

logger = logging.getLogger(__name__)

BLOCK_SEPARATOR = "\n\n"


def memory_records(memory: BehavioralMemory, history: UserHistory) -> List[BehaviorRecord]:
    """Records visited by a behavioral memory, in chronological order."""
    wanted = set(memory.visited)
    return [record for record in history.records if record.behavior_id in wanted]


def cognitive_text(cognitive: Optional[CognitiveMemory], mode: CognitiveMode = CognitiveMode.GLOBAL) -> Optional[str]:
    if cognitive is None:
        return None
    if mode is CognitiveMode.LOCALS:
        text = format_local_summaries(cognitive.local_summaries)
    else:
        text = cognitive.global_summary
    return text.strip() or None


def render_blocks(
    cognitive_block: Optional[str],
    entries: Sequence[str],
    instruction: str,
    query_block: str,
) -> str:
    blocks = [cognitive_block, "\n".join(entries) if entries else None, instruction, query_block]
    return BLOCK_SEPARATOR.join(block for block in blocks if block)


def assemble_prompt(
    task,
    query: Query,
    behavioral: Optional[Sequence[BehaviorRecord]] = None,
    cognitive: Optional[CognitiveMemory] = None,
    cfg: Optional[GenerationProviderConfig] = None,
    cognitive_mode: CognitiveMode = CognitiveMode.GLOBAL,
) -> PromptBundle:
    """
    Build the memory-augmented prompt for a query.

    Args:
        task: Task id (TaskType or a string such as 'lamp1')
        query: The query
        behavioral: Records of the behavioral memory (see memory_records), or None
        cognitive: Cognitive memory, or None
        cfg: Generation config; its max_input_tokens caps the prompt estimate
        cognitive_mode: Render the global summary or the local summaries

    Returns:
        PromptBundle: Blocks, rendered prompt and token estimate

    Raises:
        UnknownTask: No template for the task
        OverflowAfterTruncation: Over the cap with every behavioral entry dropped
    """
    template = get_template(task)
    cfg = cfg or GenerationProviderConfig()
    cognitive_block = cognitive_text(cognitive, cognitive_mode)
    ordered = sorted(behavioral or [], key=lambda record: record.seq_index)
    entries = [template.render_record(record) for record in ordered]
    query_block = template.render_query(query)

    dropped = 0
    rendered = render_blocks(cognitive_block, entries, template.instruction, query_block)
    while estimate_tokens(rendered) > cfg.max_input_tokens:
        if not entries:
            raise OverflowAfterTruncation(
                f"prompt needs ~{estimate_tokens(rendered)} tokens without behavioral entries, "
                f"cap is {cfg.max_input_tokens}"
            )
        entries = entries[1:]
        dropped += 1
        rendered = render_blocks(cognitive_block, entries, template.instruction, query_block)
    if dropped:
        logger.info(f"Dropped {dropped} oldest behavioral entries to fit {cfg.max_input_tokens} tokens")

    return PromptBundle(
        task=template.task,
        cognitive_block=cognitive_block,
        behavioral_block="\n".join(entries) if entries else None,
        behavioral_entries=entries,
        dropped_entries=dropped,
        instruction=template.instruction,
        query_block=query_block,
        labels=template.labels(query),
        rendered=rendered,
        token_estimate=estimate_tokens(rendered),
    )
