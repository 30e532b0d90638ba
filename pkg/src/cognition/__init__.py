"""
Cognitive memory: segmentation, local summaries and global synthesis.
"""

from .segmentation import (
    accept_breakpoints,
    breakpoint_threshold,
    consecutive_similarities,
    segment_by_breakpoints,
    segment_history,
    split_position,
)
from .prompts import SummaryPrompt, format_local_summaries, global_summary_prompt, local_summary_prompt
from .summarizer import (
    CognitiveSummarizer,
    build_cognitive,
    incremental_update_cognitive,
    summarize_segment,
    synthesize_global,
)

__all__ = [
    'accept_breakpoints',
    'breakpoint_threshold',
    'consecutive_similarities',
    'segment_by_breakpoints',
    'segment_history',
    'split_position',
    'SummaryPrompt',
    'format_local_summaries',
    'global_summary_prompt',
    'local_summary_prompt',
    'CognitiveSummarizer',
    'build_cognitive',
    'incremental_update_cognitive',
    'summarize_segment',
    'synthesize_global',
]
