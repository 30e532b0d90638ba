"""
Memory-augmented prompt assembly and response handling.
"""

from .templates import LAMP1_LABELS, RATING_LABELS, TEMPLATES, TaskTemplate, get_template
from .assembly import assemble_prompt, cognitive_text, memory_records
from .response import Answer, answer, fallback_label, generate_response, parse_response

__all__ = [
    'LAMP1_LABELS',
    'RATING_LABELS',
    'TEMPLATES',
    'TaskTemplate',
    'get_template',
    'assemble_prompt',
    'cognitive_text',
    'memory_records',
    'Answer',
    'answer',
    'fallback_label',
    'generate_response',
    'parse_response',
]
