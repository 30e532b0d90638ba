"""
Evaluation: LaMP dataset ingestion, personalization metrics and the seeded runner.
"""

from .metrics import (
    classification_metrics,
    generation_metrics,
    lcs_length,
    regression_metrics,
    rouge1,
    rougeL,
    rouge_tokens,
)
from .dataset import load_dataset, load_jsonl_cases, load_lamp_cases
from .runner import EvalRunner, run_eval, score_predictions
from .report import format_report_table, report_to_json, save_report

__all__ = [
    'classification_metrics',
    'generation_metrics',
    'lcs_length',
    'regression_metrics',
    'rouge1',
    'rougeL',
    'rouge_tokens',
    'load_dataset',
    'load_jsonl_cases',
    'load_lamp_cases',
    'EvalRunner',
    'run_eval',
    'score_predictions',
    'format_report_table',
    'report_to_json',
    'save_report',
]
