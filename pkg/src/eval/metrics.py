"""
Personalization metrics: accuracy and macro-F1 (LaMP-1/2), MAE and RMSE
(LaMP-3), ROUGE-1 and ROUGE-L (LaMP-4/5/7).

ROUGE tokenization lowercases and splits on non-alphanumeric runs; Porter
stemming (nltk) is applied only when ``stemming=True``.
"""

import logging
from collections import Counter
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

import numpy as np
from nltk.stem.porter import PorterStemmer

from src.core.exceptions import LengthMismatch, PreconditionError
from src.providers.text import tokenize

logger = logging.getLogger(__name__)


def _check_lengths(preds: Sequence, golds: Sequence) -> None:
    if len(preds) != len(golds):
        raise LengthMismatch(f"{len(preds)} predictions for {len(golds)} gold values")
    if not golds:
        raise PreconditionError("metrics need at least one case")


def classification_metrics(
    preds: Sequence[str],
    golds: Sequence[str],
    labels: Optional[Sequence[str]] = None,
) -> Dict[str, float]:
    """
    Accuracy and unweighted macro-F1.

    Args:
        preds: Predicted labels
        golds: Gold labels
        labels: Label set to average over; defaults to the labels seen in golds and preds

    Returns:
        Dict[str, float]: {'accuracy', 'macro_f1'}

    Raises:
        LengthMismatch: preds and golds differ in length
    """
    _check_lengths(preds, golds)
    preds = [str(p) for p in preds]
    golds = [str(g) for g in golds]
    label_set = list(dict.fromkeys(labels)) if labels else sorted(set(golds) | set(preds))

    correct = sum(p == g for p, g in zip(preds, golds))
    f1_scores = []
    for label in label_set:
        tp = sum(p == label and g == label for p, g in zip(preds, golds))
        fp = sum(p == label and g != label for p, g in zip(preds, golds))
        fn = sum(p != label and g == label for p, g in zip(preds, golds))
        denominator = 2 * tp + fp + fn
        f1_scores.append(2 * tp / denominator if denominator else 0.0)

    return {
        "accuracy": correct / len(golds),
        "macro_f1": float(np.mean(f1_scores)) if f1_scores else 0.0,
    }


def regression_metrics(preds: Sequence[float], golds: Sequence[float]) -> Dict[str, float]:
    """MAE and RMSE of numeric predictions."""
    _check_lengths(preds, golds)
    errors = np.asarray(preds, dtype=float) - np.asarray(golds, dtype=float)
    return {
        "mae": float(np.mean(np.abs(errors))),
        "rmse": float(np.sqrt(np.mean(errors ** 2))),
    }


@lru_cache(maxsize=1)
def _stemmer():
    return PorterStemmer()


def rouge_tokens(text: str, stemming: bool = False) -> List[str]:
    tokens = tokenize(text)
    if stemming:
        stemmer = _stemmer()
        tokens = [stemmer.stem(token) for token in tokens]
    return tokens


def _prf(overlap: float, candidate_len: int, reference_len: int) -> Dict[str, float]:
    if not candidate_len or not reference_len or not overlap:
        return {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    precision = overlap / candidate_len
    recall = overlap / reference_len
    return {"precision": precision, "recall": recall, "f1": 2 * precision * recall / (precision + recall)}


def rouge1(candidate: str, reference: str, stemming: bool = False) -> Dict[str, float]:
    """ROUGE-1 from clipped unigram overlap."""
    cand = Counter(rouge_tokens(candidate, stemming))
    ref = Counter(rouge_tokens(reference, stemming))
    overlap = sum((cand & ref).values())
    return _prf(overlap, sum(cand.values()), sum(ref.values()))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, start=1):
            current.append(previous[j - 1] + 1 if token == other else max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rougeL(candidate: str, reference: str, stemming: bool = False) -> Dict[str, float]:
    """ROUGE-L from the longest common subsequence of tokens."""
    cand = rouge_tokens(candidate, stemming)
    ref = rouge_tokens(reference, stemming)
    return _prf(lcs_length(cand, ref), len(cand), len(ref))


def generation_metrics(preds: Sequence[str], golds: Sequence[str], stemming: bool = False) -> Dict[str, float]:
    """Mean ROUGE-1 and ROUGE-L F1 over cases."""
    _check_lengths(preds, golds)
    r1 = [rouge1(p, g, stemming)["f1"] for p, g in zip(preds, golds)]
    rl = [rougeL(p, g, stemming)["f1"] for p, g in zip(preds, golds)]
    return {"rouge1": float(np.mean(r1)), "rougeL": float(np.mean(rl))}
