"""
Unit tests for the personalization metrics.
"""

import math
from itertools import product

import numpy as np
import pytest

from src.core import LengthMismatch
from src.eval import classification_metrics, generation_metrics, regression_metrics, rouge1, rougeL
from src.eval.metrics import lcs_length, rouge_tokens


def _naive_lcs(a, b):
    """Exponential LCS over index subsets, for short inputs only."""
    best = 0
    for mask in product([False, True], repeat=len(a)):
        subsequence = [token for token, keep in zip(a, mask) if keep]
        position = 0
        for token in b:
            if position < len(subsequence) and subsequence[position] == token:
                position += 1
        if position == len(subsequence):
            best = max(best, len(subsequence))
    return best


def _naive_rouge1_f1(candidate, reference):
    cand, ref = candidate.lower().split(), reference.lower().split()
    overlap = sum(min(cand.count(token), ref.count(token)) for token in set(cand))
    if not overlap:
        return 0.0
    precision, recall = overlap / len(cand), overlap / len(ref)
    return 2 * precision * recall / (precision + recall)


class TestClassificationMetrics:
    """Test cases for accuracy and macro-F1."""

    def test_worked_example(self):
        """Test golds [1,1,2] against preds [1,2,2]."""
        metrics = classification_metrics(["1", "2", "2"], ["1", "1", "2"])
        assert metrics["accuracy"] == pytest.approx(2 / 3)
        assert metrics["macro_f1"] == pytest.approx(2 / 3)

    def test_perfect(self):
        """Test perfect predictions."""
        assert classification_metrics(["a", "b"], ["a", "b"]) == {"accuracy": 1.0, "macro_f1": 1.0}

    def test_all_wrong(self):
        """Test all-wrong binary predictions."""
        assert classification_metrics(["[2]", "[1]"], ["[1]", "[2]"]) == {"accuracy": 0.0, "macro_f1": 0.0}

    def test_label_set(self):
        """Test that labels absent from preds and golds still count as zero-F1 classes."""
        metrics = classification_metrics(["a", "a"], ["a", "a"], labels=["a", "b"])
        assert metrics["macro_f1"] == pytest.approx(0.5)

    def test_length_mismatch(self):
        """Test that unequal lengths raise."""
        with pytest.raises(LengthMismatch):
            classification_metrics(["a"], ["a", "b"])

    def test_naive_oracle(self):
        """Test accuracy and macro-F1 against a direct re-computation on random cases."""
        rng = np.random.default_rng(0)
        for _ in range(1000):
            n = int(rng.integers(1, 12))
            golds = [str(x) for x in rng.integers(1, 4, n)]
            preds = [str(x) for x in rng.integers(1, 4, n)]
            labels = sorted(set(golds) | set(preds))
            f1s = []
            for label in labels:
                predicted = [i for i in range(n) if preds[i] == label]
                actual = [i for i in range(n) if golds[i] == label]
                hits = len(set(predicted) & set(actual))
                precision = hits / len(predicted) if predicted else 0.0
                recall = hits / len(actual) if actual else 0.0
                f1s.append(2 * precision * recall / (precision + recall) if precision + recall else 0.0)
            metrics = classification_metrics(preds, golds)
            assert metrics["accuracy"] == pytest.approx(sum(p == g for p, g in zip(preds, golds)) / n)
            assert metrics["macro_f1"] == pytest.approx(sum(f1s) / len(f1s))


class TestRegressionMetrics:
    """Test cases for MAE and RMSE."""

    def test_symmetric_errors(self):
        """Test preds [3,5] against golds [4,4]."""
        assert regression_metrics([3, 5], [4, 4]) == {"mae": 1.0, "rmse": 1.0}

    def test_exact(self):
        """Test that exact predictions score zero."""
        assert regression_metrics([2, 4], [2, 4]) == {"mae": 0.0, "rmse": 0.0}

    def test_opposite(self):
        """Test preds [1,5] against golds [5,1]."""
        assert regression_metrics([1, 5], [5, 1]) == {"mae": 4.0, "rmse": 4.0}

    def test_mae_not_above_rmse(self):
        """Test MAE <= RMSE on random ratings."""
        rng = np.random.default_rng(1)
        for _ in range(1000):
            n = int(rng.integers(1, 20))
            metrics = regression_metrics(rng.integers(1, 6, n).tolist(), rng.integers(1, 6, n).tolist())
            assert metrics["mae"] <= metrics["rmse"] + 1e-12
            assert math.isfinite(metrics["rmse"])


class TestRouge:
    """Test cases for ROUGE-1 and ROUGE-L."""

    def test_rouge1_example(self):
        """Test 'the cat sat' against 'the cat'."""
        scores = rouge1("the cat sat", "the cat")
        assert scores["recall"] == 1.0
        assert scores["precision"] == pytest.approx(2 / 3)
        assert scores["f1"] == pytest.approx(0.8)

    def test_rougeL_example(self):
        """Test 'a b c' against 'a c'."""
        scores = rougeL("a b c", "a c")
        assert scores["recall"] == 1.0
        assert scores["precision"] == pytest.approx(2 / 3)
        assert scores["f1"] == pytest.approx(0.8)

    def test_identity(self):
        """Test that identical non-empty strings score 1."""
        for text in ("graph learning", "A title: with punctuation!"):
            assert rouge1(text, text)["f1"] == pytest.approx(1.0)
            assert rougeL(text, text)["f1"] == pytest.approx(1.0)

    def test_identity_non_ascii(self):
        """Test that CJK and accented texts score 1 against themselves."""
        for text in ("東京 大阪", "グラフ学習の研究", "Café société naïve", "Ελληνικά κείμενα"):
            assert rouge_tokens(text)
            assert rouge1(text, text)["f1"] == pytest.approx(1.0)
            assert rougeL(text, text)["f1"] == pytest.approx(1.0)

    def test_accented_tokens(self):
        """Test that accented letters stay inside their word."""
        assert rouge_tokens("Café au lait") == ["café", "au", "lait"]
        assert rouge_tokens("snake_case-word") == ["snake", "case", "word"]
        assert rouge1("café", "cafe")["f1"] == 0.0
        assert rouge1("東京 大阪", "大阪 名古屋")["f1"] == pytest.approx(0.5)

    def test_empty(self):
        """Test that empty token lists score 0."""
        assert rouge1("", "the cat")["f1"] == 0.0
        assert rougeL("!!!", "the cat")["f1"] == 0.0

    def test_clipped_overlap(self):
        """Test that repeated candidate tokens are clipped to the reference count."""
        assert rouge1("the the the", "the cat")["precision"] == pytest.approx(1 / 3)

    def test_stemming(self):
        """Test that stemming merges inflected forms only when enabled."""
        assert rouge_tokens("Running networks", stemming=True) == ["run", "network"]
        assert rouge1("running", "runs")["f1"] == 0.0
        assert rouge1("running", "runs", stemming=True)["f1"] == 1.0

    def test_recall_monotone(self):
        """Test that removing a shared token never increases recall."""
        reference = "graph neural networks for molecules"
        full = rouge1("graph neural networks", reference)["recall"]
        assert rouge1("graph neural", reference)["recall"] <= full

    def test_naive_oracle(self):
        """Test ROUGE-1 and LCS against naive re-implementations on random short cases."""
        rng = np.random.default_rng(2)
        vocabulary = ["a", "b", "c", "d"]
        for _ in range(1000):
            candidate = [vocabulary[i] for i in rng.integers(0, 4, int(rng.integers(1, 7)))]
            reference = [vocabulary[i] for i in rng.integers(0, 4, int(rng.integers(1, 7)))]
            assert lcs_length(candidate, reference) == _naive_lcs(candidate, reference)
            assert rouge1(" ".join(candidate), " ".join(reference))["f1"] == pytest.approx(
                _naive_rouge1_f1(" ".join(candidate), " ".join(reference))
            )

    def test_generation_metrics(self):
        """Test the mean F1 over cases."""
        metrics = generation_metrics(["the cat sat", "x"], ["the cat", "y"])
        assert metrics["rouge1"] == pytest.approx(0.4)
        assert metrics["rougeL"] == pytest.approx(0.4)
