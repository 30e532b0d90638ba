"""
Unit tests for history, query and evaluation schema classes.
"""

import math

import pytest
from pydantic import ValidationError

from src.models import (
    BehaviorRecord,
    Embedding,
    EvalCase,
    MetricReport,
    Query,
    TaskType,
    UserHistory,
)


class TestBehaviorRecord:
    """Test cases for BehaviorRecord."""

    def test_blank_text_rejected(self):
        """Test that whitespace-only text fails validation."""
        with pytest.raises(ValidationError):
            BehaviorRecord(behavior_id="b1", text="   ", timestamp=1)

    def test_sort_key(self):
        """Test that records sort by timestamp, then id."""
        a = BehaviorRecord(behavior_id="b", text="x", timestamp=5)
        b = BehaviorRecord(behavior_id="a", text="y", timestamp=5)
        assert sorted([a, b], key=BehaviorRecord.sort_key) == [b, a]

    def test_frozen(self):
        """Test that records cannot be edited in place."""
        record = BehaviorRecord(behavior_id="b1", text="x", timestamp=1)
        with pytest.raises(ValidationError):
            record.text = "changed"


class TestUserHistory:
    """Test cases for UserHistory."""

    def setup_method(self):
        """Set up test fixtures."""
        self.history = UserHistory(user_id="u1", records=[
            BehaviorRecord(behavior_id="b1", text="first", timestamp=10, seq_index=0),
            BehaviorRecord(behavior_id="b2", text="second", timestamp=20, seq_index=1),
        ])

    def test_helpers(self):
        """Test length, texts, newest timestamp and lookup."""
        assert len(self.history) == 2
        assert self.history.texts == ["first", "second"]
        assert self.history.max_timestamp == 20
        assert self.history.get("b2").text == "second"
        assert self.history.get("missing") is None

    def test_empty_history(self):
        """Test that an empty history has no newest timestamp."""
        assert UserHistory(user_id="u").max_timestamp is None


class TestQuery:
    """Test cases for Query."""

    def test_task_parsed_from_string(self):
        """Test that task strings are normalized to TaskType."""
        assert Query(query_id="q", text="t", task="lamp2").task is TaskType.LAMP_2

    def test_default_task(self):
        """Test that the default task is LaMP-5."""
        assert Query(query_id="q", text="t").task is TaskType.LAMP_5


class TestEmbedding:
    """Test cases for Embedding."""

    def test_from_vector(self):
        """Test that from_vector fills dim and norm."""
        embedding = Embedding.from_vector([3.0, 4.0])
        assert embedding.dim == 2
        assert embedding.norm_cached == pytest.approx(5.0)
        assert embedding.as_array().tolist() == [3.0, 4.0]

    def test_dim_mismatch_rejected(self):
        """Test that the vector length must equal dim."""
        with pytest.raises(ValidationError):
            Embedding(vector=[1.0, 0.0], dim=3, norm_cached=1.0)

    def test_stale_norm_rejected(self):
        """Test that norm_cached must match the vector."""
        with pytest.raises(ValidationError):
            Embedding(vector=[1.0, 0.0], dim=2, norm_cached=2.0)


class TestEvalCase:
    """Test cases for EvalCase gold validation."""

    def setup_method(self):
        """Set up test fixtures."""
        self.history = UserHistory(user_id="u1")

    def test_rating_gold_must_be_integer_in_range(self):
        """Test that LaMP-3 golds outside 1-5 fail validation."""
        query = Query(query_id="q", text="review", task="LaMP-3")
        assert EvalCase(user_id="u1", query=query, gold="4", history_ref=self.history).gold == "4"
        with pytest.raises(ValidationError):
            EvalCase(user_id="u1", query=query, gold=7, history_ref=self.history)
        with pytest.raises(ValidationError):
            EvalCase(user_id="u1", query=query, gold=2.5, history_ref=self.history)

    def test_text_gold_for_generation(self):
        """Test that generation tasks take text golds."""
        query = Query(query_id="q", text="abstract", task="LaMP-5")
        case = EvalCase(user_id="u1", query=query, gold="A title", history_ref=self.history)
        assert case.gold == "A title"


class TestMetricReport:
    """Test cases for MetricReport."""

    def test_non_finite_metric_rejected(self):
        """Test that NaN metrics fail validation."""
        with pytest.raises(ValidationError):
            MetricReport(task=TaskType.LAMP_5, n_cases=1, metrics={"rouge1": math.nan})

    def test_defaults(self):
        """Test counters default to zero."""
        report = MetricReport(task=TaskType.LAMP_1, n_cases=2, metrics={"accuracy": 0.5})
        assert report.failed_cases == 0
        assert report.unparseable == 0
        assert report.per_seed is None
