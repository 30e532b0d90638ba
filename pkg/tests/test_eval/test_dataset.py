"""
Unit tests for evaluation dataset ingestion.
"""

import json

import pytest

from src.core import EmptyDataset, ParseError
from src.eval import load_dataset, load_jsonl_cases, load_lamp_cases
from src.eval.dataset import dataset_task
from src.models import EvalCase, TaskType
from tests.factories import TEMPLATES_DIR, make_history, make_query

LAMP1_DIR = TEMPLATES_DIR / "lamp1"


class TestLoadJsonlCases:
    """Test cases for the JSON Lines layout."""

    def test_committed_fixture(self):
        """Test the ten-case fixture with histories shared per user."""
        cases = load_jsonl_cases(TEMPLATES_DIR / "eval_cases.jsonl")
        assert len(cases) == 10
        assert {case.user_id for case in cases} == {"u1", "u2"}
        u1 = [case for case in cases if case.user_id == "u1"]
        assert all(case.history_ref is u1[0].history_ref for case in u1)
        assert len(u1[0].history_ref) == 6
        assert dataset_task(cases) is TaskType.LAMP_5

    def test_missing_history(self, tmp_path):
        """Test that a user without history is reported with its line number."""
        path = tmp_path / "cases.jsonl"
        path.write_text(json.dumps({"user_id": "u9", "query": "hello", "gold": "hi"}) + "\n", encoding="utf-8")
        with pytest.raises(ParseError) as excinfo:
            load_jsonl_cases(path)
        assert excinfo.value.line == 1

    def test_string_query(self, tmp_path):
        """Test that a bare string query is accepted."""
        line = {
            "user_id": "u1",
            "history": [{"behavior_id": "a", "text": "first", "timestamp": 1}],
            "query": "some abstract",
            "gold": "A title",
        }
        path = tmp_path / "cases.jsonl"
        path.write_text(json.dumps(line) + "\n", encoding="utf-8")
        case = load_jsonl_cases(path)[0]
        assert case.query.text == "some abstract"
        assert case.query.task is TaskType.LAMP_5

    def test_invalid_json(self, tmp_path):
        """Test that a malformed line is reported."""
        path = tmp_path / "cases.jsonl"
        path.write_text("\n{not json\n", encoding="utf-8")
        with pytest.raises(ParseError) as excinfo:
            load_jsonl_cases(path)
        assert excinfo.value.line == 2


class TestLoadLampCases:
    """Test cases for the LaMP official layout."""

    def test_directory(self):
        """Test that a directory is resolved to its questions and outputs files."""
        cases = load_dataset(LAMP1_DIR)
        assert [case.gold for case in cases] == ["[1]", "[2]"]
        assert cases[0].query.candidates == [
            "Graph contrastive learning with augmentations",
            "Deep residual learning for image recognition",
        ]
        assert cases[0].query.issued_at == cases[0].history_ref.max_timestamp
        assert len(cases[1].history_ref) == 2

    def test_files(self):
        """Test explicit questions and outputs paths."""
        cases = load_lamp_cases(LAMP1_DIR / "LaMP_1_dev_questions.json", LAMP1_DIR / "LaMP_1_dev_outputs.json")
        assert dataset_task(cases) is TaskType.LAMP_1

    def test_missing_gold(self, tmp_path):
        """Test that a question without gold output is refused."""
        outputs = tmp_path / "outputs.json"
        outputs.write_text(json.dumps({"task": "LaMP_1", "golds": [{"id": "100", "output": "[1]"}]}), encoding="utf-8")
        with pytest.raises(ParseError):
            load_lamp_cases(LAMP1_DIR / "LaMP_1_dev_questions.json", outputs)


class TestLoadDataset:
    """Test cases for load_dataset guards."""

    def test_empty(self, tmp_path):
        """Test that a dataset without cases raises EmptyDataset."""
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        with pytest.raises(EmptyDataset):
            load_dataset(path)

    def test_mixed_tasks(self, tmp_path):
        """Test that one dataset holds one task."""
        history = [{"behavior_id": "a", "text": "first", "timestamp": 1}]
        lines = [
            {"user_id": "u1", "history": history, "query": {"query_id": "1", "text": "x", "task": "LaMP-5"}, "gold": "t"},
            {"user_id": "u1", "query": {"query_id": "2", "text": "y", "task": "LaMP-7"}, "gold": "t"},
        ]
        path = tmp_path / "mixed.jsonl"
        path.write_text("\n".join(json.dumps(line) for line in lines), encoding="utf-8")
        with pytest.raises(ParseError):
            load_dataset(path)


class TestEvalCase:
    """Test cases for EvalCase gold validation."""

    def test_rating_gold(self):
        """Test that LaMP-3 golds are integer ratings 1-5."""
        history = make_history(["a"])
        EvalCase(user_id="u1", query=make_query(task="LaMP-3"), gold="4", history_ref=history)
        with pytest.raises(ValueError):
            EvalCase(user_id="u1", query=make_query(task="LaMP-3"), gold="7", history_ref=history)
        with pytest.raises(ValueError):
            EvalCase(user_id="u1", query=make_query(task="LaMP-5"), gold=3.0, history_ref=history)
