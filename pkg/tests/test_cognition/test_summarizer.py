"""
Unit tests for summary prompts and the cognitive summarizer.
"""

import json
from typing import List, Optional

import numpy as np
import pytest

from src.core import PreconditionError, ProviderUnavailable, StaleBatchError
from src.core.history import order_records
from src.cognition import (
    CognitiveSummarizer,
    build_cognitive,
    global_summary_prompt,
    incremental_update_cognitive,
    local_summary_prompt,
    summarize_segment,
    synthesize_global,
)
from src.models import CognitiveMemory, GenerationProviderConfig, LocalSummary, SegmentationParams, SegmentMode, TauMode
from src.providers import BaseGenerationProvider, MockExtractiveGenerator
from tests.factories import GOLDEN_DIR, make_embeddings, make_history, random_embeddings

ABSOLUTE = SegmentationParams(tau_mode=TauMode.ABSOLUTE, tau=0.5, min_size=3)


class FailingGenerator(MockExtractiveGenerator):
    """Mock generator that fails on prompts containing a marker."""

    def __init__(self, marker: str):
        super().__init__(GenerationProviderConfig())
        self.marker = marker

    def _generate(self, prompt: str, system: Optional[str], choices: Optional[List[str]]) -> str:
        if self.marker in prompt:
            raise ProviderUnavailable("endpoint down")
        return super()._generate(prompt, system, choices)


def _two_topic_history():
    texts = [f"coffee brewing guide {i}" for i in range(5)] + [f"marathon training plan {i}" for i in range(5)]
    return make_history(texts), make_embeddings([[1, 0]] * 5 + [[0, 1]] * 5)


class TestPrompts:
    """Golden tests for the summary prompt templates."""

    def test_local_prompt_golden(self):
        """Test the rendered local prompt for a fixed three-record segment."""
        history = make_history([
            "Graph attention networks for molecules",
            "Message passing on citation graphs",
            "Scalable graph transformers",
        ])
        rendered = local_summary_prompt(1, history.records).render() + "\n"
        assert rendered == (GOLDEN_DIR / "local_summary_prompt.txt").read_text(encoding="utf-8")

    def test_global_prompt_golden(self):
        """Test the rendered global prompt for two local summaries."""
        summaries = [
            LocalSummary(segment_id=1, text="Graph learning on molecules and citations.", fingerprint="m"),
            LocalSummary(segment_id=2, text="Protein structure prediction.", fingerprint="m"),
        ]
        rendered = global_summary_prompt(summaries).render() + "\n"
        assert rendered == (GOLDEN_DIR / "global_summary_prompt.txt").read_text(encoding="utf-8")

    def test_whitespace_collapsed(self):
        """Test that record text is put on one line."""
        history = make_history(["multi\nline   text"])
        assert "1. multi line text" in local_summary_prompt(1, history.records).user


class TestSummarizeSegment:
    """Test cases for summarize_segment and synthesize_global."""

    def setup_method(self):
        """Set up test fixtures."""
        self.provider = MockExtractiveGenerator(GenerationProviderConfig())

    def test_coffee_segment(self):
        """Test that a segment about coffee is summarized with 'coffee'."""
        history = make_history(["coffee tasting notes", "cold brew coffee", "coffee grinder review"])
        assert "coffee" in summarize_segment(history.records, self.provider)

    def test_empty_segment(self):
        """Test that an empty segment is refused."""
        with pytest.raises(PreconditionError):
            summarize_segment([], self.provider)

    def test_single_local(self):
        """Test that the global summary is the mock extraction of the global prompt."""
        summary = LocalSummary(segment_id=1, text="espresso espresso latte", fingerprint="m")
        prompt = global_summary_prompt([summary])
        expected = MockExtractiveGenerator(GenerationProviderConfig()).generate(prompt.user, system=prompt.system)
        assert synthesize_global([summary], self.provider) == expected

    def test_no_locals(self):
        """Test that global synthesis needs a local summary."""
        with pytest.raises(PreconditionError):
            synthesize_global([], self.provider)


class TestCognitiveSummarizer:
    """Test cases for building and updating cognitive memories."""

    def setup_method(self):
        """Set up test fixtures."""
        self.provider = MockExtractiveGenerator(GenerationProviderConfig())

    def test_single_record(self):
        """Test two provider calls for a one-record history."""
        history = make_history(["coffee"])
        memory = build_cognitive(history, make_embeddings([[1, 0]]), ABSOLUTE, self.provider)
        assert len(memory.segments) == len(memory.local_summaries) == 1
        assert self.provider.stats["calls"] == 2
        assert memory.global_summary
        assert not memory.stale

    def test_two_segments(self):
        """Test three provider calls for a ten-record, two-segment history."""
        history, embeddings = _two_topic_history()
        memory = build_cognitive(history, embeddings, ABSOLUTE, self.provider)
        assert len(memory.segments) == 2
        assert self.provider.stats["calls"] == 3
        assert "coffee" in memory.local_summaries[0].text
        assert "marathon" in memory.local_summaries[1].text
        assert memory.generated_at == history.max_timestamp

    def test_golden_memory(self):
        """Test the serialized cognitive memory of a two-topic history against the committed file."""
        history = make_history([
            "espresso coffee roasting",
            "coffee brewing espresso",
            "coffee grinder review",
            "marathon running shoes",
            "trail running marathon",
            "running injury recovery",
        ])
        embeddings = make_embeddings([[1, 0]] * 3 + [[3, 4]] * 3)
        params = SegmentationParams(tau_mode=TauMode.ABSOLUTE, tau=0.7, min_size=2)
        memory = build_cognitive(history, embeddings, params, self.provider)
        serialized = json.dumps(memory.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        assert serialized == (GOLDEN_DIR / "cognitive_memory.json").read_text(encoding="utf-8")
        assert CognitiveMemory.model_validate_json(serialized) == memory

    def test_pure_function(self):
        """Test that two builds with the mock provider are equal."""
        history, embeddings = _two_topic_history()
        first = build_cognitive(history, embeddings, ABSOLUTE, self.provider)
        second = build_cognitive(history, embeddings, ABSOLUTE, MockExtractiveGenerator(GenerationProviderConfig()))
        assert first == second

    def test_partial_failure(self):
        """Test that a failed local marks the memory stale and skips the global call."""
        history, embeddings = _two_topic_history()
        provider = FailingGenerator("marathon")
        memory = CognitiveSummarizer(provider, ABSOLUTE, max_workers=1).build(history, embeddings)
        assert memory.stale
        assert memory.global_summary == ""
        assert [s.segment_id for s in memory.local_summaries] == [1]
        assert provider.stats["calls"] == 2

    def test_update_appends(self):
        """Test that an update summarizes only the new segment and keeps old locals."""
        history, embeddings = _two_topic_history()
        memory = build_cognitive(history, embeddings, ABSOLUTE, self.provider)
        batch = order_records(
            [{"behavior_id": f"n{i}", "text": f"sourdough baking {i}", "timestamp": 5000 + i} for i in range(3)],
            start_index=10,
        )
        provider = MockExtractiveGenerator(GenerationProviderConfig())
        updated = incremental_update_cognitive(memory, batch, make_embeddings([[1, 1]] * 3), ABSOLUTE, provider)
        assert provider.stats["calls"] == 2
        assert updated.local_summaries[:2] == memory.local_summaries
        assert [s.segment_id for s in updated.segments] == [1, 2, 3]
        assert updated.segments[2].start_seq == 10
        assert updated.generated_at == 5002

    def test_update_empty_batch(self):
        """Test that an empty batch returns the memory unchanged."""
        history, embeddings = _two_topic_history()
        memory = build_cognitive(history, embeddings, ABSOLUTE, self.provider)
        assert CognitiveSummarizer(self.provider, ABSOLUTE).update(memory, [], []) is memory

    def test_update_stale_batch(self):
        """Test that a batch older than the summarized history is refused."""
        history, embeddings = _two_topic_history()
        memory = build_cognitive(history, embeddings, ABSOLUTE, self.provider)
        batch = order_records([{"behavior_id": "old", "text": "old news", "timestamp": 1}], start_index=10)
        with pytest.raises(StaleBatchError):
            CognitiveSummarizer(self.provider, ABSOLUTE).update(memory, batch, make_embeddings([[1, 0]]))

    def test_call_counts_random(self):
        """Test T+1 calls per build and T_new+1 per update, or T alone when a local fails."""
        rng = np.random.default_rng(100)
        for _ in range(100):
            n = int(rng.integers(1, 40))
            min_size = int(rng.integers(1, 5))
            params = SegmentationParams(
                mode=[SegmentMode.BREAKPOINTS, SegmentMode.KMEANS, SegmentMode.NONE][int(rng.integers(3))],
                tau_mode=TauMode.RELATIVE if rng.random() < 0.5 else TauMode.ABSOLUTE,
                tau=float(rng.uniform(0, 1)),
                min_size=min_size,
                max_size=int(rng.integers(2 * min_size - 1, 15)),
                k=int(rng.integers(1, 6)),
            )
            failing = set()
            if rng.random() < 0.3:
                failing = set(rng.choice(n, size=min(n, int(rng.integers(1, 3))), replace=False).tolist())
            history = make_history([f"zzfail record {i}" if i in failing else f"record {i}" for i in range(n)])
            provider = FailingGenerator("zzfail")
            memory = CognitiveSummarizer(provider, params, max_workers=1).build(history, random_embeddings(n, 4, rng))

            failed = sum(1 for s in memory.segments if any(i in failing for i in s.seq_indices))
            assert provider.stats["calls"] == len(memory.segments) + (0 if failed else 1)
            assert len(memory.local_summaries) == len(memory.segments) - failed
            assert memory.stale == bool(failed)

            size = int(rng.integers(1, 10))
            batch = order_records(
                [{"behavior_id": f"n{i}", "text": f"new record {i}", "timestamp": 10 ** 6 + i} for i in range(size)],
                start_index=n,
            )
            provider = MockExtractiveGenerator(GenerationProviderConfig())
            updated = CognitiveSummarizer(provider, params).update(memory, batch, random_embeddings(size, 4, rng))
            assert provider.stats["calls"] == len(updated.segments) - len(memory.segments) + 1

    def test_dump_prompts(self, tmp_path):
        """Test that every summary prompt is written to the dump directory."""
        history, embeddings = _two_topic_history()
        CognitiveSummarizer(self.provider, ABSOLUTE, dump_dir=tmp_path).build(history, embeddings)
        assert sorted(p.name for p in tmp_path.iterdir()) == ["global.txt", "local_0001.txt", "local_0002.txt"]
        assert (tmp_path / "local_0001.txt").read_text(encoding="utf-8").startswith("You are an expert")
