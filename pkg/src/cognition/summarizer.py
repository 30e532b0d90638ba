"""
CognitiveSummarizer - local summaries per segment and their global synthesis.

A build makes one generation call per segment plus one global call; an
incremental update summarizes only the new segments and re-synthesizes the
global summary from every local summary in one call.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from src.core.exceptions import AlignmentError, PreconditionError, ProviderError, StaleBatchError
from src.models import (
    BehaviorRecord,
    CognitiveMemory,
    Embedding,
    GenerationKind,
    LocalSummary,
    Segment,
    SegmentationParams,
    UserHistory,
)
from src.providers import BaseGenerationProvider
from .prompts import (
    GLOBAL_WORD_LIMIT,
    GLOBAL_WORD_SLACK,
    SummaryPrompt,
    global_summary_prompt,
    local_summary_prompt,
)
from .segmentation import segment_history


class CognitiveSummarizer:
    """
    Builds and updates cognitive memories with one generation provider.

    Local summaries of distinct segments run concurrently, bounded by
    ``max_workers`` (the provider's concurrency limit by default); the global
    call always follows all locals.
    """

    def __init__(
        self,
        provider: BaseGenerationProvider,
        params: SegmentationParams,
        dump_dir: Optional[Union[str, Path]] = None,
        max_workers: Optional[int] = None,
    ):
        self.provider = provider
        self.params = params
        self.dump_dir = Path(dump_dir) if dump_dir else None
        self.max_workers = max_workers or provider.config.max_concurrency
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _dump(self, name: str, prompt: SummaryPrompt) -> None:
        if self.dump_dir is None:
            return
        self.dump_dir.mkdir(parents=True, exist_ok=True)
        (self.dump_dir / f"{name}.txt").write_text(prompt.render(), encoding="utf-8")

    def summarize_segment(self, records: Sequence[BehaviorRecord], segment_id: int = 1) -> str:
        """
        Local summary of one segment.

        Raises:
            PreconditionError: Empty segment
            ProviderUnavailable / EmptyCompletion: From the provider
        """
        if not records:
            raise PreconditionError("cannot summarize an empty segment")
        prompt = local_summary_prompt(segment_id, records)
        self._dump(f"local_{segment_id:04d}", prompt)
        return self.provider.generate(prompt.user, system=prompt.system)

    def synthesize_global(self, local_summaries: Sequence[LocalSummary]) -> str:
        """
        Global summary from local summaries.

        Raises:
            PreconditionError: No local summaries
        """
        if not local_summaries:
            raise PreconditionError("global synthesis needs at least one local summary")
        prompt = global_summary_prompt(local_summaries)
        self._dump("global", prompt)
        summary = self.provider.generate(prompt.user, system=prompt.system)
        words = len(summary.split())
        if (self.provider.config.kind is GenerationKind.REMOTE
                and words > GLOBAL_WORD_LIMIT * (1 + GLOBAL_WORD_SLACK)):
            self.logger.warning(f"Global summary has {words} words, limit is {GLOBAL_WORD_LIMIT}")
        return summary

    def _summarize_segments(
        self,
        segments: Sequence[Segment],
        records_by_seq: Dict[int, BehaviorRecord],
    ) -> List[Optional[LocalSummary]]:
        """Summaries in segment order; None where the provider failed."""

        def run(segment: Segment) -> Optional[LocalSummary]:
            records = [records_by_seq[i] for i in segment.seq_indices]
            try:
                text = self.summarize_segment(records, segment.segment_id)
            except ProviderError as e:
                self.logger.error(f"Local summary of segment {segment.segment_id} failed: {e}")
                return None
            return LocalSummary(segment_id=segment.segment_id, text=text, fingerprint=self.provider.fingerprint)

        if self.max_workers <= 1 or len(segments) <= 1:
            return [run(segment) for segment in segments]
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            return list(executor.map(run, segments))

    def _finish(
        self,
        segments: List[Segment],
        local_summaries: List[LocalSummary],
        failed: int,
        generated_at: Optional[int],
    ) -> CognitiveMemory:
        global_summary, stale = "", True
        if failed:
            self.logger.warning(f"{failed} local summaries failed; cognitive memory marked stale")
        else:
            try:
                global_summary, stale = self.synthesize_global(local_summaries), False
            except ProviderError as e:
                self.logger.error(f"Global synthesis failed: {e}")
        return CognitiveMemory(
            segments=segments,
            local_summaries=local_summaries,
            global_summary=global_summary,
            generated_at=generated_at,
            stale=stale,
            segment_mode=self.params.mode,
        )

    def build(self, history: UserHistory, embeddings: Sequence[Embedding]) -> CognitiveMemory:
        """Segment a history, summarize every segment and synthesize the global summary."""
        if len(history.records) != len(embeddings):
            raise AlignmentError(f"{len(embeddings)} embeddings for {len(history.records)} records")
        segments = segment_history(history.records, embeddings, self.params)
        by_seq = {record.seq_index: record for record in history.records}
        results = self._summarize_segments(segments, by_seq)
        local_summaries = [summary for summary in results if summary is not None]
        memory = self._finish(segments, local_summaries, len(results) - len(local_summaries), history.max_timestamp)
        self.logger.info(f"Cognitive memory: {len(segments)} segments, stale={memory.stale}")
        return memory

    def update(
        self,
        cognitive: CognitiveMemory,
        new_records: Sequence[BehaviorRecord],
        new_embeddings: Sequence[Embedding],
    ) -> CognitiveMemory:
        """
        Segment and summarize a new batch on its own and re-synthesize the global summary.

        Existing segments and local summaries are carried over unchanged.

        Raises:
            StaleBatchError: The batch is not newer than the summarized history
        """
        if not new_records:
            return cognitive
        if len(new_records) != len(new_embeddings):
            raise AlignmentError(f"{len(new_embeddings)} embeddings for {len(new_records)} records")
        if cognitive.generated_at is not None and min(r.timestamp for r in new_records) <= cognitive.generated_at:
            raise StaleBatchError(f"batch is not newer than the summarized history ({cognitive.generated_at})")
        covered = max((i for segment in cognitive.segments for i in segment.seq_indices), default=-1)
        if min(r.seq_index for r in new_records) <= covered:
            raise StaleBatchError("batch overlaps records that are already segmented")

        segments = segment_history(new_records, new_embeddings, self.params, first_segment_id=cognitive.next_segment_id)
        by_seq = {record.seq_index: record for record in new_records}
        results = self._summarize_segments(segments, by_seq)
        new_locals = [summary for summary in results if summary is not None]
        memory = self._finish(
            list(cognitive.segments) + segments,
            list(cognitive.local_summaries) + new_locals,
            len(results) - len(new_locals),
            max(r.timestamp for r in new_records),
        )
        self.logger.info(f"Cognitive update: {len(segments)} new segments, stale={memory.stale}")
        return memory


def summarize_segment(records: Sequence[BehaviorRecord], provider: BaseGenerationProvider, segment_id: int = 1) -> str:
    return CognitiveSummarizer(provider, SegmentationParams()).summarize_segment(records, segment_id)


def synthesize_global(local_summaries: Sequence[LocalSummary], provider: BaseGenerationProvider) -> str:
    return CognitiveSummarizer(provider, SegmentationParams()).synthesize_global(local_summaries)


def build_cognitive(
    history: UserHistory,
    embeddings: Sequence[Embedding],
    params: SegmentationParams,
    provider: BaseGenerationProvider,
) -> CognitiveMemory:
    return CognitiveSummarizer(provider, params).build(history, embeddings)


def incremental_update_cognitive(
    cognitive: CognitiveMemory,
    new_records: Sequence[BehaviorRecord],
    new_embeddings: Sequence[Embedding],
    params: SegmentationParams,
    provider: BaseGenerationProvider,
) -> CognitiveMemory:
    return CognitiveSummarizer(provider, params).update(cognitive, new_records, new_embeddings)
