"""
Semantic-breakpoint segmentation of a chronological history.

A candidate break sits between consecutive records whose cosine similarity is
below the threshold (absolute tau, or mean - tau * std of all consecutive
similarities). Candidates are accepted left to right when the segment they
close has at least min_size records; segments longer than max_size are then
split at their lowest internal similarity.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from src.core.exceptions import AlignmentError, PreconditionError
from src.graph import cluster_behaviors
from src.graph.kmeans import as_matrix, normalize_rows
from src.models import BehaviorRecord, Embedding, Segment, SegmentationParams, SegmentMode, TauMode

logger = logging.getLogger(__name__)


def consecutive_similarities(embeddings: Sequence[Embedding]) -> List[float]:
    """Cosine similarity of each record with the next one (N-1 values)."""
    if len(embeddings) < 2:
        return []
    unit = normalize_rows(as_matrix(embeddings))
    return np.einsum("ij,ij->i", unit[:-1], unit[1:]).tolist()


def breakpoint_threshold(similarities: Sequence[float], params: SegmentationParams) -> float:
    if params.tau_mode is TauMode.ABSOLUTE:
        return params.tau
    values = np.asarray(similarities, dtype=np.float64)
    if values.max() == values.min():
        # no spread, no drop
        return float("-inf")
    return float(values.mean() - params.tau * values.std())


def accept_breakpoints(candidates: Sequence[int], min_size: int) -> List[int]:
    """Greedy left-to-right filter; a break at p closes the segment [last, p)."""
    accepted, last = [], 0
    for position in candidates:
        if position - last >= min_size:
            accepted.append(position)
            last = position
    return accepted


def split_position(similarities: Sequence[float], start: int, end: int, min_size: int, max_size: int) -> int:
    """
    Where to split the inclusive range [start, end] that exceeds max_size.

    Positions p break before record p and always leave min..max records on the
    left. A range that is not the last of the history must also leave at least
    min_size records on the right; the last range may end short. The lowest
    similarity wins, ties to the later position.
    """
    length = end - start + 1
    pool = range(start + min_size, start + max_size + 1)
    if end < len(similarities):
        pool = [p for p in pool if length - (p - start) >= min_size]
    return min(pool, key=lambda p: (similarities[p - 1], -p))


def _enforce_max_size(similarities, start: int, end: int, params: SegmentationParams) -> List[int]:
    breaks = []
    while end - start + 1 > params.max_size:
        position = split_position(similarities, start, end, params.min_size, params.max_size)
        breaks.append(position)
        start = position
    return breaks


def segment_by_breakpoints(similarities: Sequence[float], params: SegmentationParams) -> List[List[int]]:
    """
    Breakpoint segmentation of N = len(similarities) + 1 records.

    Returns:
        List[List[int]]: Local positions of each segment, in order
    """
    n = len(similarities) + 1
    breaks = []
    if similarities:
        threshold = breakpoint_threshold(similarities, params)
        candidates = [i + 1 for i, sim in enumerate(similarities) if sim < threshold]
        breaks = accept_breakpoints(candidates, params.min_size)

    bounds = [0] + breaks + [n]
    final = []
    for start, stop in zip(bounds, bounds[1:]):
        final.append(start)
        final.extend(_enforce_max_size(similarities, start, stop - 1, params))
    final.append(n)
    return [list(range(a, b)) for a, b in zip(final, final[1:])]


def segment_history(
    records: Sequence[BehaviorRecord],
    embeddings: Sequence[Embedding],
    params: SegmentationParams,
    first_segment_id: int = 1,
) -> List[Segment]:
    """
    Group records for local summarization.

    Args:
        records: Chronological records (a whole history or an update batch)
        embeddings: One embedding per record
        params: Segmentation parameters; params.mode selects breakpoints, K-means or one segment
        first_segment_id: Id of the first produced segment

    Returns:
        List[Segment]: Segments over the records' seq_index values, in order

    Raises:
        PreconditionError: No records
        AlignmentError: Embedding count differs from record count
    """
    if not records:
        raise PreconditionError("cannot segment an empty history")
    if len(records) != len(embeddings):
        raise AlignmentError(f"{len(embeddings)} embeddings for {len(records)} records")
    seq = [record.seq_index for record in records]

    if params.mode is SegmentMode.NONE:
        return [Segment(segment_id=first_segment_id, start_seq=seq[0], end_seq=seq[-1])]

    if params.mode is SegmentMode.KMEANS:
        assignment = cluster_behaviors(embeddings, params.k, params.seed)
        segments = []
        for label in range(assignment.k):
            members = [seq[i] for i in assignment.members(label)]
            segments.append(Segment(
                segment_id=first_segment_id + label,
                start_seq=members[0],
                end_seq=members[-1],
                members=members,
            ))
        return segments

    similarities = consecutive_similarities(embeddings)
    groups = segment_by_breakpoints(similarities, params)
    segments = []
    for offset, group in enumerate(groups):
        boundary: Optional[float] = similarities[group[0] - 1] if group[0] > 0 else None
        segments.append(Segment(
            segment_id=first_segment_id + offset,
            start_seq=seq[group[0]],
            end_seq=seq[group[-1]],
            boundary_similarity=boundary,
        ))
    logger.debug(f"Segmented {len(records)} records into {len(segments)} segments")
    return segments
