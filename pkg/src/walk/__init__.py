"""
Context-aware random walk over the memory graph, plus heuristic selectors.
"""

from .scoring import query_score, recency_gaps, transition_score
from .walker import ContextWalker, run_walk, sample_index, transition_distribution, traversal_stats
from .baselines import select_dense, select_random, select_recent

__all__ = [
    'query_score',
    'recency_gaps',
    'transition_score',
    'ContextWalker',
    'run_walk',
    'sample_index',
    'transition_distribution',
    'traversal_stats',
    'select_dense',
    'select_random',
    'select_recent',
]
