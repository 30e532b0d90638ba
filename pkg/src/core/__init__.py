"""
Core module - exceptions, history loading and store persistence.

The memory builder lives in ``src.core.builder``; it depends on the provider,
graph and cognition packages and is therefore not imported here.
"""

from .exceptions import (
    MemWeaverError,
    PreconditionError,
    ParseError,
    HistoryValidationError,
    StoreIOError,
    SchemaVersionError,
    FingerprintMismatch,
    AlignmentError,
    StaleBatchError,
    IsolatedNode,
    ProviderError,
    ProviderUnavailable,
    DimensionMismatch,
    EmptyCompletion,
    UnknownTask,
    OverflowAfterTruncation,
    UnparseableLabel,
    LengthMismatch,
    EmptyDataset,
    MissingGraph,
)
from .history import build_history, load_history, load_query, load_records, order_records
from .store import load_store, save_store, store_from_json, store_to_json, validate_store

__all__ = [
    'MemWeaverError',
    'PreconditionError',
    'ParseError',
    'HistoryValidationError',
    'StoreIOError',
    'SchemaVersionError',
    'FingerprintMismatch',
    'AlignmentError',
    'StaleBatchError',
    'IsolatedNode',
    'ProviderError',
    'ProviderUnavailable',
    'DimensionMismatch',
    'EmptyCompletion',
    'UnknownTask',
    'OverflowAfterTruncation',
    'UnparseableLabel',
    'LengthMismatch',
    'EmptyDataset',
    'MissingGraph',
    'build_history',
    'load_history',
    'load_query',
    'load_records',
    'order_records',
    'load_store',
    'save_store',
    'store_from_json',
    'store_to_json',
    'validate_store',
]
