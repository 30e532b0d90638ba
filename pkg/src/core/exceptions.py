"""
Exception hierarchy shared by every memweaver module.

All domain errors derive from MemWeaverError so that callers (and the command
line) can separate expected failures from programming errors.
"""

from typing import Optional


class MemWeaverError(Exception):
    """Base exception class for memory-related errors."""
    pass


class PreconditionError(MemWeaverError, ValueError):
    """Exception raised when an operation is called with inputs it does not accept."""
    pass


class ParseError(MemWeaverError):
    """Exception raised when a history or dataset file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class HistoryValidationError(MemWeaverError):
    """Exception raised when a parsed history violates a record invariant."""
    pass


class StoreIOError(MemWeaverError):
    """Exception raised when a store file cannot be read or written."""
    pass


class SchemaVersionError(MemWeaverError):
    """Exception raised when a store file has an unsupported schema_version."""
    pass


class FingerprintMismatch(MemWeaverError):
    """Exception raised when embeddings from different providers would be mixed."""
    pass


class AlignmentError(MemWeaverError):
    """Exception raised when embeddings are not aligned 1:1 with records."""
    pass


class StaleBatchError(MemWeaverError):
    """Exception raised when an update batch is not strictly newer than the store."""
    pass


class IsolatedNode(MemWeaverError):
    """Exception raised when a walk reaches a node without traversable neighbours."""
    pass


class ProviderError(MemWeaverError):
    """Base exception class for embedding and generation back-ends."""
    pass


class ProviderUnavailable(ProviderError):
    """Exception raised when a remote provider keeps failing after bounded retries."""
    pass


class DimensionMismatch(ProviderError):
    """Exception raised when a provider returns vectors of an unexpected size."""
    pass


class EmptyCompletion(ProviderError):
    """Exception raised for an empty prompt or a blank completion."""
    pass


class UnknownTask(MemWeaverError):
    """Exception raised when no prompt template exists for a task."""
    pass


class OverflowAfterTruncation(MemWeaverError):
    """Exception raised when a prompt exceeds the input cap with all behavioral entries dropped."""
    pass


class UnparseableLabel(MemWeaverError):
    """Exception raised when a classification output matches no label."""

    def __init__(self, message: str, raw: str = "", fallback: Optional[str] = None):
        self.raw = raw
        self.fallback = fallback
        super().__init__(message)


class LengthMismatch(MemWeaverError):
    """Exception raised when predictions and references differ in length."""
    pass


class EmptyDataset(MemWeaverError):
    """Exception raised when an evaluation dataset yields no cases."""
    pass


class MissingGraph(MemWeaverError):
    """Exception raised when an operation needs a memory graph the store lacks."""
    pass
