"""Exception hierarchy shared across the pipeline stages and backends."""

from __future__ import annotations


class FollowgenError(Exception):
    """Base class for all errors raised by this package."""


class BackendError(FollowgenError):
    """Base class for failures of an external model/service backend."""

    retryable = False


class BackendUnreachableError(BackendError):
    retryable = True


class RateLimitedError(BackendError):
    retryable = True


class EmptyCompletionError(BackendError):
    pass


class TokenizationError(BackendError):
    pass


class PageNotFoundError(BackendError):
    pass


class ExtractionUnparseableError(FollowgenError):
    """Key-information extraction produced no parseable TOPIC/KEYWORDS reply."""


class EmptyCandidatesError(FollowgenError):
    """Iterative retrieval found no candidate pages, even after fallback."""


class GraphTooSmallError(FollowgenError):
    """Knowledge-graph construction yielded fewer than two nodes."""


class KeyMismatchError(FollowgenError):
    """Two per-node score maps do not share the same key set."""


class EmptyContinuationError(FollowgenError):
    """The continuation backend returned empty text twice."""


class NonQuestionOutputError(FollowgenError):
    """Post-processing could not produce a '?'-terminated question."""


class DuplicateQuestionError(FollowgenError):
    """The generated follow-up is byte-identical to the input question."""


class CorpusTooSmallError(FollowgenError):
    """Fewer non-empty documents than requested topics."""


class NoNgramsError(FollowgenError):
    """No text long enough to produce a single n-gram."""


class NoTokensError(FollowgenError):
    """Empty token stream where at least one token is required."""


class EmptyAfterFilteringError(FollowgenError):
    """No token pairs survive stopword/vocabulary filtering."""
