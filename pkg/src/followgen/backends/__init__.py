"""Pluggable model/service backends: contracts, deterministic mocks, HTTP clients."""

from .base import (
    BackendSet,
    ChatBackend,
    Embedding,
    EmbeddingBackend,
    GenerationParams,
    ScorerBackend,
    SearchBackend,
    TokenLogProbs,
    WikiPage,
)
from .http import HttpChatBackend, HttpEmbeddingBackend, HttpScorerBackend
from .mock import MockChatBackend, MockEmbeddingBackend, MockScorerBackend
from .pagestore import PageStore
from .retry import with_retries

__all__ = [
    "BackendSet",
    "ChatBackend",
    "Embedding",
    "EmbeddingBackend",
    "GenerationParams",
    "HttpChatBackend",
    "HttpEmbeddingBackend",
    "HttpScorerBackend",
    "MockChatBackend",
    "MockEmbeddingBackend",
    "MockScorerBackend",
    "PageStore",
    "ScorerBackend",
    "SearchBackend",
    "TokenLogProbs",
    "WikiPage",
    "with_retries",
]
