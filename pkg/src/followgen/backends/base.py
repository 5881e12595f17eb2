"""Backend contracts and the domain types they exchange.

Every neural or remote component the pipeline touches (chat generation,
sentence embeddings, conditional sequence scoring, page search, page fetch)
lives behind one of the five protocols below. Production implementations
speak HTTP+JSON (see ``http``); mock implementations are deterministic local
functions (see ``mock`` and ``pagestore``), which is what lets the whole
test suite run offline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable


@dataclass(frozen=True)
class GenerationParams:
    """Sampling knobs for chat completion."""

    temperature: float = 1.0
    max_tokens: int = 256
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class Embedding:
    """Fixed-length sentence embedding."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("embedding must be non-empty")
        if any(not math.isfinite(v) for v in self.values):
            raise ValueError("embedding contains non-finite values")

    @property
    def dim(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class TokenLogProbs:
    """Per-token natural-log conditional probabilities for a target sequence."""

    tokens: tuple[str, ...]
    logprobs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.logprobs):
            raise ValueError("tokens and logprobs must have equal length")
        for lp in self.logprobs:
            if not math.isfinite(lp) or lp > 0:
                raise ValueError(f"logprob must be finite and <= 0, got {lp}")

    @property
    def total(self) -> float:
        return sum(self.logprobs)


@dataclass(frozen=True)
class WikiPage:
    """An encyclopedia page: the definition is its first-paragraph summary."""

    title: str
    url: str
    definition: str
    body: str

    def __post_init__(self) -> None:
        if not self.title:
            raise ValueError("page title must be non-empty")


@runtime_checkable
class ChatBackend(Protocol):
    def chat_complete(self, prompt: str, params: GenerationParams) -> str:
        """Generate text for a prompt. Mock backends are pure in (prompt, seed)."""
        ...


@runtime_checkable
class EmbeddingBackend(Protocol):
    def embed(self, text: str) -> Embedding:
        """Deterministic fixed-dimension embedding of the text."""
        ...


@runtime_checkable
class ScorerBackend(Protocol):
    def score_conditional(self, condition: str, target: str) -> TokenLogProbs:
        """One logprob per target token, conditioned on the condition text."""
        ...


@runtime_checkable
class SearchBackend(Protocol):
    def search_pages(
        self,
        must_title_contain: str | None = None,
        must_body_contain: Sequence[str] = (),
        limit: int = 50,
    ) -> list[WikiPage]:
        """Pages satisfying every constraint, by descending relevance, at most limit."""
        ...

    def fetch_page(self, title_or_url: str) -> WikiPage:
        """Exact page lookup by title or URL; raises PageNotFoundError on a miss."""
        ...


@dataclass
class BackendSet:
    """The concrete backend instances one pipeline run is wired to."""

    chat: ChatBackend
    embedder: EmbeddingBackend
    scorer: ScorerBackend
    search: SearchBackend

    extras: dict = field(default_factory=dict)


def require_prompt(prompt: str) -> None:
    if not prompt:
        raise ValueError("prompt must be non-empty")
