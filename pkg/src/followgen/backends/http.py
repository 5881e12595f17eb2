"""HTTP+JSON production backends for chat, embeddings, and conditional scoring.

Endpoint URLs, model names, and API keys come from explicit arguments,
a config file entry, or environment variables:

    FOLLOWGEN_CHAT_URL / FOLLOWGEN_EMBED_URL / FOLLOWGEN_SCORE_URL
    FOLLOWGEN_API_KEY
    FOLLOWGEN_CHAT_MODEL / FOLLOWGEN_EMBED_MODEL / FOLLOWGEN_SCORE_MODEL

Wire format (all POST, JSON body/response):

    {url}            chat: {"model", "prompt", "temperature", "max_tokens", "seed"} -> {"text"}
    {url}            embed: {"model", "text"} -> {"values": [..]}
    {url}            score: {"model", "condition", "target"} -> {"tokens": [..], "logprobs": [..]}

429 and 5xx responses are retried (3 attempts, exponential backoff).
"""

from __future__ import annotations

import os
from typing import Any

import httpx

from ..errors import (
    BackendUnreachableError,
    EmptyCompletionError,
    RateLimitedError,
)
from .base import Embedding, GenerationParams, TokenLogProbs, require_prompt
from .retry import with_retries


class _HttpClient:
    def __init__(
        self,
        url: str,
        model: str = "",
        api_key: str | None = None,
        timeout_s: float = 60.0,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        if not url:
            raise ValueError("backend url must be configured")
        self.url = url
        self.model = model
        headers = {}
        key = api_key if api_key is not None else os.environ.get("FOLLOWGEN_API_KEY")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self._client = httpx.Client(headers=headers, timeout=timeout_s, transport=transport)

    def post(self, payload: dict[str, Any]) -> dict[str, Any]:
        def attempt() -> dict[str, Any]:
            try:
                response = self._client.post(self.url, json=payload)
            except httpx.HTTPError as err:
                raise BackendUnreachableError(str(err)) from err
            if response.status_code == 429:
                raise RateLimitedError(f"429 from {self.url}")
            if response.status_code >= 500:
                raise BackendUnreachableError(f"{response.status_code} from {self.url}")
            if response.status_code >= 400:
                raise BackendUnreachableError(
                    f"{response.status_code} from {self.url}: {response.text[:200]}"
                )
            return response.json()

        return with_retries(attempt)


class HttpChatBackend:
    def __init__(self, url: str | None = None, model: str | None = None, **kwargs: Any) -> None:
        self._client = _HttpClient(
            url or os.environ.get("FOLLOWGEN_CHAT_URL", ""),
            model or os.environ.get("FOLLOWGEN_CHAT_MODEL", ""),
            **kwargs,
        )

    def chat_complete(self, prompt: str, params: GenerationParams) -> str:
        require_prompt(prompt)
        payload = {
            "model": self._client.model,
            "prompt": prompt,
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
            "seed": params.seed,
        }
        data = self._client.post(payload)
        text = data.get("text", "")
        if not text:
            raise EmptyCompletionError("backend returned empty text")
        return text


class HttpEmbeddingBackend:
    def __init__(self, url: str | None = None, model: str | None = None, **kwargs: Any) -> None:
        self._client = _HttpClient(
            url or os.environ.get("FOLLOWGEN_EMBED_URL", ""),
            model or os.environ.get("FOLLOWGEN_EMBED_MODEL", ""),
            **kwargs,
        )
        self._dim: int | None = None

    def embed(self, text: str) -> Embedding:
        if not text:
            raise ValueError("text must be non-empty")
        data = self._client.post({"model": self._client.model, "text": text})
        embedding = Embedding(tuple(float(v) for v in data["values"]))
        if self._dim is None:
            self._dim = embedding.dim
        elif embedding.dim != self._dim:
            raise BackendUnreachableError(
                f"embedding dim changed: {embedding.dim} != {self._dim}"
            )
        return embedding


class HttpScorerBackend:
    def __init__(self, url: str | None = None, model: str | None = None, **kwargs: Any) -> None:
        self._client = _HttpClient(
            url or os.environ.get("FOLLOWGEN_SCORE_URL", ""),
            model or os.environ.get("FOLLOWGEN_SCORE_MODEL", ""),
            **kwargs,
        )

    def score_conditional(self, condition: str, target: str) -> TokenLogProbs:
        data = self._client.post(
            {"model": self._client.model, "condition": condition, "target": target}
        )
        return TokenLogProbs(
            tuple(str(t) for t in data["tokens"]),
            tuple(float(lp) for lp in data["logprobs"]),
        )
