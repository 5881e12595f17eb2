"""In-memory page corpus serving the search and fetch contracts.

Pages come from a directory of JSON files ({title, url, definition, body})
or are passed in directly. Matching is case-insensitive substring; relevance
is the summed occurrence count of all constraints, with title hits weighted
higher, and ties broken by title so results are stable across runs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import PageNotFoundError
from .base import WikiPage

TITLE_WEIGHT = 3


class PageStore:
    def __init__(self, pages: Iterable[WikiPage] = ()) -> None:
        self._pages: list[WikiPage] = []
        self._by_title: dict[str, WikiPage] = {}
        self._by_url: dict[str, WikiPage] = {}
        for page in pages:
            self.add(page)

    @classmethod
    def from_dir(cls, corpus_dir: str | Path) -> "PageStore":
        """Load every *.json page file in the directory (sorted for stability)."""
        corpus_dir = Path(corpus_dir)
        store = cls()
        for path in sorted(corpus_dir.glob("*.json")):
            raw = json.loads(path.read_text(encoding="utf-8"))
            store.add(
                WikiPage(
                    title=raw["title"],
                    url=raw.get("url", ""),
                    definition=raw.get("definition", ""),
                    body=raw.get("body", ""),
                )
            )
        return store

    def add(self, page: WikiPage) -> None:
        self._pages.append(page)
        self._by_title[page.title.lower()] = page
        if page.url:
            self._by_url[page.url] = page

    def __len__(self) -> int:
        return len(self._pages)

    def search_pages(
        self,
        must_title_contain: str | None = None,
        must_body_contain: Sequence[str] = (),
        limit: int = 50,
    ) -> list[WikiPage]:
        if must_title_contain is None and not must_body_contain:
            raise ValueError("at least one constraint is required")
        if limit <= 0:
            raise ValueError("limit must be positive")
        scored: list[tuple[float, str, WikiPage]] = []
        title_needle = must_title_contain.lower() if must_title_contain else None
        body_needles = [needle.lower() for needle in must_body_contain]
        for page in self._pages:
            title = page.title.lower()
            body = page.body.lower()
            score = 0.0
            if title_needle is not None:
                hits = title.count(title_needle)
                if hits == 0:
                    continue
                score += TITLE_WEIGHT * hits
            satisfied = True
            for needle in body_needles:
                hits = body.count(needle)
                if hits == 0:
                    satisfied = False
                    break
                score += hits
            if not satisfied:
                continue
            scored.append((score, page.title, page))
        scored.sort(key=lambda item: (-item[0], item[1]))
        return [page for _, _, page in scored[:limit]]

    def fetch_page(self, title_or_url: str) -> WikiPage:
        if not title_or_url:
            raise ValueError("identifier must be non-empty")
        page = self._by_url.get(title_or_url) or self._by_title.get(title_or_url.lower())
        if page is None:
            raise PageNotFoundError(title_or_url)
        if not page.definition:
            # A definition-less page cannot seed a node; treat as a miss.
            raise PageNotFoundError(f"{title_or_url} (no definition)")
        return page
