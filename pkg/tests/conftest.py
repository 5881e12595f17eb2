from __future__ import annotations

import pytest

from followgen.backends import (
    BackendSet,
    MockChatBackend,
    MockEmbeddingBackend,
    MockScorerBackend,
    PageStore,
    WikiPage,
)
from followgen.interface.config import bundled_fixture_dir, bundled_triplets_path


def make_page(title: str, definition: str = "", body: str = "", url: str = "") -> WikiPage:
    definition = definition or f"{title} is a test page."
    return WikiPage(
        title=title,
        url=url or f"https://example.org/wiki/{title.replace(' ', '_')}",
        definition=definition,
        body=body or definition,
    )


FIVE_PAGES = [
    make_page("Speed of sound", body="The speed of sound depends on temperature and medium."),
    make_page("Sound", body="Sound is a vibration travelling through a medium."),
    make_page("Gravity", body="Gravity pulls masses together."),
    make_page("Volcano", body="A volcano vents lava and ash."),
    make_page("Glacier", body="A glacier is slow-moving ice."),
]


def backend_set(
    chat: MockChatBackend | None = None,
    scorer: MockScorerBackend | None = None,
    pages: list[WikiPage] | None = None,
) -> BackendSet:
    return BackendSet(
        chat=chat or MockChatBackend(),
        embedder=MockEmbeddingBackend(),
        scorer=scorer or MockScorerBackend(),
        search=PageStore(pages if pages is not None else FIVE_PAGES),
    )


@pytest.fixture
def mock_backends() -> BackendSet:
    return backend_set()


@pytest.fixture
def fixture_backends() -> BackendSet:
    return BackendSet(
        chat=MockChatBackend(),
        embedder=MockEmbeddingBackend(),
        scorer=MockScorerBackend(),
        search=PageStore.from_dir(bundled_fixture_dir()),
    )


@pytest.fixture
def fixture_triplets_path():
    return bundled_triplets_path()
