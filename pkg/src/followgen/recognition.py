"""Stage 1: identify the topic entity page for a question-answer pair.

Extract a one-word Topic plus n Keywords from the QA via the chat backend,
retrieve candidate pages by iteratively narrowing a title search with
keyword body filters, then re-rank candidates by the length-normalized
query log-likelihood under the conditional scorer (condition = page
definition, target = topic+keywords query).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import log
from pathlib import Path

from .backends.base import BackendSet, GenerationParams, WikiPage
from .errors import EmptyCandidatesError, ExtractionUnparseableError
from .prompting import EXTRACT_KEY_INFO, load_template
from .textutil import STOPWORDS, tokenize

FALLBACK_LIMIT = 10


@dataclass(frozen=True)
class QAPair:
    question: str
    answer: str

    def validate(self) -> None:
        if not self.question or not self.answer:
            raise ValueError("question and answer must both be non-empty")


@dataclass(frozen=True)
class KeyInfo:
    """One-word topic plus n distinct lowercase keywords, in extraction order."""

    topic: str
    keywords: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.topic or any(ch.isspace() for ch in self.topic):
            raise ValueError(f"topic must be one word, got {self.topic!r}")
        lowered = [k.lower() for k in self.keywords]
        if len(set(lowered)) != len(lowered):
            raise ValueError("keywords must be pairwise distinct")
        if self.topic.lower() in lowered:
            raise ValueError("no keyword may equal the topic")

    @property
    def query_text(self) -> str:
        """Topic and keywords concatenated in extraction order."""
        return " ".join([self.topic, *self.keywords])


@dataclass(frozen=True)
class RankedPage:
    page: WikiPage
    log_score: float


@dataclass(frozen=True)
class RecognitionConfig:
    n_keywords: int = 3
    candidate_limit: int = 50
    scorer_parallelism: int = 4
    prompts_dir: str | Path | None = None


@dataclass
class RecognitionResult:
    """Top page plus the intermediates the trace and ablations need."""

    page: WikiPage
    key_info: KeyInfo
    candidates: list[WikiPage]
    ranking: list[RankedPage]
    first_retrieved: WikiPage = field(init=False)

    def __post_init__(self) -> None:
        self.first_retrieved = self.candidates[0]


def _parse_extraction_reply(reply: str, n: int) -> tuple[str, list[str]] | None:
    topic = None
    keywords: list[str] = []
    for line in reply.splitlines():
        line = line.strip()
        if line.upper().startswith("TOPIC:"):
            topic = line[len("TOPIC:") :].strip()
        elif line.upper().startswith("KEYWORDS:"):
            raw = line[len("KEYWORDS:") :]
            keywords = [k.strip().lower() for k in raw.split(",") if k.strip()]
    if not topic or any(ch.isspace() for ch in topic):
        return None
    deduped: list[str] = []
    for kw in keywords:
        if kw != topic.lower() and kw not in deduped and not any(ch.isspace() for ch in kw):
            deduped.append(kw)
    return topic, deduped[:n]


def _pad_keywords(existing: list[str], topic: str, qa: QAPair, n: int) -> list[str]:
    """Fill missing keywords from the highest-frequency non-stopword QA tokens."""
    tokens = tokenize(qa.question + " " + qa.answer)
    freq: dict[str, int] = {}
    first: dict[str, int] = {}
    for pos, tok in enumerate(tokens):
        if tok in STOPWORDS:
            continue
        freq[tok] = freq.get(tok, 0) + 1
        first.setdefault(tok, pos)
    for tok in sorted(freq, key=lambda t: (-freq[t], first[t])):
        if len(existing) >= n:
            break
        if tok != topic.lower() and tok not in existing:
            existing.append(tok)
    return existing


def extract_key_info(
    qa: QAPair,
    backends: BackendSet,
    n: int = 3,
    params: GenerationParams = GenerationParams(),
    prompts_dir: str | Path | None = None,
) -> KeyInfo:
    """Prompt for TOPIC/KEYWORDS, parse, and enforce the KeyInfo invariants.

    One re-prompt on a parse failure or a short keyword list; a still-short
    list is padded from QA token frequencies; a still-unparseable reply is
    an error.
    """
    qa.validate()
    if n < 1:
        raise ValueError("n must be >= 1")
    template = load_template(EXTRACT_KEY_INFO, prompts_dir)
    prompt = template.render(question=qa.question, answer=qa.answer, n=n)
    parsed = _parse_extraction_reply(backends.chat.chat_complete(prompt, params), n)
    if parsed is None or len(parsed[1]) < n:
        if parsed is None:
            retry_prompt = prompt
        else:
            missing = n - len(parsed[1])
            retry_prompt = (
                f"{prompt}\nYour previous KEYWORDS line was short: "
                f"include {missing} more distinct keywords, {n} in total."
            )
        retried = _parse_extraction_reply(backends.chat.chat_complete(retry_prompt, params), n)
        if retried is not None and (parsed is None or len(retried[1]) > len(parsed[1])):
            parsed = retried
    if parsed is None:
        raise ExtractionUnparseableError("no TOPIC/KEYWORDS reply after retry")
    topic, keywords = parsed
    if len(keywords) < n:
        keywords = _pad_keywords(keywords, topic, qa, n)
    if len(keywords) < n:
        raise ExtractionUnparseableError(f"could not assemble {n} keywords")
    return KeyInfo(topic=topic, keywords=tuple(keywords[:n]))


def iterative_retrieve(
    info: KeyInfo,
    backends: BackendSet,
    limit: int = 50,
) -> list[WikiPage]:
    """Narrow title matches for the topic by keyword body filters.

    A keyword that would empty the candidate set is skipped; a single
    remaining candidate terminates the search early. When the title search
    finds nothing, fall back to full-text search of topic + keywords.
    """
    candidates = backends.search.search_pages(must_title_contain=info.topic, limit=limit)
    if not candidates:
        candidates = _fulltext_fallback(info, backends)
        if not candidates:
            raise EmptyCandidatesError(f"no pages for topic {info.topic!r}")
    for keyword in info.keywords:
        if len(candidates) == 1:
            break
        needle = keyword.lower()
        narrowed = [page for page in candidates if needle in page.body.lower()]
        if narrowed:
            candidates = narrowed
    return candidates


def _fulltext_fallback(info: KeyInfo, backends: BackendSet) -> list[WikiPage]:
    terms = [info.topic, *info.keywords]
    pages = backends.search.search_pages(must_body_contain=terms, limit=FALLBACK_LIMIT)
    if pages:
        return pages
    merged: list[WikiPage] = []
    seen: set[str] = set()
    for term in terms:
        for page in backends.search.search_pages(must_body_contain=[term], limit=FALLBACK_LIMIT):
            if page.title not in seen:
                seen.add(page.title)
                merged.append(page)
        if len(merged) >= FALLBACK_LIMIT:
            break
    return merged[:FALLBACK_LIMIT]


def rerank(
    query_text: str,
    candidates: list[WikiPage],
    backends: BackendSet,
    parallelism: int = 4,
) -> list[RankedPage]:
    """Order candidates by length-normalized query log-likelihood.

    log_score = sum of per-token logprobs - ln(token count), scored with the
    page definition as condition. Ties keep the original retrieval order.
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    for page in candidates:
        if not page.definition:
            raise ValueError(f"candidate {page.title!r} has no definition")

    def score(page: WikiPage) -> float:
        result = backends.scorer.score_conditional(page.definition, query_text)
        return result.total - log(len(result.logprobs))

    if parallelism > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            scores = list(pool.map(score, candidates))
    else:
        scores = [score(page) for page in candidates]
    ranked = [RankedPage(page, s) for page, s in zip(candidates, scores)]
    return sorted(ranked, key=lambda rp: -rp.log_score)


def recognize(
    qa: QAPair,
    backends: BackendSet,
    config: RecognitionConfig = RecognitionConfig(),
    params: GenerationParams = GenerationParams(),
    observer=None,
    skip_rerank: bool = False,
) -> RecognitionResult:
    """Full stage 1: extraction, retrieval, re-ranking; top page wins.

    A single retrieved candidate skips the re-ranker (the outcome cannot
    change); its ranking entry carries a zero score. An observer callback
    (stage name, value) sees each intermediate as soon as it exists, so a
    downstream trace keeps partial results when a later step fails.
    skip_rerank keeps the raw retrieval order and picks its first page.
    """
    notify = observer or (lambda stage, value: None)
    info = extract_key_info(
        qa, backends, n=config.n_keywords, params=params, prompts_dir=config.prompts_dir
    )
    notify("key_info", info)
    candidates = iterative_retrieve(info, backends, limit=config.candidate_limit)
    if skip_rerank or len(candidates) == 1:
        ranking = [RankedPage(page, 0.0) for page in candidates]
    else:
        ranking = rerank(
            info.query_text, candidates, backends, parallelism=config.scorer_parallelism
        )
    notify("ranking", ranking)
    return RecognitionResult(
        page=ranking[0].page,
        key_info=info,
        candidates=candidates,
        ranking=ranking,
    )
