"""Stage 3: knowledge fusion and follow-up question generation.

Fusion continues the selected Wiki knowledge conditioned on the QA pair so
the model binds external knowledge to the context; the final prompt then
asks for one follow-up question. Real backends are noisy, so the question
text goes through light post-processing (quote/label stripping, first
question segment, terminal '?').
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path

from .backends.base import BackendSet, GenerationParams
from .errors import DuplicateQuestionError, EmptyContinuationError, NonQuestionOutputError
from .prompting import CONTINUE_KNOWLEDGE, GENERATE_FOLLOWUP, load_template
from .recognition import QAPair

_LABEL_RE = re.compile(r"^(follow[\s-]?up question|question|q)\s*[:\-]\s*", re.IGNORECASE)
_QUOTE_PAIRS = {'"': '"', "'": "'", "“": "”", "‘": "’"}

_INTERROGATIVE_STARTERS = frozenset(
    """
    how what why when where who whom whose which can could do does did is are
    was were will would should shall may might must have has had am
    """.split()
)


@dataclass(frozen=True)
class RelatedKnowledge:
    """Selected Wiki knowledge plus its context-conditioned continuation."""

    wiki_text: str
    fused_text: str
    source_node_id: str = ""

    def __post_init__(self) -> None:
        if not self.fused_text.startswith(self.wiki_text):
            raise ValueError("fused_text must start with wiki_text verbatim")

    @property
    def continuation(self) -> str:
        return self.fused_text[len(self.wiki_text) :]


@dataclass(frozen=True)
class FollowUpQuestion:
    text: str
    trace_id: str = ""

    def __post_init__(self) -> None:
        if not self.text or not self.text.endswith("?"):
            raise ValueError("follow-up question must be non-empty and end with '?'")


def continue_knowledge(
    qa: QAPair,
    wiki_text: str,
    backends: BackendSet,
    params: GenerationParams = GenerationParams(),
    prompts_dir: str | Path | None = None,
    source_node_id: str = "",
) -> RelatedKnowledge:
    """Continue-write the Wiki knowledge conditioned on the QA pair.

    One retry on an empty reply; fused_text is the wiki text plus the
    continuation joined by a single space.
    """
    if not wiki_text:
        raise ValueError("wiki_text must be non-empty")
    template = load_template(CONTINUE_KNOWLEDGE, prompts_dir)
    prompt = template.render(question=qa.question, answer=qa.answer, wiki_text=wiki_text)
    continuation = ""
    for attempt in range(2):
        continuation = backends.chat.chat_complete(prompt, _attempt_params(params, attempt)).strip()
        if continuation:
            break
    if not continuation:
        raise EmptyContinuationError("continuation empty after retry")
    return RelatedKnowledge(
        wiki_text=wiki_text,
        fused_text=f"{wiki_text} {continuation}",
        source_node_id=source_node_id,
    )


def generate_followup(
    qa: QAPair,
    knowledge: RelatedKnowledge,
    backends: BackendSet,
    params: GenerationParams = GenerationParams(),
    prompts_dir: str | Path | None = None,
    trace_id: str = "",
) -> FollowUpQuestion:
    """Ask for the follow-up question and post-process the reply.

    Retries once when post-processing cannot produce a '?'-terminated text
    or the question is byte-identical to the input question.
    """
    template = load_template(GENERATE_FOLLOWUP, prompts_dir)
    prompt = template.render(
        question=qa.question, answer=qa.answer, related_knowledge=knowledge.fused_text
    )
    failure: Exception = NonQuestionOutputError("no reply")
    for attempt in range(2):
        reply = backends.chat.chat_complete(prompt, _attempt_params(params, attempt))
        cleaned = clean_question(reply)
        if cleaned is None:
            failure = NonQuestionOutputError(f"unusable reply: {reply[:120]!r}")
            continue
        if cleaned == qa.question:
            failure = DuplicateQuestionError("generated question repeats the input question")
            continue
        return FollowUpQuestion(text=cleaned, trace_id=trace_id)
    raise failure


def clean_question(raw: str) -> str | None:
    """Normalize a backend reply into one question, or None if impossible.

    Strips wrapping quotes and leading labels, keeps the first
    '?'-terminated segment, and appends '?' to an unterminated
    interrogative.
    """
    text = raw.strip()
    changed = True
    while changed and text:
        changed = False
        close = _QUOTE_PAIRS.get(text[0])
        if close and text.endswith(close) and len(text) >= 2:
            text = text[1:-1].strip()
            changed = True
        stripped = _LABEL_RE.sub("", text)
        if stripped != text:
            text = stripped.strip()
            changed = True
    if not text:
        return None
    mark = text.find("?")
    if mark != -1:
        return text[: mark + 1].strip()
    first_word = re.split(r"\W+", text, maxsplit=1)[0].lower()
    if first_word in _INTERROGATIVE_STARTERS:
        return text.rstrip(".! ") + "?"
    return None


def _attempt_params(params: GenerationParams, attempt: int) -> GenerationParams:
    if attempt == 0 or params.seed is None:
        return params
    # Nudge the seed so a seeded backend can produce a different retry.
    return replace(params, seed=params.seed + attempt)
