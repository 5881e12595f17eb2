"""Shared tokenization used by the metrics, recognition padding, and mock backends.

One tokenizer keeps every metric comparable: lowercase, split on runs of
non-alphanumeric characters. The stopword list is small and applied only
where a caller asks for it (LDA documents, MI vocabulary, keyword padding).
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")

STOPWORDS = frozenset(
    """
    a about above after again all also am an and any are as at be because been
    before being below between both but by can cannot could did do does doing
    down during each few for from further had has have having he her here hers
    him his how i if in into is it its itself just me more most my no nor not
    of off on once only or other our out over own same she should so some such
    than that the their them then there these they this those through to too
    under until up very was we were what when where which while who whom why
    will with would you your yours
    """.split()
)


def tokenize(text: str) -> list[str]:
    """Lowercase tokens of alphanumeric runs, in order of appearance."""
    return _TOKEN_RE.findall(text.lower())


def content_tokens(text: str) -> list[str]:
    """Tokens with stopwords removed."""
    return [t for t in tokenize(text) if t not in STOPWORDS]


def ngrams(tokens: list[str], n: int) -> list[tuple[str, ...]]:
    """All contiguous n-grams of the token list (empty if too short)."""
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]
