"""Latent Dirichlet Allocation via collapsed Gibbs sampling, plus the
LDA-based topic-consistency score.

The sampler is deterministic for a fixed seed (stdlib Mersenne Twister,
pure-Python float arithmetic) and the inner loop is hand-tuned: desk-scale
corpora (a few hundred documents) fit in seconds at the 500-iteration
default.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

import numpy as np

from ..errors import CorpusTooSmallError
from ..textutil import content_tokens

DEFAULT_ITERATIONS = 500
DEFAULT_ETA = 0.01


@dataclass
class LdaModel:
    n_topics: int
    topic_word: np.ndarray  # shape (K, V); rows sum to 1
    vocab: dict[str, int]
    iterations: int
    seed: int

    def top_words(self, n: int) -> list[list[str]]:
        """Top-n words per topic by probability; ties break lexicographically."""
        terms = sorted(self.vocab, key=self.vocab.get)
        out = []
        for row in self.topic_word:
            ranked = sorted(zip(row, terms), key=lambda item: (-item[0], item[1]))
            out.append([term for _, term in ranked[:n]])
        return out


def lda_fit(
    docs: list[list[str]],
    n_topics: int,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    eta: float = DEFAULT_ETA,
) -> LdaModel:
    """Fit LDA on tokenized documents with collapsed Gibbs sampling.

    alpha = 50 / n_topics, eta = 0.01. Requires at least n_topics non-empty
    documents.
    """
    nonempty = [doc for doc in docs if doc]
    if len(nonempty) < n_topics:
        raise CorpusTooSmallError(
            f"need >= {n_topics} non-empty docs, got {len(nonempty)}"
        )
    vocab: dict[str, int] = {}
    for doc in nonempty:
        for token in doc:
            if token not in vocab:
                vocab[token] = len(vocab)
    doc_ids = [[vocab[token] for token in doc] for doc in nonempty]

    alpha = 50.0 / n_topics
    n_term_topic, n_topic = _gibbs(doc_ids, n_topics, len(vocab), alpha, eta, iterations, seed)

    topic_word = np.array(n_term_topic, dtype=float).T + eta
    topic_word /= topic_word.sum(axis=1, keepdims=True)
    return LdaModel(
        n_topics=n_topics,
        topic_word=topic_word,
        vocab=vocab,
        iterations=iterations,
        seed=seed,
    )


def _gibbs(
    doc_ids: list[list[int]],
    n_topics: int,
    vocab_size: int,
    alpha: float,
    eta: float,
    iterations: int,
    seed: int,
) -> tuple[list[list[int]], list[int]]:
    rng = Random(seed)
    rand = rng.random
    randrange = rng.randrange
    topics = range(n_topics)

    n_doc_topic = [[0] * n_topics for _ in doc_ids]
    n_term_topic = [[0] * n_topics for _ in range(vocab_size)]
    n_topic = [0] * n_topics
    assignments: list[list[int]] = []
    for m, doc in enumerate(doc_ids):
        per_doc = n_doc_topic[m]
        doc_z = []
        for term in doc:
            k = randrange(n_topics)
            doc_z.append(k)
            per_doc[k] += 1
            n_term_topic[term][k] += 1
            n_topic[k] += 1
        assignments.append(doc_z)

    eta_total = vocab_size * eta
    cumulative = [0.0] * n_topics
    for _ in range(iterations):
        for m, doc in enumerate(doc_ids):
            per_doc = n_doc_topic[m]
            doc_z = assignments[m]
            for j, term in enumerate(doc):
                k = doc_z[j]
                per_doc[k] -= 1
                per_term = n_term_topic[term]
                per_term[k] -= 1
                n_topic[k] -= 1
                total = 0.0
                for kk in topics:
                    total += (per_term[kk] + eta) / (n_topic[kk] + eta_total) * (per_doc[kk] + alpha)
                    cumulative[kk] = total
                draw = rand() * total
                k = 0
                while cumulative[k] < draw:
                    k += 1
                doc_z[j] = k
                per_doc[k] += 1
                per_term[k] += 1
                n_topic[k] += 1
    return n_term_topic, n_topic


def topic_consistency(
    pairs: list[tuple[str, str]],
    n_topics: int = 10,
    top_n: int = 10,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> float:
    """Topic-word co-occurrence between contexts and their questions.

    Fits LDA jointly on all contexts and questions as separate documents
    (lowercased, stopword-filtered). For each topic with top-N word set W
    and each pair, the score is |W intersected with both texts| / N; the
    result averages over topics, then over pairs, landing in [0, 1].
    """
    if not pairs:
        raise ValueError("pairs must be non-empty")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    docs = [content_tokens(context) for context, _ in pairs]
    docs += [content_tokens(question) for _, question in pairs]
    model = lda_fit(docs, n_topics, iterations=iterations, seed=seed)
    topic_sets = [set(words) for words in model.top_words(top_n)]
    per_pair = []
    for context, question in pairs:
        context_tokens = set(content_tokens(context))
        question_tokens = set(content_tokens(question))
        scores = [
            len(words & context_tokens & question_tokens) / top_n for words in topic_sets
        ]
        per_pair.append(sum(scores) / len(scores))
    return sum(per_pair) / len(per_pair)
