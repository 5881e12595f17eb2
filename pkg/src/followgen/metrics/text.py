"""Corpus-free text metrics: distinct-n, TTR, BLEU, perplexity, mutual
information, and embedding semantic distance.

All metrics share one tokenizer (lowercase, alphanumeric runs). MI is the
cross-pair token estimator in bits: X is a token drawn from an initial
question, Y a token from its paired follow-up, joint counts over all
within-pair (x, y) combinations with add-one smoothing and a frequency-
capped vocabulary. Computed as H(X) + H(Y) - H(X, Y) over the smoothed
joint so the all-zero cells never need enumerating.
"""

from __future__ import annotations

import math
from collections import Counter

from ..errors import (
    EmptyAfterFilteringError,
    NoNgramsError,
    NoTokensError,
)
from ..selection import cosine
from ..textutil import content_tokens, ngrams, tokenize

DEFAULT_VOCAB_CAP = 5000


def distinct_n(texts: list[str], n: int) -> float:
    """Unique n-grams across all texts over the total n-gram count."""
    if n < 1:
        raise ValueError("n must be >= 1")
    seen: set[tuple[str, ...]] = set()
    total = 0
    for text in texts:
        grams = ngrams(tokenize(text), n)
        total += len(grams)
        seen.update(grams)
    if total == 0:
        raise NoNgramsError(f"no text has {n} tokens")
    return len(seen) / total


def ttr(texts: list[str], pooled: bool = False) -> float:
    """Type-token ratio, averaged per text (or pooled over the corpus)."""
    token_lists = [tokenize(text) for text in texts]
    token_lists = [tokens for tokens in token_lists if tokens]
    if not token_lists:
        raise NoTokensError("no tokens in any text")
    if pooled:
        pool = [tok for tokens in token_lists for tok in tokens]
        return len(set(pool)) / len(pool)
    ratios = [len(set(tokens)) / len(tokens) for tokens in token_lists]
    return sum(ratios) / len(ratios)


def bleu(candidate: str, reference: str, max_n: int = 1) -> float:
    """BLEU with uniform weights over orders 1..max_n and clipped precision.

    Brevity penalty exp(1 - r/c) applies when the candidate is shorter than
    the reference. Zero overlap at any order gives 0.0 (no smoothing).
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    cand = tokenize(candidate)
    ref = tokenize(reference)
    if not cand or not ref:
        return 0.0
    log_precisions = []
    for order in range(1, max_n + 1):
        cand_grams = Counter(ngrams(cand, order))
        ref_grams = Counter(ngrams(ref, order))
        total = sum(cand_grams.values())
        if total == 0:
            return 0.0
        clipped = sum(min(count, ref_grams[gram]) for gram, count in cand_grams.items())
        if clipped == 0:
            return 0.0
        log_precisions.append(math.log(clipped / total))
    geo_mean = math.exp(sum(log_precisions) / max_n)
    if len(cand) < len(ref):
        geo_mean *= math.exp(1.0 - len(ref) / len(cand))
    return geo_mean


def perplexity(text: str, scorer) -> float:
    """exp of the mean negative log token probability under the scorer."""
    result = scorer.score_conditional("", text)
    if not result.logprobs:
        raise NoTokensError("text produced no tokens")
    return math.exp(-sum(result.logprobs) / len(result.logprobs))


def mutual_information(
    pairs: list[tuple[str, str]],
    vocab_cap: int = DEFAULT_VOCAB_CAP,
    smoothing: float = 1.0,
) -> float:
    """MI in bits between initial-question tokens and follow-up tokens."""
    if not pairs:
        raise ValueError("pairs must be non-empty")
    if smoothing <= 0:
        raise ValueError("smoothing must be positive")
    initial_tokens = [content_tokens(initial) for initial, _ in pairs]
    follow_tokens = [content_tokens(follow) for _, follow in pairs]
    freq = Counter(tok for tokens in initial_tokens + follow_tokens for tok in tokens)
    vocab = {
        tok
        for tok, _ in sorted(freq.items(), key=lambda item: (-item[1], item[0]))[:vocab_cap]
    }

    joint: Counter[tuple[str, str]] = Counter()
    for xs, ys in zip(initial_tokens, follow_tokens):
        xs = [x for x in xs if x in vocab]
        ys = [y for y in ys if y in vocab]
        for x in xs:
            for y in ys:
                joint[(x, y)] += 1
    if not joint:
        raise EmptyAfterFilteringError("no token pairs after stopword/vocab filtering")

    x_terms = sorted({x for x, _ in joint})
    y_terms = sorted({y for _, y in joint})
    x_index = {term: i for i, term in enumerate(x_terms)}
    y_index = {term: i for i, term in enumerate(y_terms)}
    n_cells = len(x_terms) * len(y_terms)
    total = sum(joint.values()) + smoothing * n_cells

    x_counts = [0.0] * len(x_terms)
    y_counts = [0.0] * len(y_terms)
    joint_entropy_terms = []
    for (x, y), count in joint.items():
        x_counts[x_index[x]] += count
        y_counts[y_index[y]] += count
        p = (count + smoothing) / total
        joint_entropy_terms.append(p * math.log2(p))
    # All-zero cells share one smoothed probability.
    zero_cells = n_cells - len(joint)
    p_zero = smoothing / total
    h_joint = -(math.fsum(joint_entropy_terms) + zero_cells * p_zero * math.log2(p_zero))

    def entropy(counts: list[float], other_side: int) -> float:
        terms = []
        for count in counts:
            p = (count + smoothing * other_side) / total
            terms.append(p * math.log2(p))
        return -math.fsum(terms)

    h_x = entropy(x_counts, len(y_terms))
    h_y = entropy(y_counts, len(x_terms))
    return max(0.0, h_x + h_y - h_joint)


def semantic_distance(a: str, b: str, embedder) -> float:
    """100 times the cosine distance between the two texts' embeddings."""
    if not a or not b:
        raise ValueError("both texts must be non-empty")
    vec_a = embedder.embed(a)
    vec_b = embedder.embed(b)
    return 100.0 * (1.0 - cosine(vec_a.values, vec_b.values))
