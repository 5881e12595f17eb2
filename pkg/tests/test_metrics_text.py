from __future__ import annotations

import math
from random import Random

import pytest

from followgen.backends import MockEmbeddingBackend, MockScorerBackend
from followgen.errors import EmptyAfterFilteringError, NoNgramsError, NoTokensError
from followgen.metrics.text import (
    bleu,
    distinct_n,
    mutual_information,
    perplexity,
    semantic_distance,
    ttr,
)
from followgen.selection import cosine

from .oracles import mi_oracle


class TestDistinctN:
    def test_unigram_hand_count(self):
        assert distinct_n(["a b a"], 1) == pytest.approx(2 / 3, abs=1e-9)

    def test_all_unique_is_one(self):
        assert distinct_n(["x y z", "p q"], 1) == 1.0

    def test_bigram_hand_count(self):
        assert distinct_n(["a a a a"], 2) == pytest.approx(1 / 3, abs=1e-9)

    def test_no_ngrams_error(self):
        with pytest.raises(NoNgramsError):
            distinct_n(["one"], 2)


class TestTtr:
    def test_hand_count(self):
        assert ttr(["a b a"]) == pytest.approx(2 / 3, abs=1e-9)

    def test_all_distinct(self):
        assert ttr(["q w e r t"]) == 1.0

    def test_per_text_averaging(self):
        assert ttr(["a a", "b c"]) == pytest.approx(0.75, abs=1e-9)

    def test_pooled_mode(self):
        assert ttr(["a a", "b c"], pooled=True) == pytest.approx(3 / 4, abs=1e-9)

    def test_no_tokens_error(self):
        with pytest.raises(NoTokensError):
            ttr(["..."])


class TestBleu:
    def test_identity_is_exactly_one(self):
        assert bleu("the cat sat", "the cat sat", max_n=2) == 1.0

    def test_brevity_penalty_hand_value(self):
        # p1 = 1, candidate 2 tokens vs reference 3: BP = e^(1 - 3/2).
        assert bleu("the cat", "the cat sat", max_n=1) == pytest.approx(
            math.exp(-0.5), abs=1e-9
        )

    def test_zero_overlap_is_zero(self):
        assert bleu("alpha beta", "gamma delta", max_n=1) == 0.0

    def test_clipping(self):
        # "the the the" against "the cat": clipped count 1 of 3.
        assert bleu("the the the", "the cat", max_n=1) == pytest.approx(1 / 3, abs=1e-9)

    def test_bigram_order(self):
        value = bleu("the cat sat down", "the cat sat", max_n=2)
        p1, p2 = 3 / 4, 2 / 3
        assert value == pytest.approx(math.exp((math.log(p1) + math.log(p2)) / 2), abs=1e-9)


class TestPerplexity:
    def test_uniform_mock_equals_vocab_size(self):
        scorer = MockScorerBackend(vocab_size=100)
        assert perplexity("any text at all", scorer) == pytest.approx(100.0, abs=1e-6)

    def test_certain_scorer_is_one(self):
        scorer = MockScorerBackend(condition_defaults={"": 0.0})
        assert perplexity("sure thing", scorer) == pytest.approx(1.0, abs=1e-12)

    def test_biased_table_hand_value(self):
        scorer = MockScorerBackend(table={("", "a"): -1.0, ("", "b"): -3.0})
        assert perplexity("a b", scorer) == pytest.approx(math.exp(2.0), abs=1e-9)


class TestMutualInformation:
    def test_single_pair_smoothed_table(self):
        # One non-stopword token each side: a 1x1 joint with smoothing has
        # p(x,y) = px = py = 1, so MI is exactly 0 and finite.
        assert mutual_information([("cat", "cat")]) == 0.0

    def test_matches_full_table_oracle(self):
        rng = Random(13)
        vocab = ["red", "blue", "green", "cyan"]
        pairs = []
        for _ in range(60):
            xs = " ".join(rng.choice(vocab) for _ in range(3))
            ys = " ".join(rng.choice(vocab) for _ in range(3))
            pairs.append((xs, ys))
        got = mutual_information(pairs)
        expected = mi_oracle(
            [(x.split(), y.split()) for x, y in pairs]
        )
        assert got == pytest.approx(expected, abs=1e-9)

    def test_copy_corpus_binary_vocab_approaches_one_bit(self):
        rng = Random(7)
        pairs = []
        for _ in range(10_000):
            token = rng.choice(["heads", "tails"])
            pairs.append((token, token))
        value = mutual_information(pairs)
        assert abs(value - 1.0) < 0.05

    def test_independent_corpus_near_zero(self):
        rng = Random(3)
        vocab = [f"tok{i}" for i in range(20)]
        pairs = []
        for _ in range(10_000):
            xs = " ".join(rng.choice(vocab) for _ in range(5))
            ys = " ".join(rng.choice(vocab) for _ in range(5))
            pairs.append((xs, ys))
        assert mutual_information(pairs) < 0.01

    def test_nonnegative_always(self):
        rng = Random(1)
        vocab = ["one", "two", "three"]
        for trial in range(10):
            pairs = [
                (
                    " ".join(rng.choice(vocab) for _ in range(2)),
                    " ".join(rng.choice(vocab) for _ in range(2)),
                )
                for _ in range(5)
            ]
            assert mutual_information(pairs) >= 0.0

    def test_stopword_only_input_errors(self):
        with pytest.raises(EmptyAfterFilteringError):
            mutual_information([("the of and", "a an the")])

    def test_vocab_cap_limits_table(self):
        pairs = [(f"alpha word{i}", f"beta word{i}") for i in range(30)]
        capped = mutual_information(pairs, vocab_cap=2)
        assert capped >= 0.0


class TestSemanticDistance:
    def test_identical_texts_zero(self):
        embedder = MockEmbeddingBackend()
        assert semantic_distance("same text", "same text", embedder) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_orthogonal_pair_is_hundred(self):
        embedder = MockEmbeddingBackend()
        pair = None
        words = [f"w{i}" for i in range(40)]
        for a in words:
            for b in words:
                if a != b and cosine(embedder.embed(a).values, embedder.embed(b).values) == 0.0:
                    pair = (a, b)
                    break
            if pair:
                break
        assert pair is not None
        assert semantic_distance(pair[0], pair[1], embedder) == pytest.approx(100.0, abs=1e-9)

    def test_symmetric(self):
        embedder = MockEmbeddingBackend()
        d1 = semantic_distance("alpha beta", "gamma beta", embedder)
        d2 = semantic_distance("gamma beta", "alpha beta", embedder)
        assert d1 == pytest.approx(d2, abs=1e-12)
        assert d1 >= 0.0
