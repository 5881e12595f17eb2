"""Deterministic offline backends.

Every reply is a pure function of the call inputs plus the configured seed,
so two identical calls are bitwise identical and full pipeline runs are
reproducible without any network access.

The chat mock recognizes the package's own prompt templates by their fixed
markers and derives a plausible reply from the prompt text; tests that need
exact control pass `rules` (substring -> canned reply, checked first).
"""

from __future__ import annotations

import hashlib
import math
import re
from typing import Sequence

from ..errors import TokenizationError
from ..textutil import content_tokens
from .base import Embedding, GenerationParams, TokenLogProbs, require_prompt

EMBED_DIM = 256

CONCEPT_VOCAB = [
    "Acceleration", "Atmosphere", "Bacteria", "Catalyst", "Cell", "Climate",
    "Combustion", "Conduction", "Current", "Density", "Diffusion", "Ecosystem",
    "Elasticity", "Electron", "Energy", "Entropy", "Enzyme", "Equilibrium",
    "Erosion", "Evaporation", "Fission", "Fluid", "Force", "Frequency",
    "Friction", "Genome", "Gravity", "Habitat", "Heat", "Hormone", "Inertia",
    "Insulation", "Ion", "Kinetics", "Magnetism", "Mass", "Membrane",
    "Metabolism", "Molecule", "Momentum", "Neuron", "Nucleus", "Orbit",
    "Oscillation", "Oxidation", "Particle", "Photon", "Pigment", "Plasma",
    "Polymer", "Pressure", "Protein", "Radiation", "Reaction", "Resonance",
    "Rotation", "Sediment", "Solvent", "Spectrum", "Temperature", "Turbulence",
    "Vacuum", "Velocity", "Wavelength", "Viscosity",
]

RELATION_LABELS = ["related to", "part of", "influences", "depends on", "example of", "causes"]


def _digest(*parts: object) -> int:
    joined = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(joined.encode("utf-8")).digest()[:8], "big")


def _pick(pool: Sequence[str], count: int, *key: object) -> list[str]:
    """Deterministically pick up to count distinct items from the pool."""
    chosen: list[str] = []
    i = 0
    while len(chosen) < count and len(chosen) < len(pool):
        candidate = pool[_digest(*key, i) % len(pool)]
        if candidate not in chosen:
            chosen.append(candidate)
        i += 1
        if i > 20 * count:
            break
    for candidate in pool:
        if len(chosen) >= count:
            break
        if candidate not in chosen:
            chosen.append(candidate)
    return chosen


class MockChatBackend:
    """Seeded, rule-overridable chat completion. Pure in (prompt, seed)."""

    def __init__(self, seed: int = 0, rules: Sequence[tuple[str, str]] = ()) -> None:
        self.seed = seed
        self.rules = list(rules)

    def chat_complete(self, prompt: str, params: GenerationParams) -> str:
        require_prompt(prompt)
        seed = params.seed if params.seed is not None else self.seed
        for pattern, response in self.rules:
            if pattern in prompt:
                return response
        if "TOPIC:" in prompt and "KEYWORDS:" in prompt:
            return self._extraction(prompt)
        if "Please continue writing the following sentences" in prompt:
            return self._continuation(prompt, seed)
        if "raise a follow-up question" in prompt:
            return self._followup(prompt, seed)
        if "concept map" in prompt:
            return self._expansion(prompt, seed)
        if "In one sentence, define" in prompt:
            return self._definition(prompt)
        if "Answer the following question" in prompt:
            return self._answer(prompt, seed)
        return f"mock-reply:{_digest(prompt, seed):016x}"

    @staticmethod
    def _qa_section(prompt: str) -> str:
        _, _, rest = prompt.partition("Question:")
        body, _, _ = rest.partition("Reply with exactly two lines")
        return body.replace("Answer:", " ")

    def _extraction(self, prompt: str) -> str:
        match = re.search(r"exactly (\d+) distinct", prompt)
        n = int(match.group(1)) if match else 3
        tokens = content_tokens(self._qa_section(prompt))
        freq: dict[str, int] = {}
        first_seen: dict[str, int] = {}
        for pos, tok in enumerate(tokens):
            freq[tok] = freq.get(tok, 0) + 1
            first_seen.setdefault(tok, pos)
        ranked = sorted(freq, key=lambda t: (-freq[t], first_seen[t]))
        filler = [w.lower() for w in CONCEPT_VOCAB]
        ranked += [w for w in filler if w not in freq]
        topic = ranked[0] if ranked else "topic"
        keywords = [t for t in ranked[1:] if t != topic][:n]
        return f"TOPIC: {topic}\nKEYWORDS: {', '.join(keywords)}"

    @staticmethod
    def _slot_texts(prompt: str) -> list[str]:
        return re.findall(r"\[(.*?)\]", prompt, re.DOTALL)

    def _continuation(self, prompt: str, seed: int) -> str:
        _, _, wiki_tail = prompt.partition("association with it.")
        slots = self._slot_texts(prompt)
        pool = sorted(set(content_tokens(wiki_tail)) | set(content_tokens(" ".join(slots))))
        words = _pick(pool, 3, "cont", prompt, seed)
        while len(words) < 3:
            words.append("context")
        return (
            f"Beyond this, {words[0]} is closely tied to {words[1]}, "
            f"and shifts in {words[2]} can change the overall picture."
        )

    def _followup(self, prompt: str, seed: int) -> str:
        # Scaffold words are all stopwords; the anchor word comes from the
        # question/answer slots so chained turns keep referring to terms the
        # page corpus actually contains, while the second word may draw on
        # the knowledge slot for variety.
        slots = self._slot_texts(prompt)
        qa_words = sorted(set(content_tokens(" ".join(slots[:2]))))
        all_words = sorted(set(content_tokens(" ".join(slots))))
        anchor_pool = qa_words or all_words
        anchor = (_pick(anchor_pool, 1, "fq-a", prompt, seed) or ["this"])[0]
        partner_pool = [w for w in all_words if w != anchor] or ["this"]
        partner = _pick(partner_pool, 1, "fq-b", prompt, seed)[0]
        templates = (
            "Why would {0} do this to {1}?",
            "How can {0} be more than {1} here?",
            "What if {0} had no {1} at all?",
            "Should {0} then be about {1} too?",
        )
        template = templates[_digest("fq-shape", prompt, seed) % len(templates)]
        return template.format(anchor, partner)

    def _expansion(self, prompt: str, seed: int) -> str:
        title_match = re.search(r'concept map around "(.+?)"', prompt, re.DOTALL)
        title = title_match.group(1) if title_match else "entity"
        count_match = re.search(r"List up to (\d+)", prompt)
        count = int(count_match.group(1)) if count_match else 3
        pool = [w for w in CONCEPT_VOCAB if w.lower() != title.lower()]
        children = _pick(pool, count, "expand", title, seed)
        lines = []
        for child in children:
            relation = RELATION_LABELS[_digest("rel", title, child, seed) % len(RELATION_LABELS)]
            lines.append(f"{child} | {relation}")
        return "\n".join(lines)

    def _definition(self, prompt: str) -> str:
        names = re.findall(r'"(.+?)"', prompt)
        title = names[0] if names else "This"
        context = names[1] if len(names) > 1 else "the topic"
        return f"{title} is a concept that frequently appears alongside {context} and helps explain how it behaves."

    def _answer(self, prompt: str, seed: int) -> str:
        # Stopword-only scaffolding: the answer echoes question terms
        # without introducing new content words.
        _, _, question = prompt.partition("Question:")
        words = _pick(sorted(set(content_tokens(question))), 2, "ans", prompt, seed)
        while len(words) < 2:
            words.append("it")
        return f"It is because of {words[0]}, and very much because of {words[1]}."


class MockEmbeddingBackend:
    """Hash-bucketed bag-of-words counts: cheap, deterministic, cosine-meaningful."""

    dim = EMBED_DIM

    def embed(self, text: str) -> Embedding:
        if not text:
            raise ValueError("text must be non-empty")
        values = [0.0] * EMBED_DIM
        for token in text.lower().split():
            bucket = _digest("embed", token) % EMBED_DIM
            values[bucket] += 1.0
        return Embedding(tuple(values))


class MockScorerBackend:
    """Conditional token scorer backed by a (condition, token) logprob table.

    Lookup order per target token: exact (condition, token) entry, then the
    condition's default, then uniform -ln(vocab_size).
    """

    def __init__(
        self,
        vocab_size: int = 100,
        table: dict[tuple[str, str], float] | None = None,
        condition_defaults: dict[str, float] | None = None,
    ) -> None:
        if vocab_size < 1:
            raise ValueError("vocab_size must be >= 1")
        self.vocab_size = vocab_size
        self.table = dict(table or {})
        self.condition_defaults = dict(condition_defaults or {})

    def score_conditional(self, condition: str, target: str) -> TokenLogProbs:
        tokens = target.split()
        if not tokens:
            raise TokenizationError("target has no tokens")
        uniform = -math.log(self.vocab_size)
        logprobs = []
        for token in tokens:
            lp = self.table.get((condition, token))
            if lp is None:
                lp = self.condition_defaults.get(condition, uniform)
            logprobs.append(lp)
        return TokenLogProbs(tuple(tokens), tuple(logprobs))
