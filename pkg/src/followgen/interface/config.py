"""Config-file handling: one JSON document mirrors PipelineConfig and names
the backend implementations to instantiate.

Backend specs accept a shorthand string ("mock", "http", "fixture") or an
object with a "kind" plus keyword options. The bundled fixture page corpus
is the default search backend so the CLI works out of the box.
"""

from __future__ import annotations

import json
import math
from dataclasses import replace
from importlib import resources
from pathlib import Path

from ..backends import (
    BackendSet,
    HttpChatBackend,
    HttpEmbeddingBackend,
    HttpScorerBackend,
    MockChatBackend,
    MockEmbeddingBackend,
    MockScorerBackend,
    PageStore,
)
from ..backends.base import GenerationParams
from ..pipeline import PipelineConfig
from ..recognition import RecognitionConfig
from ..selection import SelectionConfig

DEFAULT_BACKENDS = {
    "chat": {"kind": "mock"},
    "embedder": {"kind": "mock"},
    "scorer": {"kind": "mock"},
    "search": {"kind": "fixture"},
}


def bundled_fixture_dir(name: str = "pages") -> Path:
    return Path(str(resources.files("followgen.fixtures").joinpath(name)))


def bundled_triplets_path() -> Path:
    return Path(str(resources.files("followgen.fixtures").joinpath("triplets.jsonl")))


def _parse_beta(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        return float(value)
    return float(value)


def load_config(path: str | Path | None) -> PipelineConfig:
    """Build a PipelineConfig from a JSON file (or defaults when path is None)."""
    raw: dict = {}
    if path is not None:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    recognition = RecognitionConfig(**raw.get("recognition", {}))
    selection_raw = dict(raw.get("selection", {}))
    if "beta" in selection_raw:
        selection_raw["beta"] = _parse_beta(selection_raw["beta"])
    selection = SelectionConfig(**selection_raw)
    generation = GenerationParams(**raw.get("generation", {}))
    backends = {**DEFAULT_BACKENDS, **_normalize_specs(raw.get("backends", {}))}
    return PipelineConfig(
        recognition=recognition,
        selection=selection,
        generation=generation,
        backends=backends,
        trace_level=raw.get("trace_level", "full"),
        seed=raw.get("seed", 0),
        prompts_dir=raw.get("prompts_dir"),
    )


def _normalize_specs(specs: dict) -> dict:
    normalized = {}
    for name, spec in specs.items():
        if isinstance(spec, str):
            normalized[name] = {"kind": spec}
        else:
            normalized[name] = dict(spec)
    return normalized


def apply_backend_overrides(config: PipelineConfig, overrides: list[str]) -> PipelineConfig:
    """Apply CLI --backend name=kind overrides onto the config."""
    specs = {name: dict(spec) for name, spec in config.backends.items()}
    for override in overrides:
        name, _, kind = override.partition("=")
        if not kind:
            raise ValueError(f"--backend expects name=kind, got {override!r}")
        if name not in DEFAULT_BACKENDS:
            raise ValueError(f"unknown backend name {name!r}")
        specs[name] = {"kind": kind}
    return replace(config, backends=specs)


def build_backends(config: PipelineConfig, base_dir: str | Path | None = None) -> BackendSet:
    """Instantiate the backend set named by the config."""
    specs = {**DEFAULT_BACKENDS, **_normalize_specs(config.backends)}
    base = Path(base_dir) if base_dir else Path.cwd()

    def options(spec: dict) -> dict:
        return {key: value for key, value in spec.items() if key != "kind"}

    chat_spec = specs["chat"]
    if chat_spec["kind"] == "mock":
        chat = MockChatBackend(**options(chat_spec))
    elif chat_spec["kind"] == "http":
        chat = HttpChatBackend(**options(chat_spec))
    else:
        raise ValueError(f"unknown chat backend kind {chat_spec['kind']!r}")

    embed_spec = specs["embedder"]
    if embed_spec["kind"] == "mock":
        embedder = MockEmbeddingBackend()
    elif embed_spec["kind"] == "http":
        embedder = HttpEmbeddingBackend(**options(embed_spec))
    else:
        raise ValueError(f"unknown embedder backend kind {embed_spec['kind']!r}")

    scorer_spec = specs["scorer"]
    if scorer_spec["kind"] == "mock":
        scorer = MockScorerBackend(**options(scorer_spec))
    elif scorer_spec["kind"] == "http":
        scorer = HttpScorerBackend(**options(scorer_spec))
    else:
        raise ValueError(f"unknown scorer backend kind {scorer_spec['kind']!r}")

    search_spec = specs["search"]
    if search_spec["kind"] == "fixture":
        corpus_dir = search_spec.get("corpus_dir")
        if corpus_dir is None:
            search = PageStore.from_dir(bundled_fixture_dir())
        else:
            corpus_path = Path(corpus_dir)
            if not corpus_path.is_absolute():
                corpus_path = base / corpus_path
            search = PageStore.from_dir(corpus_path)
    else:
        raise ValueError(f"unknown search backend kind {search_spec['kind']!r}")

    return BackendSet(chat=chat, embedder=embedder, scorer=scorer, search=search)
