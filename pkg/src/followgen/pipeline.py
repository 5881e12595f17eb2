"""Orchestration of Recognition -> Selection -> Fusion for one QA pair,
plus seeded batch execution over a corpus.

Failures are values, never exceptions, across the batch boundary: each
item yields a PipelineResult whose status carries the failing stage, and
the trace keeps everything produced before the failure. Per-item seeds
derive from the master seed and the item index so batches are
reproducible while items stay decorrelated.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from random import Random

from .backends.base import BackendSet, GenerationParams, WikiPage
from .fusion import (
    FollowUpQuestion,
    RelatedKnowledge,
    continue_knowledge,
    generate_followup,
)
from .prompting import (
    CONTINUE_KNOWLEDGE,
    EXPAND_ENTITY,
    EXTRACT_KEY_INFO,
    GENERATE_FOLLOWUP,
    load_template,
)
from .recognition import KeyInfo, QAPair, RankedPage, RecognitionConfig, recognize
from .selection import (
    KGNode,
    KnowledgeGraph,
    NodeScore,
    SelectionConfig,
    build_graph,
    export_graph,
    select_node,
)

VARIANTS = ("no_reranker", "no_kg_selection", "no_llm_knowledge")

STAGE_RECOGNITION = "recognition"
STAGE_SELECTION = "selection"
STAGE_FUSION = "fusion"


@dataclass(frozen=True)
class PipelineConfig:
    recognition: RecognitionConfig = RecognitionConfig()
    selection: SelectionConfig = SelectionConfig()
    generation: GenerationParams = GenerationParams()
    backends: dict = field(
        default_factory=lambda: {
            "chat": "mock",
            "embedder": "mock",
            "scorer": "mock",
            "search": "fixture",
        }
    )
    trace_level: str = "full"
    seed: int = 0
    prompts_dir: str | None = None

    def config_hash(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def with_item_seed(self, index: int) -> "PipelineConfig":
        """Per-item config: selection walk and generation seeds derived
        from the master seed and the item index."""
        item_seed = derive_seed(self.seed, index)
        return replace(
            self,
            selection=replace(self.selection, rng_seed=item_seed),
            generation=replace(self.generation, seed=item_seed),
        )


def derive_seed(master: int, index: int | str) -> int:
    digest = hashlib.blake2b(f"{master}:{index}".encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


@dataclass
class TraceRecord:
    qa: QAPair
    key_info: KeyInfo | None = None
    candidates: list[RankedPage] | None = None
    topic_page: WikiPage | None = None
    graph: KnowledgeGraph | None = None
    node_scores: list[NodeScore] | None = None
    selected_node: KGNode | None = None
    knowledge: RelatedKnowledge | None = None
    question: FollowUpQuestion | None = None
    timings_ms: dict = field(default_factory=dict)
    config_hash: str = ""
    prompt_versions: dict = field(default_factory=dict)

    def to_dict(self, trace_level: str = "full", include_timings: bool = False) -> dict:
        out: dict = {
            "qa": {"question": self.qa.question, "answer": self.qa.answer},
            "key_info": None
            if self.key_info is None
            else {"topic": self.key_info.topic, "keywords": list(self.key_info.keywords)},
            "candidates": None
            if self.candidates is None
            else [
                {"title": rp.page.title, "url": rp.page.url, "log_score": rp.log_score}
                for rp in self.candidates
            ],
            "topic_page": None
            if self.topic_page is None
            else {
                "title": self.topic_page.title,
                "url": self.topic_page.url,
                "definition": self.topic_page.definition,
            },
            "graph": None,
            "node_scores": None,
            "selected_node": None
            if self.selected_node is None
            else {
                "id": self.selected_node.id,
                "title": self.selected_node.title,
                "definition": self.selected_node.definition,
                "url": self.selected_node.url,
            },
            "knowledge": None
            if self.knowledge is None
            else {
                "wiki_text": self.knowledge.wiki_text,
                "fused_text": self.knowledge.fused_text,
                "source_node_id": self.knowledge.source_node_id,
            },
            "question": None
            if self.question is None
            else {"text": self.question.text, "trace_id": self.question.trace_id},
            "config_hash": self.config_hash,
            "prompt_versions": self.prompt_versions,
        }
        if trace_level == "full":
            if self.graph is not None:
                out["graph"] = export_graph(self.graph, self.node_scores)
            if self.node_scores is not None:
                out["node_scores"] = [asdict(score) for score in self.node_scores]
        if include_timings:
            out["timings_ms"] = dict(self.timings_ms)
        return out


@dataclass
class PipelineResult:
    status: str  # "ok" | "failed"
    trace: TraceRecord
    question: FollowUpQuestion | None = None
    failed_stage: str | None = None
    error: str | None = None
    trace_level: str = "full"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self, include_timings: bool = False) -> dict:
        return {
            "status": self.status,
            "failed_stage": self.failed_stage,
            "error": self.error,
            "question": None
            if self.question is None
            else {"text": self.question.text, "trace_id": self.question.trace_id},
            "trace": self.trace.to_dict(self.trace_level, include_timings=include_timings),
        }


def run(
    qa: QAPair,
    config: PipelineConfig,
    backends: BackendSet,
    variant: str | None = None,
) -> PipelineResult:
    """Execute the three stages; any stage failure becomes a failed result
    carrying the partial trace."""
    if variant is not None and variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    config_hash = config.config_hash()
    trace = TraceRecord(qa=qa, config_hash=config_hash)
    trace.prompt_versions = _prompt_versions(config.prompts_dir)
    rec_cfg = _pushdown_prompts(config.recognition, config.prompts_dir)
    sel_cfg = _pushdown_prompts(config.selection, config.prompts_dir)
    params = config.generation

    def observer(stage: str, value) -> None:
        if stage == "key_info":
            trace.key_info = value
        elif stage == "ranking":
            trace.candidates = value

    timer = time.perf_counter
    started = timer()
    try:
        recognition = recognize(
            qa,
            backends,
            rec_cfg,
            params=params,
            observer=observer,
            skip_rerank=(variant == "no_reranker"),
        )
        trace.topic_page = recognition.page
    except Exception as err:  # noqa: BLE001 - failures are values across the batch
        return _failed(trace, STAGE_RECOGNITION, err, config.trace_level)
    finally:
        trace.timings_ms[STAGE_RECOGNITION] = (timer() - started) * 1000.0

    started = timer()
    try:
        graph = build_graph(recognition.page, backends, sel_cfg, params=params)
        trace.graph = graph
        outcome = select_node(graph, recognition.key_info.query_text, backends, sel_cfg)
        trace.node_scores = outcome.all_scores
        selected = outcome.node
        if variant == "no_kg_selection":
            selected = _random_non_center(graph, sel_cfg.rng_seed)
        trace.selected_node = selected
    except Exception as err:  # noqa: BLE001
        return _failed(trace, STAGE_SELECTION, err, config.trace_level)
    finally:
        trace.timings_ms[STAGE_SELECTION] = (timer() - started) * 1000.0

    started = timer()
    try:
        trace_id = _trace_id(config_hash, qa)
        if variant == "no_llm_knowledge":
            knowledge = RelatedKnowledge(
                wiki_text=selected.definition,
                fused_text=selected.definition,
                source_node_id=selected.id,
            )
        else:
            knowledge = continue_knowledge(
                qa,
                selected.definition,
                backends,
                params=params,
                prompts_dir=config.prompts_dir,
                source_node_id=selected.id,
            )
        trace.knowledge = knowledge
        question = generate_followup(
            qa,
            knowledge,
            backends,
            params=params,
            prompts_dir=config.prompts_dir,
            trace_id=trace_id,
        )
        trace.question = question
    except Exception as err:  # noqa: BLE001
        return _failed(trace, STAGE_FUSION, err, config.trace_level)
    finally:
        trace.timings_ms[STAGE_FUSION] = (timer() - started) * 1000.0

    return PipelineResult(
        status="ok", trace=trace, question=question, trace_level=config.trace_level
    )


def run_ablation(
    qa: QAPair,
    config: PipelineConfig,
    backends: BackendSet,
    variant: str,
) -> PipelineResult:
    """Run one of the ablation variants (no_reranker, no_kg_selection,
    no_llm_knowledge)."""
    return run(qa, config, backends, variant=variant)


@dataclass
class BatchSummary:
    total: int
    ok: int
    failed: int
    failed_by_stage: dict = field(default_factory=dict)
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def run_batch(
    corpus: list[QAPair],
    config: PipelineConfig,
    backends: BackendSet,
    variant: str | None = None,
    workers: int = 4,
) -> tuple[list[PipelineResult], BatchSummary]:
    """Run every item with per-item seeds and bounded concurrency.

    One failing item never aborts the batch; results come back in input
    order.
    """
    if not corpus:
        raise ValueError("corpus must be non-empty")
    started = time.perf_counter()

    def run_item(index: int) -> PipelineResult:
        return run(corpus[index], config.with_item_seed(index), backends, variant=variant)

    if workers > 1 and len(corpus) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_item, range(len(corpus))))
    else:
        results = [run_item(i) for i in range(len(corpus))]

    failed_by_stage: dict[str, int] = {}
    for result in results:
        if not result.ok and result.failed_stage:
            failed_by_stage[result.failed_stage] = failed_by_stage.get(result.failed_stage, 0) + 1
    summary = BatchSummary(
        total=len(results),
        ok=sum(1 for r in results if r.ok),
        failed=sum(1 for r in results if not r.ok),
        failed_by_stage=failed_by_stage,
        wall_ms=(time.perf_counter() - started) * 1000.0,
    )
    return results, summary


def write_results(
    results: list[PipelineResult], path: str | Path, summary: BatchSummary | None = None
) -> None:
    """JSON-lines results (deterministic form, no timings) plus an optional
    summary sidecar."""
    path = Path(path)
    lines = [json.dumps(result.to_dict(), sort_keys=True) for result in results]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    if summary is not None:
        sidecar = path.with_suffix(path.suffix + ".summary.json")
        sidecar.write_text(json.dumps(summary.to_dict(), sort_keys=True, indent=2), encoding="utf-8")


def _failed(
    trace: TraceRecord, stage: str, err: Exception, trace_level: str
) -> PipelineResult:
    return PipelineResult(
        status="failed",
        trace=trace,
        failed_stage=stage,
        error=f"{type(err).__name__}: {err}",
        trace_level=trace_level,
    )


def _random_non_center(graph: KnowledgeGraph, seed: int) -> KGNode:
    candidates = sorted(node_id for node_id in graph.nodes if node_id != graph.center)
    rng = Random(derive_seed(seed, "uniform-node"))
    return graph.nodes[candidates[rng.randrange(len(candidates))]]


def _trace_id(config_hash: str, qa: QAPair) -> str:
    digest = hashlib.sha256(f"{config_hash}:{qa.question}:{qa.answer}".encode("utf-8"))
    return digest.hexdigest()[:16]


def _pushdown_prompts(stage_config, prompts_dir: str | None):
    if prompts_dir is None or stage_config.prompts_dir is not None:
        return stage_config
    return replace(stage_config, prompts_dir=prompts_dir)


def _prompt_versions(prompts_dir: str | None) -> dict:
    names = (EXTRACT_KEY_INFO, EXPAND_ENTITY, CONTINUE_KNOWLEDGE, GENERATE_FOLLOWUP)
    return {name: load_template(name, prompts_dir).version for name in names}
