"""Report assembly: the corpus-level metric report, the ablation distance
table, and the beta sweep.

Reports are emitted twice: a JSON document and an aligned plain-text
table. Sweep cells that cannot be computed are marked failed instead of
aborting the whole report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from ..backends.base import BackendSet
from ..errors import FollowgenError
from ..pipeline import PipelineConfig, PipelineResult, run_batch
from ..recognition import QAPair
from .lda import topic_consistency
from .text import bleu, distinct_n, mutual_information, perplexity, semantic_distance, ttr

DEFAULT_BETAS = (0.0, 0.5, 1.0, 1.5, 2.0, math.inf)

ALL_METRICS = (
    "topic_consistency",
    "mutual_information",
    "distinct_1",
    "distinct_2",
    "ttr",
    "bleu_1",
    "bleu_2",
    "perplexity",
)


class MissingTraceError(FollowgenError):
    pass


@dataclass
class MetricReport:
    topic_consistency: float | None = None
    mutual_information: float | None = None
    distinct_1: float | None = None
    distinct_2: float | None = None
    ttr: float | None = None
    bleu_1: float | None = None
    bleu_2: float | None = None
    perplexity: float | None = None
    per_sample: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "topic_consistency": self.topic_consistency,
            "mutual_information": self.mutual_information,
            "distinct_1": self.distinct_1,
            "distinct_2": self.distinct_2,
            "ttr": self.ttr,
            "bleu_1": self.bleu_1,
            "bleu_2": self.bleu_2,
            "perplexity": self.perplexity,
            "per_sample": self.per_sample,
        }

    def to_text(self) -> str:
        rows = [(name, _format_cell(getattr(self, name))) for name in ALL_METRICS]
        return render_table(["metric", "value"], rows)


def evaluate_result_dicts(
    result_dicts: list[dict],
    dataset: list[dict],
    backends: BackendSet,
    metrics: tuple[str, ...] = ALL_METRICS,
    seed: int = 0,
    lda_iterations: int = 200,
) -> MetricReport:
    """Metric report over generated results aligned by index with their
    dataset rows ({initial_question, answer, ...})."""
    if len(result_dicts) != len(dataset):
        raise ValueError(
            f"results ({len(result_dicts)}) and dataset ({len(dataset)}) lengths differ"
        )
    rows = []
    for result, item in zip(result_dicts, dataset):
        if result.get("status") != "ok":
            continue
        question = (result.get("question") or {}).get("text", "")
        knowledge = (result.get("trace") or {}).get("knowledge") or {}
        rows.append(
            {
                "initial_question": item["initial_question"],
                "context": f"{item['initial_question']} {item['answer']}",
                "generated": question,
                "wiki_text": knowledge.get("wiki_text", ""),
            }
        )
    if not rows:
        raise ValueError("no ok results to evaluate")

    report = MetricReport()
    questions = [row["generated"] for row in rows]
    if "topic_consistency" in metrics:
        report.topic_consistency = topic_consistency(
            [(row["context"], row["generated"]) for row in rows],
            iterations=lda_iterations,
            seed=seed,
        )
    if "mutual_information" in metrics:
        report.mutual_information = mutual_information(
            [(row["initial_question"], row["generated"]) for row in rows]
        )
    if "distinct_1" in metrics:
        report.distinct_1 = distinct_n(questions, 1)
    if "distinct_2" in metrics:
        report.distinct_2 = distinct_n(questions, 2)
    if "ttr" in metrics:
        report.ttr = ttr(questions)
    per_sample = []
    needs_bleu = "bleu_1" in metrics or "bleu_2" in metrics
    needs_ppl = "perplexity" in metrics
    for index, row in enumerate(rows):
        entry: dict = {"index": index, "question": row["generated"]}
        if needs_bleu and row["wiki_text"]:
            entry["bleu_1"] = bleu(row["wiki_text"], row["context"], max_n=1)
            entry["bleu_2"] = bleu(row["wiki_text"], row["context"], max_n=2)
        if needs_ppl:
            entry["perplexity"] = perplexity(row["generated"], backends.scorer)
        per_sample.append(entry)
    report.per_sample = per_sample
    if "bleu_1" in metrics:
        report.bleu_1 = _mean_of(per_sample, "bleu_1")
    if "bleu_2" in metrics:
        report.bleu_2 = _mean_of(per_sample, "bleu_2")
    if "perplexity" in metrics:
        report.perplexity = _mean_of(per_sample, "perplexity")
    return report


def ablation_report(
    results_by_variant: dict[str, list[PipelineResult]],
    backends: BackendSet,
) -> dict:
    """Mean pairwise semantic distances per variant.

    Columns: dis(wiki_k, q), dis(wiki_k, fq), dis(q, fq) where wiki_k is the
    selected knowledge, q the initial question, fq the generated follow-up.
    """
    table: dict[str, dict[str, float]] = {}
    for variant, results in results_by_variant.items():
        sums = {"dis_wiki_q": 0.0, "dis_wiki_fq": 0.0, "dis_q_fq": 0.0}
        count = 0
        for result in results:
            trace = result.trace
            if trace.knowledge is None or trace.question is None:
                raise MissingTraceError(
                    f"variant {variant!r}: result lacks knowledge/question trace"
                )
            wiki = trace.knowledge.wiki_text
            initial = trace.qa.question
            follow = trace.question.text
            sums["dis_wiki_q"] += semantic_distance(wiki, initial, backends.embedder)
            sums["dis_wiki_fq"] += semantic_distance(wiki, follow, backends.embedder)
            sums["dis_q_fq"] += semantic_distance(initial, follow, backends.embedder)
            count += 1
        if count == 0:
            raise MissingTraceError(f"variant {variant!r} has no results")
        table[variant] = {key: value / count for key, value in sums.items()}
    return {"columns": ["dis_wiki_q", "dis_wiki_fq", "dis_q_fq"], "rows": table}


def ablation_report_text(report: dict) -> str:
    rows = [
        (variant, *(f"{cells[col]:.2f}" for col in report["columns"]))
        for variant, cells in report["rows"].items()
    ]
    return render_table(["variant", "dis(wiki_k,q)", "dis(wiki_k,fq)", "dis(q,fq)"], rows)


def beta_sweep(
    corpus: list[QAPair],
    config: PipelineConfig,
    backends: BackendSet,
    betas: tuple[float, ...] = DEFAULT_BETAS,
    seed: int = 0,
    lda_iterations: int = 200,
) -> dict:
    """Re-run the pipeline per beta and score the selected Wiki knowledge
    against the context (BLEU-1/2, perplexity, topic consistency)."""
    if not betas:
        raise ValueError("betas must be non-empty")
    columns = {}
    for beta in betas:
        swept = _with_beta(config, beta)
        results, summary = run_batch(corpus, swept, backends)
        cells: dict[str, object] = {"ok": summary.ok, "failed": summary.failed}
        pairs = []
        for result in results:
            if result.ok and result.trace.knowledge is not None:
                context = f"{result.trace.qa.question} {result.trace.qa.answer}"
                pairs.append((context, result.trace.knowledge.wiki_text))
        for metric in ("bleu_1", "bleu_2", "perplexity", "topic_consistency"):
            try:
                if not pairs:
                    raise FollowgenError("no successful samples")
                if metric == "bleu_1":
                    value = _mean([bleu(wiki, ctx, 1) for ctx, wiki in pairs])
                elif metric == "bleu_2":
                    value = _mean([bleu(wiki, ctx, 2) for ctx, wiki in pairs])
                elif metric == "perplexity":
                    value = _mean([perplexity(wiki, backends.scorer) for ctx, wiki in pairs])
                else:
                    value = topic_consistency(pairs, iterations=lda_iterations, seed=seed)
                cells[metric] = value
            except Exception as err:  # noqa: BLE001 - cell-level failure marking
                cells[metric] = {"failed": f"{type(err).__name__}: {err}"}
        columns[beta_label(beta)] = cells
    return {
        "metrics": ["bleu_1", "bleu_2", "perplexity", "topic_consistency"],
        "betas": [beta_label(beta) for beta in betas],
        "columns": columns,
    }


def beta_sweep_text(report: dict) -> str:
    headers = ["metric", *report["betas"]]
    rows = []
    for metric in report["metrics"]:
        row = [metric]
        for beta in report["betas"]:
            row.append(_format_cell(report["columns"][beta].get(metric)))
        rows.append(tuple(row))
    return render_table(headers, rows)


def beta_label(beta: float) -> str:
    if math.isinf(beta):
        return "inf"
    if beta == int(beta):
        return str(int(beta))
    return str(beta)


def render_table(headers: list[str], rows: list[tuple]) -> str:
    """Aligned monospace table."""
    cells = [tuple(str(h) for h in headers)] + [tuple(str(c) for c in row) for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for row_no, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if row_no == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(headers))))
    return "\n".join(lines)


def _with_beta(config: PipelineConfig, beta: float) -> PipelineConfig:
    return replace(config, selection=replace(config.selection, beta=beta))


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def _mean_of(entries: list[dict], key: str) -> float | None:
    values = [entry[key] for entry in entries if key in entry]
    if not values:
        return None
    return _mean(values)


def _format_cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, dict):
        return "failed"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)
