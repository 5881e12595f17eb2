"""Automatic evaluation: topic consistency, MI, diversity, BLEU, perplexity,
semantic distances, and the ablation/beta-sweep report harnesses."""

from .lda import LdaModel, lda_fit, topic_consistency
from .reports import (
    ALL_METRICS,
    DEFAULT_BETAS,
    MetricReport,
    ablation_report,
    ablation_report_text,
    beta_sweep,
    beta_sweep_text,
    evaluate_result_dicts,
    render_table,
)
from .text import (
    bleu,
    distinct_n,
    mutual_information,
    perplexity,
    semantic_distance,
    ttr,
)

__all__ = [
    "ALL_METRICS",
    "DEFAULT_BETAS",
    "LdaModel",
    "MetricReport",
    "ablation_report",
    "ablation_report_text",
    "beta_sweep",
    "beta_sweep_text",
    "bleu",
    "distinct_n",
    "evaluate_result_dicts",
    "lda_fit",
    "mutual_information",
    "perplexity",
    "render_table",
    "semantic_distance",
    "topic_consistency",
    "ttr",
]
